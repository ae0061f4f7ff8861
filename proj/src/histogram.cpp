#include "sauna/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sauna {

namespace {

// Equal-count cut positions for one sorted value array. Returns (rank, coord)
// pairs: `rank` tuples fall below the cut, whose coordinate is the midpoint
// between the adjacent distinct values. Tuples sharing the boundary value go
// to the lower slice, which can swallow a cut entirely; later cuts re-target
// an even share of what remains so one long run does not skew the rest.
std::vector<std::pair<Index, double>> quantileCuts(const std::vector<double>& sorted, Index slices) {
  std::vector<std::pair<Index, double>> cuts;
  const Index m = static_cast<Index>(sorted.size());
  Index prev = 0;
  for (Index k = 1; k < slices; ++k) {
    const Index slicesLeft = slices - k + 1;
    Index rank = prev + std::llround(static_cast<double>(m - prev) / static_cast<double>(slicesLeft));
    if (rank <= prev || rank >= m) continue;
    const double lowVal = sorted[rank - 1];
    while (rank < m && sorted[rank] == lowVal) ++rank;  // duplicates stay below
    if (rank >= m) break;
    cuts.emplace_back(rank, 0.5 * (sorted[rank - 1] + sorted[rank]));
    prev = rank;
  }
  return cuts;
}

struct Builder {
  const Dataset& ds;
  Index fanout;
  std::vector<Bucket> buckets;

  void build(Index dim, Box cell, std::vector<Index> rows) {
    const Index d = ds.numericDims();
    if (dim == d) {
      buckets.push_back({std::move(cell), static_cast<Index>(rows.size())});
      return;
    }
    const Vec& column = ds.numericColumn(dim);
    std::sort(rows.begin(), rows.end(),
              [&](Index a, Index b) { return column(a) < column(b); });
    std::vector<double> values(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) values[i] = column(rows[i]);

    auto cuts = quantileCuts(values, fanout);
    Index begin = 0;
    double lo = cell.lo(dim);
    for (std::size_t c = 0; c <= cuts.size(); ++c) {
      const Index end = c < cuts.size() ? cuts[c].first : static_cast<Index>(rows.size());
      const double hi = c < cuts.size() ? cuts[c].second : cell.hi(dim);
      Box slice = cell;
      slice.lo(dim) = lo;
      slice.hi(dim) = hi;
      build(dim + 1, std::move(slice),
            std::vector<Index>(rows.begin() + begin, rows.begin() + end));
      begin = end;
      lo = hi;
    }
  }
};

}  // namespace

Histogram buildEquiDepth(const Dataset& ds, Index budget) {
  if (budget < 1) throw std::invalid_argument("histogram budget must be >= 1");
  const Index d = ds.numericDims();
  if (d < 1) throw std::invalid_argument("dataset has no numeric dimensions");

  const Index fanout =
      std::max<Index>(1, std::llround(std::pow(static_cast<double>(budget), 1.0 / static_cast<double>(d))));

  Builder builder{ds, fanout, {}};
  std::vector<Index> all(static_cast<std::size_t>(ds.n()));
  std::iota(all.begin(), all.end(), Index{0});
  builder.build(0, ds.domain(), std::move(all));

  Histogram h;
  h.buckets = std::move(builder.buckets);
  h.domain = ds.domain();
  h.totalCount = ds.n();
  return h;
}

double estimateCardinality(const Histogram& h, const Box& q) {
  if (q.dims() != h.dims()) throw std::invalid_argument("estimateCardinality: dimension mismatch");
  double total = 0.0;
  for (const auto& bucket : h.buckets) {
    if (bucket.count == 0) continue;
    double frac = 1.0;
    for (Index i = 0; i < q.dims() && frac > 0.0; ++i) {
      const double bl = bucket.box.lo(i), bh = bucket.box.hi(i);
      const double overlap = std::min(bh, q.hi(i)) - std::max(bl, q.lo(i));
      if (bh > bl) {
        frac *= std::max(0.0, overlap) / (bh - bl);
      } else {
        // flat bucket dimension: all tuples share one coordinate
        frac *= overlap >= 0.0 ? 1.0 : 0.0;
      }
    }
    total += frac * static_cast<double>(bucket.count);
  }
  return total;
}

Vec minDistPoint(const Box& q, const Box& bucket) {
  Vec p(q.dims());
  for (Index i = 0; i < q.dims(); ++i) {
    if (bucket.hi(i) < q.lo(i)) {
      p(i) = bucket.hi(i);
    } else if (bucket.lo(i) > q.hi(i)) {
      p(i) = bucket.lo(i);
    } else {
      p(i) = std::clamp(q.lo(i), bucket.lo(i), bucket.hi(i));  // any shared coordinate
    }
  }
  return p;
}

Vec maxDistPoint(const Box& q, const Box& bucket) {
  Vec p(q.dims());
  for (Index i = 0; i < q.dims(); ++i) {
    const double dLo = perDimDistance(bucket.lo(i), q.lo(i), q.hi(i));
    const double dHi = perDimDistance(bucket.hi(i), q.lo(i), q.hi(i));
    p(i) = dLo > dHi ? bucket.lo(i) : bucket.hi(i);
  }
  return p;
}

double minDist(const Box& q, const Box& bucket, const Metric& m) {
  if (q.dims() != bucket.dims()) throw std::invalid_argument("minDist: dimension mismatch");
  return boxDistance(minDistPoint(q, bucket), q, m);
}

double maxDist(const Box& q, const Box& bucket, const Metric& m) {
  if (q.dims() != bucket.dims()) throw std::invalid_argument("maxDist: dimension mismatch");
  return boxDistance(maxDistPoint(q, bucket), q, m);
}

void saveHistogram(const Histogram& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write histogram '" + path + "'");
  out << h.dims() << ' ' << h.totalCount << '\n';
  for (const auto& bucket : h.buckets) {
    for (Index i = 0; i < bucket.box.dims(); ++i) {
      out << formatDouble(bucket.box.lo(i)) << ' ' << formatDouble(bucket.box.hi(i)) << ' ';
    }
    out << bucket.count << '\n';
  }
  if (!out) throw std::runtime_error("failed writing histogram '" + path + "'");
}

Histogram loadHistogram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open histogram '" + path + "'");
  Histogram h;
  Index d = 0;
  if (!(in >> d >> h.totalCount) || d < 1) {
    throw std::runtime_error("histogram '" + path + "': bad header");
  }
  Index runningCount = 0;
  double first = 0.0;
  while (in >> first) {
    Bucket b{Box{Vec(d), Vec(d)}, 0};
    b.box.lo(0) = first;
    if (!(in >> b.box.hi(0))) throw std::runtime_error("histogram '" + path + "': truncated bucket");
    for (Index i = 1; i < d; ++i) {
      if (!(in >> b.box.lo(i) >> b.box.hi(i))) {
        throw std::runtime_error("histogram '" + path + "': truncated bucket");
      }
    }
    if (!(in >> b.count)) throw std::runtime_error("histogram '" + path + "': missing bucket count");
    runningCount += b.count;
    h.buckets.push_back(std::move(b));
  }
  if (h.buckets.empty()) throw std::runtime_error("histogram '" + path + "': no buckets");
  if (runningCount != h.totalCount) {
    throw std::runtime_error("histogram '" + path + "': bucket counts disagree with header");
  }
  h.domain = h.buckets[0].box;
  for (const auto& bucket : h.buckets) {
    h.domain.lo = h.domain.lo.min(bucket.box.lo);
    h.domain.hi = h.domain.hi.max(bucket.box.hi);
  }
  return h;
}

Index histogramByteEstimate(const Histogram& h) {
  return static_cast<Index>(h.buckets.size()) * (2 * h.dims() + 1) * 8;
}

}  // namespace sauna
