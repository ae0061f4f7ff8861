#include "sauna/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sauna {

std::uint64_t Rng::below(std::uint64_t bound) {
  // rejection keeps the draw unbiased
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = eng_();
  } while (x >= limit);
  return x % bound;
}

double Rng::gaussian(double mean, double stddev) {
  if (hasSpare_) {
    hasSpare_ = false;
    return mean + stddev * spare_;
  }
  // Box-Muller, trigonometric form: no rejection, fixed consumption order
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  constexpr double twoPi = 6.283185307179586;
  spare_ = mag * std::sin(twoPi * u2);
  hasSpare_ = true;
  return mean + stddev * mag * std::cos(twoPi * u2);
}

ZipfSampler::ZipfSampler(Index values, double z) {
  if (values < 1) throw std::invalid_argument("zipf sampler needs at least one value");
  cdf_.resize(static_cast<std::size_t>(values));
  double sum = 0.0;
  for (Index r = 1; r <= values; ++r) {
    sum += std::pow(static_cast<double>(r), -z);
    cdf_[static_cast<std::size_t>(r - 1)] = sum;
  }
  for (auto& c : cdf_) c /= sum;
  cdf_.back() = 1.0;
}

Index ZipfSampler::draw(Rng& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<Index>(it - cdf_.begin()) + 1;
}

std::vector<Index> zipfFrequencies(Index n, Index values, double z) {
  if (values < 1 || n < 0) throw std::invalid_argument("bad zipf apportionment arguments");
  std::vector<double> share(static_cast<std::size_t>(values));
  double sum = 0.0;
  for (Index r = 1; r <= values; ++r) {
    share[static_cast<std::size_t>(r - 1)] = std::pow(static_cast<double>(r), -z);
    sum += share[static_cast<std::size_t>(r - 1)];
  }

  std::vector<Index> freq(static_cast<std::size_t>(values));
  std::vector<std::pair<double, Index>> remainders;
  remainders.reserve(static_cast<std::size_t>(values));
  Index assigned = 0;
  for (Index r = 0; r < values; ++r) {
    const double exact = static_cast<double>(n) * share[static_cast<std::size_t>(r)] / sum;
    freq[static_cast<std::size_t>(r)] = static_cast<Index>(std::floor(exact));
    assigned += freq[static_cast<std::size_t>(r)];
    remainders.emplace_back(exact - std::floor(exact), r);
  }
  // largest remainders first, rank order breaking ties
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (Index i = 0; i < n - assigned; ++i) {
    ++freq[static_cast<std::size_t>(remainders[static_cast<std::size_t>(i)].second)];
  }
  return freq;
}

void GenSpec::validate() const {
  if (n < 1) throw std::invalid_argument("generator needs n >= 1");
  if (dims < 1) throw std::invalid_argument("generator needs dims >= 1");
  if (!(zipf >= 0)) throw std::invalid_argument("zipf parameter must be >= 0");
  if (kind == Kind::Gauss) {
    if (bells < 1) throw std::invalid_argument("gauss generator needs bells >= 1");
    if (variance == 0 || !std::isfinite(variance)) {
      throw std::invalid_argument("gauss variance must be positive (or negative to auto-select)");
    }
  }
  if (kind == Kind::Array && valuesPerDim < 1) {
    throw std::invalid_argument("array generator needs at least one value per dimension");
  }
}

namespace {

Schema numericSchema(Index dims) {
  Schema s;
  for (Index i = 0; i < dims; ++i) {
    s.attributes.push_back({"x" + std::to_string(i), AttrKind::Numeric});
  }
  return s;
}

void checkDomain(const Box& domain, Index dims) {
  if (domain.dims() != dims) throw std::invalid_argument("domain dimensionality mismatch");
  if ((domain.lo >= domain.hi).any()) throw std::invalid_argument("domain must satisfy lo < hi");
}

}  // namespace

Dataset genGauss(const GenSpec& spec, const Box& domain) {
  spec.validate();
  if (spec.kind != GenSpec::Kind::Gauss) throw std::invalid_argument("spec kind is not gauss");
  checkDomain(domain, spec.dims);

  Rng rng(spec.seed);

  std::vector<Vec> centers;
  centers.reserve(static_cast<std::size_t>(spec.bells));
  for (Index b = 0; b < spec.bells; ++b) {
    Vec c(spec.dims);
    for (Index i = 0; i < spec.dims; ++i) c(i) = rng.uniformIn(domain.lo(i), domain.hi(i));
    centers.push_back(std::move(c));
  }

  Vec stddev(spec.dims);
  for (Index i = 0; i < spec.dims; ++i) {
    stddev(i) = spec.variance > 0 ? std::sqrt(spec.variance)
                                  : (domain.hi(i) - domain.lo(i)) / 20.0;
  }

  ZipfSampler bellPick(spec.bells, spec.zipf);
  std::vector<Vec> cols(static_cast<std::size_t>(spec.dims),
                        Vec(static_cast<Index>(spec.n)));
  for (Index row = 0; row < spec.n; ++row) {
    const Vec& center = centers[static_cast<std::size_t>(bellPick.draw(rng) - 1)];
    for (Index i = 0; i < spec.dims; ++i) {
      double v = 0.0;
      for (int attempt = 0; attempt < 64; ++attempt) {
        v = rng.gaussian(center(i), stddev(i));
        if (v >= domain.lo(i) && v <= domain.hi(i)) break;
      }
      cols[static_cast<std::size_t>(i)](row) = std::clamp(v, domain.lo(i), domain.hi(i));
    }
  }
  return Dataset(numericSchema(spec.dims), std::move(cols), {}, domain);
}

Dataset genArray(const GenSpec& spec, const Box& domain) {
  spec.validate();
  if (spec.kind != GenSpec::Kind::Array) throw std::invalid_argument("spec kind is not array");
  checkDomain(domain, spec.dims);

  Rng rng(spec.seed);
  const Index v = spec.valuesPerDim;
  const auto freq = zipfFrequencies(spec.n, v, spec.zipf);

  std::vector<Vec> cols;
  cols.reserve(static_cast<std::size_t>(spec.dims));
  for (Index dim = 0; dim < spec.dims; ++dim) {
    // rank r maps to the r-th evenly spaced value; endpoints stay exact
    Vec values(v);
    for (Index j = 0; j < v; ++j) {
      if (v == 1) {
        values(j) = 0.5 * (domain.lo(dim) + domain.hi(dim));
      } else if (j == v - 1) {
        values(j) = domain.hi(dim);
      } else {
        values(j) = domain.lo(dim) + static_cast<double>(j) *
                        (domain.hi(dim) - domain.lo(dim)) / static_cast<double>(v - 1);
      }
    }
    Vec col(spec.n);
    Index at = 0;
    for (Index r = 0; r < v; ++r) {
      for (Index k = 0; k < freq[static_cast<std::size_t>(r)]; ++k) col(at++) = values(r);
    }
    // Fisher-Yates, independent per attribute
    for (Index i = spec.n - 1; i > 0; --i) {
      const Index j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(col(i), col(j));
    }
    cols.push_back(std::move(col));
  }
  return Dataset(numericSchema(spec.dims), std::move(cols), {}, domain);
}

std::vector<BoxQuery> genWorkload(const Box& domain, Index count, Index dims) {
  if (count < 1) throw std::invalid_argument("workload needs count >= 1");
  checkDomain(domain, dims);

  if (count == 1) {
    BoxQuery q;
    q.box = domain;
    return {q};
  }

  Index grid = 1;  // smallest g with g^dims >= count
  while (true) {
    Index cells = 1;
    bool enough = false;
    for (Index i = 0; i < dims; ++i) {
      cells *= grid;
      if (cells >= count) {
        enough = true;
        break;
      }
    }
    if (enough) break;
    ++grid;
  }

  Index cells = 1;
  for (Index i = 0; i < dims; ++i) cells *= grid;

  auto tileAt = [&](std::vector<Index>& idx) {
    BoxQuery q;
    q.box.lo = Vec(dims);
    q.box.hi = Vec(dims);
    for (Index i = 0; i < dims; ++i) {
      const double w = (domain.hi(i) - domain.lo(i)) / static_cast<double>(grid);
      q.box.lo(i) = domain.lo(i) + static_cast<double>(idx[static_cast<std::size_t>(i)]) * w;
      q.box.hi(i) = idx[static_cast<std::size_t>(i)] == grid - 1
                        ? domain.hi(i)
                        : domain.lo(i) + static_cast<double>(idx[static_cast<std::size_t>(i)] + 1) * w;
    }
    return q;
  };

  std::vector<BoxQuery> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<Index> idx(static_cast<std::size_t>(dims), 0);
  for (Index cell = 0; cell < cells; ++cell) {
    BoxQuery q = tileAt(idx);
    if (static_cast<Index>(out.size()) < count) {
      out.push_back(std::move(q));
    } else {
      // surplus tiles fold into the final query's bounding box so the
      // requested count still covers the domain
      out.back().box.lo = out.back().box.lo.min(q.box.lo);
      out.back().box.hi = out.back().box.hi.max(q.box.hi);
    }
    for (Index i = dims - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < grid) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return out;
}

}  // namespace sauna
