#include "sauna/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace sauna {

std::vector<Index> executeBox(const Dataset& ds, const BoxQuery& q) {
  if (q.dims() != ds.numericDims()) throw std::invalid_argument("executeBox: dimension mismatch");
  if (q.dims() < 1) throw std::invalid_argument("box queries need a numeric dimension");
  validateQuery(q);

  // First dimension seeds the candidate list, the rest filter it in place.
  std::vector<Index> hits;
  const Vec& first = ds.numericColumn(0);
  for (Index row = 0; row < ds.n(); ++row) {
    const double v = first(row);
    if (v >= q.box.lo(0) && v <= q.box.hi(0)) hits.push_back(row);
  }
  for (Index dim = 1; dim < ds.numericDims(); ++dim) {
    const Vec& col = ds.numericColumn(dim);
    const double lo = q.box.lo(dim), hi = q.box.hi(dim);
    std::erase_if(hits, [&](Index row) { return col(row) < lo || col(row) > hi; });
  }
  for (const auto& [attr, label] : q.catEquals) {
    Index c = ds.catIndexOf(attr);
    if (c < 0) throw std::invalid_argument("unknown categorical attribute '" + attr + "'");
    const std::int32_t want = ds.catStats(c).code(label);
    if (want < 0) return {};  // value absent, nothing can match
    const auto& col = ds.catColumn(c);
    std::erase_if(hits, [&](Index row) { return col[row] != want; });
  }
  return hits;
}

AnswerSet topNSequential(const Dataset& ds, const BoxQuery& q, Index n, const Metric& m) {
  if (n < 1) throw std::invalid_argument("topNSequential: N must be >= 1");
  validateQuery(q);
  validateMetric(m, q.dims());

  std::vector<std::pair<double, Index>> scored;
  scored.reserve(static_cast<std::size_t>(ds.n()));
  for (Index row = 0; row < ds.n(); ++row) {
    const double d = rowDistance(ds, row, q, m);
    if (std::isfinite(d)) scored.emplace_back(d, row);
  }
  const Index k = std::min<Index>(n, static_cast<Index>(scored.size()));
  std::partial_sort(scored.begin(), scored.begin() + k, scored.end());
  scored.resize(static_cast<std::size_t>(k));

  AnswerSet out;
  out.originQuery = q;
  out.ranked.reserve(scored.size());
  for (const auto& [d, row] : scored) out.ranked.emplace_back(row, d);
  return out;
}

OptResult optimalRelaxation(const Dataset& ds, const BoxQuery& q, Index n, const Metric& m) {
  AnswerSet top = topNSequential(ds, q, n, m);
  if (top.size() < n) {
    throw std::invalid_argument("optimalRelaxation: only " + std::to_string(top.size()) +
                                " eligible tuples for N=" + std::to_string(n));
  }
  OptResult out;
  out.relaxedQuery = q;
  for (const auto& [row, dist] : top.ranked) {
    for (Index i = 0; i < ds.numericDims(); ++i) {
      const double v = ds.numericColumn(i)(row);
      out.relaxedQuery.box.lo(i) = std::min(out.relaxedQuery.box.lo(i), v);
      out.relaxedQuery.box.hi(i) = std::max(out.relaxedQuery.box.hi(i), v);
    }
  }
  out.retrievedCount = static_cast<Index>(executeBox(ds, out.relaxedQuery).size());
  return out;
}

ManualResult manualSimulation(const Dataset& ds, const BoxQuery& q, Index n) {
  if (n < 1) throw std::invalid_argument("manualSimulation: N must be >= 1");
  validateQuery(q);
  const Box& domain = ds.domain();

  BoxQuery cur = q;
  ManualResult res;
  while (true) {
    ++res.iterations;
    const auto hits = executeBox(ds, cur);
    res.tuplesScanned += static_cast<Index>(hits.size());
    res.answersReturned = static_cast<Index>(hits.size());
    if (res.answersReturned >= n) break;
    if (cur.box.contains(domain)) break;  // nothing left to widen into

    for (Index i = 0; i < cur.dims(); ++i) {
      const double width = cur.box.hi(i) - cur.box.lo(i);
      const double grow = 0.1 * (width > 0 ? width : domain.hi(i) - domain.lo(i));
      cur.box.lo(i) = std::max(cur.box.lo(i) - grow, std::min(domain.lo(i), cur.box.lo(i)));
      cur.box.hi(i) = std::min(cur.box.hi(i) + grow, std::max(domain.hi(i), cur.box.hi(i)));
    }
  }
  return res;
}

void writeAnswerCsv(const AnswerSet& answers, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "tupleIndex,distance\n";
  for (const auto& [row, dist] : answers.ranked) {
    out << row << ',' << formatDouble(dist) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace sauna
