#include "sauna/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sauna {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Executed boxes get a hair of slack so a tuple sitting exactly on the
// relaxation radius cannot fall out of the rectangle through rounding in
// l - r/w. Answer filtering still applies the exact radius.
double inflate(double r) { return r * (1.0 + 1e-12); }

double accumulate(const Histogram& h, const BoxQuery& q, Index n, const Metric& m, bool useMax) {
  if (h.buckets.empty()) throw std::invalid_argument("histogram has no buckets");
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  validateQuery(q);
  validateMetric(m, q.dims());

  std::vector<std::pair<double, Index>> order;  // (distance, count)
  order.reserve(h.buckets.size());
  for (const auto& bucket : h.buckets) {
    const double d = useMax ? maxDist(q.box, bucket.box, m) : minDist(q.box, bucket.box, m);
    order.emplace_back(d, bucket.count);
  }
  std::sort(order.begin(), order.end());

  Index cumulative = 0;
  for (const auto& [dist, count] : order) {
    cumulative += count;
    if (cumulative >= n) return dist;
  }
  // fewer than N tuples exist anywhere: open the query to the whole domain
  return fullDomainDistance(q.box, m.weights, h.domain);
}

}  // namespace

std::string relaxModeName(RelaxMode mode) {
  return mode == RelaxMode::BoxPreserving ? "box-preserving" : "distance-preserving";
}

RelaxMode parseRelaxMode(const std::string& name) {
  if (name == "box-preserving" || name == "box") return RelaxMode::BoxPreserving;
  if (name == "distance-preserving" || name == "distance") return RelaxMode::DistancePreserving;
  throw std::invalid_argument("unknown mode '" + name +
                              "' (expected box-preserving or distance-preserving)");
}

double restartsDistance(const Histogram& h, const BoxQuery& q, Index n, const Metric& m) {
  return accumulate(h, q, n, m, /*useMax=*/false);
}

double noRestartsDistance(const Histogram& h, const BoxQuery& q, Index n, const Metric& m) {
  return accumulate(h, q, n, m, /*useMax=*/true);
}

double dynamicDistance(double dRestarts, double dNoRestarts, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0,1]");
  if (dRestarts > dNoRestarts) {
    throw std::invalid_argument("restarts distance exceeds no-restarts distance");
  }
  return dRestarts + alpha * (dNoRestarts - dRestarts);
}

double fullDomainDistance(const Box& q, const Vec& weights, const Box& domain) {
  double r = 0.0;
  for (Index i = 0; i < q.dims(); ++i) {
    const double need = std::max({q.lo(i) - domain.lo(i), domain.hi(i) - q.hi(i), 0.0});
    r = std::max(r, weights(i) * need);
  }
  return r;
}

BoxQuery expandQuery(const BoxQuery& q, double r, const Vec& weights, const Box& domain) {
  if (!(r >= 0.0)) throw std::invalid_argument("relaxation distance must be >= 0");
  if (weights.size() != q.dims() || domain.dims() != q.dims()) {
    throw std::invalid_argument("expandQuery: dimension mismatch");
  }
  BoxQuery out = q;
  for (Index i = 0; i < q.dims(); ++i) {
    // a zero weight leaves the dimension unconstrained at any radius,
    // including zero: its distance contribution is always nil
    const double step = weights(i) > 0 ? r / weights(i) : kInf;
    // clamp the growth at the domain, never shrinking a query that exceeds it
    out.box.lo(i) = std::max(q.box.lo(i) - step, std::min(domain.lo(i), q.box.lo(i)));
    out.box.hi(i) = std::min(q.box.hi(i) + step, std::max(domain.hi(i), q.box.hi(i)));
  }
  return out;
}

std::vector<Index> filterDistancePreserving(const Dataset& ds, const std::vector<Index>& tuples,
                                            const BoxQuery& q, double r, const Metric& m) {
  if (r == kInf) return tuples;
  std::vector<Index> kept;
  kept.reserve(tuples.size());
  for (Index row : tuples) {
    if (rowDistance(ds, row, q, m) <= r) kept.push_back(row);
  }
  return kept;
}

GoldenResult goldenSectionMinimize(const std::function<double(double)>& f, double lo, double hi,
                                   double tol, int maxIterations) {
  if (!(lo < hi)) throw std::invalid_argument("golden section needs lo < hi");

  GoldenResult best{lo, f(lo), 0};
  auto probe = [&](double x) {
    const double fx = f(x);
    if (fx < best.fx) best = {x, fx, best.iterations};
    return fx;
  };
  probe(hi);

  constexpr double invPhi = 0.6180339887498949;  // (sqrt(5)-1)/2
  double a = lo, b = hi;
  double x1 = b - invPhi * (b - a);
  double x2 = a + invPhi * (b - a);
  double f1 = probe(x1);
  double f2 = probe(x2);

  int iter = 0;
  while (b - a >= tol && iter < maxIterations) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invPhi * (b - a);
      f1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invPhi * (b - a);
      f2 = probe(x2);
    }
    ++iter;
  }
  best.iterations = iter;
  return best;
}

namespace {

// Per-query quantities that do not depend on alpha.
struct TrainEntry {
  BoxQuery query;
  Metric metric;
  double dRestarts = 0.0;
  double dNoRestarts = 0.0;
  Index noRestartTuples = 0;  // cost of the conservative retry
};

}  // namespace

double trainAlpha(const Histogram& h, const std::vector<BoxQuery>& workload, Index n,
                  const std::function<Metric(const BoxQuery&)>& metricFor, const Dataset& exec,
                  RelaxMode mode) {
  if (workload.empty()) throw std::invalid_argument("trainAlpha: workload is empty");

  std::vector<TrainEntry> entries;
  entries.reserve(workload.size());
  for (const auto& q : workload) {
    Metric m = metricFor(q);
    const double estimate = estimateCardinality(h, q.box);
    if (estimate >= static_cast<double>(n)) {
      // no relaxed execution unless the estimate lied; tuples inside the box
      // are answers at distance zero in either mode
      if (static_cast<Index>(executeBox(exec, q).size()) >= n) continue;
    }
    TrainEntry e;
    e.query = q;
    e.dRestarts = restartsDistance(h, q, n, m);
    e.dNoRestarts = noRestartsDistance(h, q, n, m);
    e.noRestartTuples = static_cast<Index>(
        executeBox(exec, expandQuery(q, inflate(e.dNoRestarts), m.weights, exec.domain())).size());
    e.metric = std::move(m);
    entries.push_back(std::move(e));
  }
  if (entries.empty()) return kDefaultAlpha;  // nothing to tune: every query satisfied

  auto cost = [&](double alpha) {
    double total = 0.0;
    for (const auto& e : entries) {
      const double d = dynamicDistance(e.dRestarts, e.dNoRestarts, alpha);
      const auto hits =
          executeBox(exec, expandQuery(e.query, inflate(d), e.metric.weights, exec.domain()));
      total += static_cast<double>(hits.size());
      Index answers = static_cast<Index>(
          mode == RelaxMode::DistancePreserving
              ? filterDistancePreserving(exec, hits, e.query, d, e.metric).size()
              : hits.size());
      if (answers < n && e.dNoRestarts > d) total += static_cast<double>(e.noRestartTuples);
    }
    return total / static_cast<double>(entries.size());
  };

  return goldenSectionMinimize(cost, 0.0, 1.0).x;
}

double trainAlpha(const Histogram& h, const std::vector<BoxQuery>& workload, Index n,
                  const Metric& m, const Dataset& exec, RelaxMode mode) {
  return trainAlpha(h, workload, n, [&m](const BoxQuery&) { return m; }, exec, mode);
}

namespace {

AnswerSet rankAnswers(const Dataset& ds, const std::vector<Index>& rows, const BoxQuery& q,
                      const Metric& m, Index n) {
  std::vector<std::pair<double, Index>> scored;
  scored.reserve(rows.size());
  for (Index row : rows) scored.emplace_back(rowDistance(ds, row, q, m), row);
  const Index k = std::min<Index>(n, static_cast<Index>(scored.size()));
  std::partial_sort(scored.begin(), scored.begin() + k, scored.end());
  scored.resize(static_cast<std::size_t>(k));

  AnswerSet out;
  out.originQuery = q;
  out.ranked.reserve(scored.size());
  for (const auto& [d, row] : scored) out.ranked.emplace_back(row, d);
  return out;
}

}  // namespace

RelaxOutcome saunaRelax(const Dataset& ds, const Histogram& h, const BoxQuery& q, Index n,
                        const Metric& m, double alpha, RelaxMode mode) {
  if (n < 1) throw std::invalid_argument("saunaRelax: N must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0,1]");
  validateQuery(q);
  validateMetric(m, q.dims());

  RelaxOutcome out;
  out.plan.mode = mode;
  out.plan.alpha = alpha;
  out.plan.relaxedQuery = q;
  out.stats.datasetExhausted = ds.n() < n;

  auto answersOf = [&](const std::vector<Index>& hits, double r) {
    if (mode != RelaxMode::DistancePreserving) return hits;
    return filterDistancePreserving(ds, hits, q, out.stats.datasetExhausted ? kInf : r, m);
  };

  auto relaxPhase = [&]() {
    out.plan.dRestarts = restartsDistance(h, q, n, m);
    out.plan.dNoRestarts = noRestartsDistance(h, q, n, m);
    out.plan.chosenDistance = dynamicDistance(out.plan.dRestarts, out.plan.dNoRestarts, alpha);

    BoxQuery relaxed = expandQuery(q, inflate(out.plan.chosenDistance), m.weights, ds.domain());
    auto hits = executeBox(ds, relaxed);
    out.stats.queriesIssued = 1;
    out.stats.tuplesRetrieved += static_cast<Index>(hits.size());
    out.plan.relaxedQuery = relaxed;

    auto answers = answersOf(hits, out.plan.chosenDistance);
    if (static_cast<Index>(answers.size()) >= n ||
        out.plan.chosenDistance >= out.plan.dNoRestarts) {
      // satisfied, or already at the conservative distance (only the
      // dataset running out of tuples lands here short of N)
      out.answers = rankAnswers(ds, answers, q, m, n);
      return;
    }

    // one restart at the guaranteed distance
    relaxed = expandQuery(q, inflate(out.plan.dNoRestarts), m.weights, ds.domain());
    hits = executeBox(ds, relaxed);
    out.stats.queriesIssued = 2;
    out.stats.restarted = true;
    out.stats.tuplesRetrieved += static_cast<Index>(hits.size());
    out.plan.relaxedQuery = relaxed;
    out.plan.chosenDistance = out.plan.dNoRestarts;
    out.plan.alpha = 1.0;
    out.answers = rankAnswers(ds, answersOf(hits, out.plan.dNoRestarts), q, m, n);
  };

  const double estimate = estimateCardinality(h, q.box);
  if (estimate < static_cast<double>(n)) {
    relaxPhase();
  } else {
    auto hits = executeBox(ds, q);
    out.stats.tuplesRetrieved += static_cast<Index>(hits.size());
    if (static_cast<Index>(hits.size()) >= n) {
      out.stats.queriesIssued = 1;
      out.answers = rankAnswers(ds, hits, q, m, n);
    } else {
      relaxPhase();  // the estimate was wrong; queriesIssued counts the relaxed attempts
    }
  }

  out.stats.answersReturned = out.answers.size();
  return out;
}

std::string planCsvHeader() {
  return "dRestarts,dNoRestarts,alpha,chosenDistance,relaxedQuery,mode";
}

std::string planCsvRow(const RelaxationPlan& plan) {
  std::ostringstream os;
  os << formatDouble(plan.dRestarts) << ',' << formatDouble(plan.dNoRestarts) << ','
     << formatDouble(plan.alpha) << ',' << formatDouble(plan.chosenDistance) << ',';
  for (Index i = 0; i < plan.relaxedQuery.dims(); ++i) {
    if (i) os << ';';
    os << formatDouble(plan.relaxedQuery.box.lo(i)) << ':'
       << formatDouble(plan.relaxedQuery.box.hi(i));
  }
  os << ',' << relaxModeName(plan.mode);
  return os.str();
}

std::string statsCsvHeader() { return "queriesIssued,restarted,tuplesRetrieved,answersReturned"; }

std::string statsCsvRow(const RelaxStats& stats) {
  std::ostringstream os;
  os << stats.queriesIssued << ',' << (stats.restarted ? 1 : 0) << ',' << stats.tuplesRetrieved
     << ',' << stats.answersReturned;
  return os.str();
}

}  // namespace sauna
