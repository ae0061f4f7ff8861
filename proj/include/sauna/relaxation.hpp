#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sauna/dataset.hpp"
#include "sauna/distance.hpp"
#include "sauna/histogram.hpp"
#include "sauna/oracles.hpp"

namespace sauna {

/// Box-preserving keeps every tuple of the executed rectangle; distance-
/// preserving prunes tuples whose true distance exceeds the relaxation
/// radius, so the answer set is exactly the nearest tuples.
enum class RelaxMode { BoxPreserving, DistancePreserving };

std::string relaxModeName(RelaxMode mode);
RelaxMode parseRelaxMode(const std::string& name);

struct RelaxationPlan {
  double dRestarts = 0.0;    // optimistic distance (bucket tuples at MinDist)
  double dNoRestarts = 0.0;  // conservative distance (bucket tuples at MaxDist)
  double alpha = 0.0;        // interpolation actually applied to the final query
  double chosenDistance = 0.0;
  BoxQuery relaxedQuery;
  RelaxMode mode = RelaxMode::BoxPreserving;
};

struct RelaxStats {
  // Executions in the answering phase: the relaxed attempts when relaxation
  // ran (1, or 2 after a restart), otherwise the single unrelaxed execution.
  // An initial unrelaxed execution preceding relaxation is not counted here,
  // only in tuplesRetrieved.
  int queriesIssued = 0;
  bool restarted = false;
  Index tuplesRetrieved = 0;  // summed over every execution issued
  Index answersReturned = 0;
  bool datasetExhausted = false;  // fewer than N tuples exist at all
};

struct RelaxOutcome {
  AnswerSet answers;
  RelaxStats stats;
  RelaxationPlan plan;
};

/// Optimistic relaxation distance: buckets sorted by MinDist, whole counts
/// accumulated in that order, returning the MinDist at which the running
/// total reaches N. Falls back to the full-domain distance when the
/// histogram holds fewer than N tuples.
double restartsDistance(const Histogram& h, const BoxQuery& q, Index n, const Metric& m);

/// Conservative counterpart using MaxDist: every bucket within the returned
/// distance lies wholly inside the relaxed region, so the relaxed query is
/// guaranteed to return at least N answers when that many exist.
double noRestartsDistance(const Histogram& h, const BoxQuery& q, Index n, const Metric& m);

/// dBR + alpha * (dBNR - dBR). Throws std::invalid_argument for alpha
/// outside [0,1].
double dynamicDistance(double dRestarts, double dNoRestarts, double alpha);

/// Smallest weighted distance whose expansion covers the whole domain.
double fullDomainDistance(const Box& q, const Vec& weights, const Box& domain);

/// MBR of all points within weighted distance r of q: every dimension grows
/// by r/w_i on both sides, clamped to the domain (never shrinking a query
/// that already exceeds it). Weight 0 means unbounded willingness: the
/// dimension opens up to the domain.
BoxQuery expandQuery(const BoxQuery& q, double r, const Vec& weights, const Box& domain);

/// Keeps exactly the tuples with rowDistance <= r. Identity for r = +inf;
/// box-preserving executions skip this step.
std::vector<Index> filterDistancePreserving(const Dataset& ds, const std::vector<Index>& tuples,
                                            const BoxQuery& q, double r, const Metric& m);

struct GoldenResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Golden-section search for the minimizer of a unimodal function on
/// [lo, hi]. Both endpoints are probed explicitly and the best point seen is
/// returned, so the result never loses to either endpoint. Stops when the
/// bracket is narrower than `tol` or after `maxIterations` shrink steps.
GoldenResult goldenSectionMinimize(const std::function<double(double)>& f, double lo, double hi,
                                   double tol = 0.01, int maxIterations = 30);

/// Calibrates the Box-Dynamic interpolation on a training workload by
/// golden-section search over alpha in [0,1], minimizing the average tuples
/// retrieved; a first execution that under-delivers incurs its own tuples
/// plus those of the conservative retry. Initial unrelaxed executions do not
/// enter the cost.
double trainAlpha(const Histogram& h, const std::vector<BoxQuery>& workload, Index n,
                  const Metric& m, const Dataset& exec, RelaxMode mode = RelaxMode::BoxPreserving);

/// Per-query metric variant (e.g. aspect weights derived from each query).
double trainAlpha(const Histogram& h, const std::vector<BoxQuery>& workload, Index n,
                  const std::function<Metric(const BoxQuery&)>& metricFor, const Dataset& exec,
                  RelaxMode mode = RelaxMode::BoxPreserving);

inline constexpr double kDefaultAlpha = 0.5;  // untrained midpoint

/// End-to-end relaxation with at most one restart. When the estimate says
/// the query is short of N answers it is relaxed with the alpha-interpolated
/// distance and executed; an under-delivering attempt is retried once at the
/// conservative distance. When the estimate says otherwise the original
/// query runs first and relaxation only follows an actual shortfall. Returns
/// the N nearest answers (ties by tuple index), or every answer when the
/// dataset itself has fewer than N tuples.
RelaxOutcome saunaRelax(const Dataset& ds, const Histogram& h, const BoxQuery& q, Index n,
                        const Metric& m, double alpha = kDefaultAlpha,
                        RelaxMode mode = RelaxMode::BoxPreserving);

/// One CSV row each, fields in declaration order.
std::string planCsvHeader();
std::string planCsvRow(const RelaxationPlan& plan);
std::string statsCsvHeader();
std::string statsCsvRow(const RelaxStats& stats);

}  // namespace sauna
