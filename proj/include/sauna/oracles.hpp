#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sauna/dataset.hpp"
#include "sauna/distance.hpp"

namespace sauna {

/// Tuples ranked by their distance to the originating query.
struct AnswerSet {
  std::vector<std::pair<Index, double>> ranked;  // (tupleIndex, distance), non-decreasing
  BoxQuery originQuery;

  Index size() const { return static_cast<Index>(ranked.size()); }
};

/// Linear scan returning exactly the tuples inside the box that match every
/// categorical equality predicate. Stands in for an indexed executor; the
/// work metric of interest is tuples retrieved, which an index would not
/// change.
std::vector<Index> executeBox(const Dataset& ds, const BoxQuery& q);

/// Full-scan top-N: the N tuples of smallest rowDistance (all eligible
/// tuples when fewer than N exist), ties broken by tuple index. Tuples
/// excluded by a hard categorical filter are not answers.
AnswerSet topNSequential(const Dataset& ds, const BoxQuery& q, Index n, const Metric& m);

struct OptResult {
  BoxQuery relaxedQuery;  // minimal box containing q and its N nearest tuples
  Index retrievedCount = 0;
};

/// Minimally relaxed query found by an offline complete scan: the bounding
/// box of q and its N nearest tuples, then executed. Often retrieves more
/// than N tuples. Throws std::invalid_argument when fewer than N eligible
/// tuples exist.
OptResult optimalRelaxation(const Dataset& ds, const BoxQuery& q, Index n, const Metric& m);

struct ManualResult {
  int iterations = 0;         // executions, including the initial query
  Index tuplesScanned = 0;    // cumulative across all executions
  Index answersReturned = 0;  // result size of the final execution
};

/// Simulated interactive relaxation: execute, and while fewer than N answers
/// come back, widen every dimension by 20% of its current width (10% per
/// side, clamped to the domain) and execute again. Zero-width dimensions
/// grow by 20% of the domain width instead. Stops once N answers arrive or
/// the query covers the whole domain.
ManualResult manualSimulation(const Dataset& ds, const BoxQuery& q, Index n);

void writeAnswerCsv(const AnswerSet& answers, const std::string& path);

}  // namespace sauna
