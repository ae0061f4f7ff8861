#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sauna/dataset.hpp"
#include "sauna/distance.hpp"
#include "sauna/histogram.hpp"
#include "sauna/relaxation.hpp"

namespace sauna {

enum class Strategy { SaunaDynamic, SaunaRestarts, SaunaNoRestarts, Seq, Opt, Manual };

std::string strategyName(Strategy s);
Strategy parseStrategy(const std::string& name);  // throws on unknown names

struct BenchConfig {
  Index nAnswers = 10;
  MetricSpec metric;
  RelaxMode mode = RelaxMode::BoxPreserving;
  std::optional<double> fixedAlpha;  // skips training when set
  std::vector<Strategy> strategies;
};

struct BenchRow {
  Index queryId = 0;
  std::string strategy;
  double tuplesRetrievedPct = 0.0;  // summed over executions; restarts can push past 100
  double restarted = 0.0;           // 0/1 per query, restart rate in aggregates
  double wallMs = 0.0;
  double seqWallMs = 0.0;
  Index optTuples = 0;
  double iterations = 0.0;  // executions issued (manual: its iteration count)
};

struct BenchResult {
  std::vector<BenchRow> rows;        // per production query, sorted by (queryId, strategy)
  std::vector<BenchRow> aggregates;  // one mean row per strategy
  double trainedAlpha = kDefaultAlpha;
  Index datasetSize = 0;
  // Mean manual iterations and manual/sauna-dynamic ratios, when both ran.
  std::optional<BenchRow> manualVsSauna;
};

/// Runs the workload through the selected strategies. Even-indexed queries
/// form the alpha training set, odd-indexed queries the production set that
/// is measured (all queries when the split would leave production empty).
/// Results are deterministic apart from wall-time columns.
BenchResult runBench(const Dataset& ds, const Histogram& h, const std::vector<BoxQuery>& workload,
                     const BenchConfig& config);

/// Fixed column order:
/// queryId,strategy,tuplesRetrievedPct,restarted,wallMs,seqWallMs,optTuples,iterations
/// Aggregate rows use queryId "mean"; the manual-vs-sauna row uses "ratio".
void writeBenchCsv(const BenchResult& result, std::ostream& out);
void writeBenchJson(const BenchResult& result, std::ostream& out);

}  // namespace sauna
