#include "sauna/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <stdexcept>

#include "sauna/oracles.hpp"

#include <json.hpp>

namespace sauna {

namespace {

using Clock = std::chrono::steady_clock;

double elapsedMs(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

BenchRow meanOf(const std::vector<BenchRow>& rows, const std::string& strategy) {
  BenchRow mean;
  mean.queryId = -1;
  mean.strategy = strategy;
  Index count = 0;
  double optSum = 0.0;
  for (const auto& r : rows) {
    if (r.strategy != strategy) continue;
    ++count;
    mean.tuplesRetrievedPct += r.tuplesRetrievedPct;
    mean.restarted += r.restarted;
    mean.iterations += r.iterations;
    mean.wallMs += r.wallMs;
    mean.seqWallMs += r.seqWallMs;
    optSum += static_cast<double>(r.optTuples);
  }
  if (count > 0) {
    const double c = static_cast<double>(count);
    mean.tuplesRetrievedPct /= c;
    mean.restarted /= c;
    mean.iterations /= c;
    mean.wallMs /= c;
    mean.seqWallMs /= c;
    mean.optTuples = static_cast<Index>(optSum / c);
  }
  return mean;
}

}  // namespace

std::string strategyName(Strategy s) {
  switch (s) {
    case Strategy::SaunaDynamic:
      return "sauna-dynamic";
    case Strategy::SaunaRestarts:
      return "sauna-restarts";
    case Strategy::SaunaNoRestarts:
      return "sauna-norestarts";
    case Strategy::Seq:
      return "seq";
    case Strategy::Opt:
      return "opt";
    case Strategy::Manual:
      return "manual";
  }
  return "seq";
}

Strategy parseStrategy(const std::string& name) {
  if (name == "sauna-dynamic") return Strategy::SaunaDynamic;
  if (name == "sauna-restarts") return Strategy::SaunaRestarts;
  if (name == "sauna-norestarts") return Strategy::SaunaNoRestarts;
  if (name == "seq") return Strategy::Seq;
  if (name == "opt") return Strategy::Opt;
  if (name == "manual") return Strategy::Manual;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

BenchResult runBench(const Dataset& ds, const Histogram& h, const std::vector<BoxQuery>& workload,
                     const BenchConfig& config) {
  if (workload.empty()) throw std::invalid_argument("bench workload is empty");
  if (config.strategies.empty()) throw std::invalid_argument("no strategies selected");

  std::vector<BoxQuery> training, production;
  for (std::size_t i = 0; i < workload.size(); ++i) {
    (i % 2 == 0 ? training : production).push_back(workload[i]);
  }
  if (production.empty()) production = workload;

  auto metricFor = [&](const BoxQuery& q) { return resolveMetric(config.metric, q.box); };

  BenchResult result;
  result.datasetSize = ds.n();
  const bool wantsDynamic =
      std::find(config.strategies.begin(), config.strategies.end(), Strategy::SaunaDynamic) !=
      config.strategies.end();
  if (config.fixedAlpha) {
    result.trainedAlpha = *config.fixedAlpha;
  } else if (wantsDynamic && !training.empty()) {
    result.trainedAlpha = trainAlpha(h, training, config.nAnswers, metricFor, ds, config.mode);
  }

  const double n = static_cast<double>(ds.n());
  for (std::size_t qi = 0; qi < production.size(); ++qi) {
    const BoxQuery& q = production[qi];
    const Metric m = metricFor(q);

    auto seqStart = Clock::now();
    auto seqTop = topNSequential(ds, q, config.nAnswers, m);
    const double seqMs = elapsedMs(seqStart);
    (void)seqTop;

    // the minimal box is found offline; only its execution is timed below
    BoxQuery optBox = q;
    Index optTuples = 0;
    try {
      auto opt = optimalRelaxation(ds, q, config.nAnswers, m);
      optBox = opt.relaxedQuery;
      optTuples = opt.retrievedCount;
    } catch (const std::invalid_argument&) {
      optBox.box = ds.domain();  // fewer than N tuples exist: scan everything
      optTuples = ds.n();
    }

    for (Strategy s : config.strategies) {
      BenchRow row;
      row.queryId = static_cast<Index>(qi);
      row.strategy = strategyName(s);
      row.seqWallMs = seqMs;
      row.optTuples = optTuples;

      auto start = Clock::now();
      switch (s) {
        case Strategy::SaunaDynamic:
        case Strategy::SaunaRestarts:
        case Strategy::SaunaNoRestarts: {
          const double alpha = s == Strategy::SaunaDynamic ? result.trainedAlpha
                               : s == Strategy::SaunaRestarts ? 0.0
                                                              : 1.0;
          auto outcome = saunaRelax(ds, h, q, config.nAnswers, m, alpha, config.mode);
          row.tuplesRetrievedPct = 100.0 * static_cast<double>(outcome.stats.tuplesRetrieved) / n;
          row.restarted = outcome.stats.restarted ? 1.0 : 0.0;
          row.iterations = outcome.stats.queriesIssued;
          break;
        }
        case Strategy::Seq:
          row.tuplesRetrievedPct = 100.0;
          row.iterations = 1.0;
          break;
        case Strategy::Opt:
          executeBox(ds, optBox);
          row.tuplesRetrievedPct = 100.0 * static_cast<double>(optTuples) / n;
          row.iterations = 1.0;
          break;
        case Strategy::Manual: {
          auto manual = manualSimulation(ds, q, config.nAnswers);
          row.tuplesRetrievedPct = 100.0 * static_cast<double>(manual.tuplesScanned) / n;
          row.iterations = manual.iterations;
          break;
        }
      }
      row.wallMs = s == Strategy::Seq ? seqMs : elapsedMs(start);
      result.rows.push_back(std::move(row));
    }
  }

  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const BenchRow& a, const BenchRow& b) { return a.queryId < b.queryId; });

  for (Strategy s : config.strategies) {
    result.aggregates.push_back(meanOf(result.rows, strategyName(s)));
  }

  const bool wantsManual =
      std::find(config.strategies.begin(), config.strategies.end(), Strategy::Manual) !=
      config.strategies.end();
  if (wantsManual && wantsDynamic) {
    const BenchRow manual = meanOf(result.rows, "manual");
    const BenchRow dynamic = meanOf(result.rows, "sauna-dynamic");
    BenchRow ratio;
    ratio.queryId = -2;
    ratio.strategy = "manual-vs-sauna";
    ratio.iterations = manual.iterations;  // mean manual executions
    ratio.tuplesRetrievedPct =
        dynamic.tuplesRetrievedPct > 0 ? manual.tuplesRetrievedPct / dynamic.tuplesRetrievedPct : 0;
    ratio.wallMs = dynamic.wallMs > 0 ? manual.wallMs / dynamic.wallMs : 0;
    result.manualVsSauna = ratio;
  }
  return result;
}

namespace {

void writeRow(std::ostream& out, const BenchRow& r, const std::string& idText) {
  out << idText << ',' << r.strategy << ',' << formatDouble(r.tuplesRetrievedPct) << ','
      << formatDouble(r.restarted) << ',' << formatDouble(r.wallMs) << ','
      << formatDouble(r.seqWallMs) << ',' << r.optTuples << ',' << formatDouble(r.iterations)
      << '\n';
}

}  // namespace

void writeBenchCsv(const BenchResult& result, std::ostream& out) {
  out << "queryId,strategy,tuplesRetrievedPct,restarted,wallMs,seqWallMs,optTuples,iterations\n";
  for (const auto& r : result.rows) writeRow(out, r, std::to_string(r.queryId));
  for (const auto& r : result.aggregates) writeRow(out, r, "mean");
  if (result.manualVsSauna) writeRow(out, *result.manualVsSauna, "ratio");
}

void writeBenchJson(const BenchResult& result, std::ostream& out) {
  nlohmann::json doc;
  doc["trainedAlpha"] = result.trainedAlpha;
  doc["datasetSize"] = result.datasetSize;
  auto rowJson = [](const BenchRow& r) {
    return nlohmann::json{{"queryId", r.queryId},
                          {"strategy", r.strategy},
                          {"tuplesRetrievedPct", r.tuplesRetrievedPct},
                          {"restarted", r.restarted},
                          {"iterations", r.iterations},
                          {"wallMs", r.wallMs},
                          {"seqWallMs", r.seqWallMs},
                          {"optTuples", r.optTuples}};
  };
  doc["rows"] = nlohmann::json::array();
  for (const auto& r : result.rows) doc["rows"].push_back(rowJson(r));
  doc["aggregates"] = nlohmann::json::array();
  for (const auto& r : result.aggregates) doc["aggregates"].push_back(rowJson(r));
  if (result.manualVsSauna) doc["manualVsSauna"] = rowJson(*result.manualVsSauna);
  out << doc.dump(2) << '\n';
}

}  // namespace sauna
