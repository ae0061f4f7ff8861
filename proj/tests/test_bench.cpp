#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <regex>
#include <sstream>

#include "sauna/bench.hpp"
#include "sauna/datagen.hpp"
#include "testutil.hpp"

using namespace sauna;
using namespace sauna::testutil;

namespace {

struct Fixture {
  Dataset ds;
  Histogram hist;
  std::vector<BoxQuery> workload;

  static Fixture make() {
    GenSpec spec;
    spec.kind = GenSpec::Kind::Array;
    spec.n = 4000;
    spec.dims = 2;
    spec.zipf = 1.0;
    spec.seed = 21;
    spec.valuesPerDim = 200;
    Box domain{Vec::Zero(2), Vec::Ones(2)};
    Dataset ds = genArray(spec, domain);
    Histogram h = buildEquiDepth(ds, 64);
    auto w = genWorkload(domain, 16, 2);
    return {std::move(ds), std::move(h), std::move(w)};
  }
};

BenchConfig allStrategies(RelaxMode mode) {
  BenchConfig c;
  c.nAnswers = 5;
  c.mode = mode;
  c.strategies = {Strategy::SaunaDynamic, Strategy::SaunaRestarts, Strategy::SaunaNoRestarts,
                  Strategy::Seq, Strategy::Opt, Strategy::Manual};
  return c;
}

// strip the wall-time columns (4 and 5) for determinism comparisons
std::string stripTimes(const std::string& csv) {
  std::string out;
  std::stringstream ss(csv);
  std::string line;
  while (std::getline(ss, line)) {
    std::stringstream fields(line);
    std::string cell;
    int idx = 0;
    while (std::getline(fields, cell, ',')) {
      if (idx != 4 && idx != 5) {
        out += cell;
        out += ',';
      }
      ++idx;
    }
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("strategy names round trip") {
  for (Strategy s : {Strategy::SaunaDynamic, Strategy::SaunaRestarts, Strategy::SaunaNoRestarts,
                     Strategy::Seq, Strategy::Opt, Strategy::Manual}) {
    CHECK(parseStrategy(strategyName(s)) == s);
  }
  CHECK_THROWS_AS(parseStrategy("guess"), std::invalid_argument);
}

TEST_CASE("bench rows and aggregates") {
  auto fx = Fixture::make();
  const BenchResult res = runBench(fx.ds, fx.hist, fx.workload, allStrategies(RelaxMode::DistancePreserving));

  // production set is the odd half
  const Index productionQueries = 8;
  CHECK(static_cast<Index>(res.rows.size()) == productionQueries * 6);

  for (const auto& row : res.rows) {
    CHECK(row.tuplesRetrievedPct >= 0.0);
    CHECK(row.seqWallMs > 0.0);
    if (row.strategy == "seq") CHECK(row.tuplesRetrievedPct == 100.0);
    if (row.strategy == "opt") {
      CHECK(row.tuplesRetrievedPct <= 100.0);
      CHECK(row.tuplesRetrievedPct ==
            doctest::Approx(100.0 * static_cast<double>(row.optTuples) /
                            static_cast<double>(fx.ds.n())));
    }
  }

  // OPT is a lower bound on every sauna strategy, per query, in
  // distance-preserving mode
  for (const auto& row : res.rows) {
    if (row.strategy.rfind("sauna", 0) == 0) {
      const double saunaTuples =
          row.tuplesRetrievedPct / 100.0 * static_cast<double>(fx.ds.n());
      CHECK(static_cast<double>(row.optTuples) <= saunaTuples + 1e-6);
    }
  }

  // restarts-vs-norestarts tuple ordering when no restart happened
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    if (res.rows[i].strategy != "sauna-restarts" || res.rows[i].restarted != 0.0) continue;
    for (const auto& other : res.rows) {
      if (other.queryId == res.rows[i].queryId && other.strategy == "sauna-norestarts") {
        CHECK(res.rows[i].tuplesRetrievedPct <= other.tuplesRetrievedPct + 1e-9);
      }
    }
  }

  CHECK(res.aggregates.size() == 6);
  for (const auto& agg : res.aggregates) {
    CHECK(agg.tuplesRetrievedPct >= 0.0);
  }
  REQUIRE(res.manualVsSauna.has_value());
  CHECK(res.manualVsSauna->iterations >= 1.0);
}

TEST_CASE("csv layout is schema-stable") {
  auto fx = Fixture::make();
  BenchConfig config = allStrategies(RelaxMode::BoxPreserving);
  const BenchResult res = runBench(fx.ds, fx.hist, fx.workload, config);

  std::stringstream out;
  writeBenchCsv(res, out);
  std::string line;
  std::getline(out, line);
  CHECK(line == "queryId,strategy,tuplesRetrievedPct,restarted,wallMs,seqWallMs,optTuples,iterations");

  int rows = 0, means = 0, ratios = 0;
  while (std::getline(out, line)) {
    const auto commas = static_cast<int>(std::count(line.begin(), line.end(), ','));
    CHECK(commas == 7);
    if (line.rfind("mean,", 0) == 0) ++means;
    else if (line.rfind("ratio,", 0) == 0) ++ratios;
    else ++rows;
  }
  CHECK(rows == static_cast<int>(res.rows.size()));
  CHECK(means == 6);
  CHECK(ratios == 1);
}

TEST_CASE("bench output is deterministic apart from wall times") {
  auto fx = Fixture::make();
  const BenchConfig config = allStrategies(RelaxMode::BoxPreserving);

  std::stringstream a, b;
  writeBenchCsv(runBench(fx.ds, fx.hist, fx.workload, config), a);
  writeBenchCsv(runBench(fx.ds, fx.hist, fx.workload, config), b);
  CHECK(stripTimes(a.str()) == stripTimes(b.str()));
}

TEST_CASE("fixed alpha bypasses training") {
  auto fx = Fixture::make();
  BenchConfig config;
  config.nAnswers = 5;
  config.strategies = {Strategy::SaunaDynamic};
  config.fixedAlpha = 0.25;
  const BenchResult res = runBench(fx.ds, fx.hist, fx.workload, config);
  CHECK(res.trainedAlpha == 0.25);
}

TEST_CASE("single-query workloads still evaluate") {
  auto fx = Fixture::make();
  BenchConfig config;
  config.nAnswers = 5;
  config.strategies = {Strategy::Seq};
  const BenchResult res = runBench(fx.ds, fx.hist, {fx.workload[0]}, config);
  CHECK(res.rows.size() == 1);
}
