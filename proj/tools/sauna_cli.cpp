// Command-line front end: dataset generation, histogram builds, single-query
// relaxation, sequential top-N, and the benchmark harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sauna/bench.hpp"
#include "sauna/datagen.hpp"
#include "sauna/dataset.hpp"
#include "sauna/distance.hpp"
#include "sauna/histogram.hpp"
#include "sauna/oracles.hpp"
#include "sauna/relaxation.hpp"

namespace {

using namespace sauna;

Box parseDomainFlag(const std::string& text, Index dims) {
  Box b{Vec(dims), Vec(dims)};
  std::stringstream ss(text);
  std::string cell;
  Index i = 0;
  while (std::getline(ss, cell, ',')) {
    auto colon = cell.find(':');
    if (colon == std::string::npos || i >= dims) {
      throw CLI::ValidationError("--domain", "expected lo:hi,lo:hi,... with one pair per dimension");
    }
    b.lo(i) = parseDouble(cell.substr(0, colon));
    b.hi(i) = parseDouble(cell.substr(colon + 1));
    ++i;
  }
  if (i != dims) throw CLI::ValidationError("--domain", "wrong number of dimension bounds");
  return b;
}

BoxQuery parseQueryFlag(const std::string& text) {
  BoxQuery q;
  std::vector<double> lo, hi;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    auto colon = cell.find(':');
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--query", "expected l:h,l:h,... with one interval per dimension");
    }
    lo.push_back(parseDouble(cell.substr(0, colon)));
    hi.push_back(parseDouble(cell.substr(colon + 1)));
  }
  if (lo.empty()) throw CLI::ValidationError("--query", "no intervals given");
  q.box.lo = Eigen::Map<const Vec>(lo.data(), static_cast<Index>(lo.size()));
  q.box.hi = Eigen::Map<const Vec>(hi.data(), static_cast<Index>(hi.size()));
  return q;
}

Dataset loadDataset(const std::string& csv, const std::string& manifest) {
  if (!manifest.empty()) return loadCsvWithManifest(csv, manifest);
  return loadCsvAllNumeric(csv);
}

void addCatPredicates(BoxQuery& q, const std::vector<std::string>& preds) {
  for (const auto& p : preds) {
    auto eq = p.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--cat", "expected attribute=value");
    }
    q.catEquals.emplace_back(p.substr(0, eq), p.substr(eq + 1));
  }
}

struct MetricFlags {
  std::string weighting = "aspect";
  std::string norm = "l2";
  std::vector<std::string> catWeights;  // attribute=weight

  MetricSpec spec() const {
    MetricSpec s = parseWeighting(weighting);
    s.norm = parseNorm(norm);
    for (const auto& cw : catWeights) {
      auto eq = cw.find('=');
      if (eq == std::string::npos) {
        throw CLI::ValidationError("--cat-weight", "expected attribute=weight");
      }
      s.categoricalWeights[cw.substr(0, eq)] = parseDouble(cw.substr(eq + 1));
    }
    return s;
  }
};

void addMetricFlags(CLI::App* cmd, MetricFlags& flags) {
  cmd->add_option("--metric", flags.weighting,
                  "weighting: aspect | inverse | explicit:<w1,...,wD>");
  cmd->add_option("--norm", flags.norm, "norm: l1 | l2 | linf");
  cmd->add_option("--cat-weight", flags.catWeights,
                  "categorical attribute weight, attribute=weight (repeatable)");
}

std::ostream& openOut(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  return file;
}

int runGenerate(const std::string& kind, Index n, Index dims, double zipf, Index bells,
                double variance, std::uint64_t seed, Index values, const std::string& domainText,
                const std::string& outPrefix) {
  GenSpec spec;
  spec.kind = kind == "gauss" ? GenSpec::Kind::Gauss : GenSpec::Kind::Array;
  spec.n = n;
  spec.dims = dims;
  spec.zipf = zipf;
  spec.bells = bells;
  spec.variance = variance;
  spec.seed = seed;
  spec.valuesPerDim = values;

  Box domain = domainText.empty() ? Box{Vec::Zero(dims), Vec::Ones(dims)}
                                  : parseDomainFlag(domainText, dims);
  Dataset ds = spec.kind == GenSpec::Kind::Gauss ? genGauss(spec, domain) : genArray(spec, domain);

  writeCsv(ds, outPrefix + ".csv");
  std::vector<std::pair<std::string, std::string>> extra{
      {"gen.kind", kind},
      {"gen.n", std::to_string(n)},
      {"gen.dims", std::to_string(dims)},
      {"gen.zipf", formatDouble(zipf)},
      {"gen.seed", std::to_string(seed)},
  };
  if (spec.kind == GenSpec::Kind::Gauss) {
    extra.emplace_back("gen.bells", std::to_string(bells));
    extra.emplace_back("gen.variance", formatDouble(variance));
  } else {
    extra.emplace_back("gen.values", std::to_string(values));
  }
  writeManifest(ds, outPrefix + ".manifest", extra);
  std::cout << "wrote " << outPrefix << ".csv (" << ds.n() << " tuples, " << dims
            << " dims) and " << outPrefix << ".manifest\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"box-query relaxation engine"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "emit a synthetic dataset CSV + manifest");
  std::string genKind = "array";
  Index genN = 50000, genDims = 3, genBells = 10, genValues = 1000;
  double genZipf = 1.0, genVariance = -1.0;
  std::uint64_t genSeed = 0;
  std::string genDomain, genOut;
  gen->add_option("--kind", genKind, "gauss | array")->check(CLI::IsMember({"gauss", "array"}));
  gen->add_option("--n", genN, "tuple count");
  gen->add_option("--dims", genDims, "numeric dimensions");
  gen->add_option("--zipf", genZipf, "zipfian exponent");
  gen->add_option("--bells", genBells, "gaussian bell count (gauss)");
  gen->add_option("--variance", genVariance, "bell variance; <=0 selects (width/20)^2 (gauss)");
  gen->add_option("--seed", genSeed, "random seed");
  gen->add_option("--values", genValues, "distinct values per attribute (array)");
  gen->add_option("--domain", genDomain, "domain bounds lo:hi,... (default unit cube)");
  gen->add_option("--out", genOut, "output path prefix")->required();

  // build-hist
  auto* hist = app.add_subcommand("build-hist", "build and serialize an equi-depth histogram");
  std::string histData, histManifest, histOut = "histogram.txt";
  Index histBudget = 256;
  hist->add_option("--dataset", histData, "dataset CSV")->required();
  hist->add_option("--manifest", histManifest, "dataset manifest");
  hist->add_option("--budget", histBudget, "bucket budget (default 256)");
  hist->add_option("--out", histOut, "histogram output path");

  // relax
  auto* relax = app.add_subcommand("relax", "relax one query to the desired cardinality");
  std::string rData, rManifest, rHist, rQuery, rMode = "box-preserving", rOut;
  std::vector<std::string> rCats;
  Index rN = 10;
  double rAlpha = kDefaultAlpha;
  bool rJson = false;
  MetricFlags rMetric;
  relax->add_option("--dataset", rData, "dataset CSV")->required();
  relax->add_option("--manifest", rManifest, "dataset manifest");
  relax->add_option("--hist", rHist, "histogram file")->required();
  relax->add_option("--query", rQuery, "box query l:h,l:h,...")->required();
  relax->add_option("--cat", rCats, "categorical predicate attribute=value (repeatable)");
  relax->add_option("--n-answers", rN, "desired answers N (default 10)");
  relax->add_option("--alpha", rAlpha, "interpolation between restarts and no-restarts");
  relax->add_option("--mode", rMode, "box-preserving | distance-preserving");
  relax->add_flag("--json", rJson, "emit JSON instead of CSV");
  relax->add_option("--out", rOut, "output path (default stdout)");
  addMetricFlags(relax, rMetric);

  // topn
  auto* topn = app.add_subcommand("topn", "sequential-scan top-N oracle");
  std::string tData, tManifest, tQuery, tOut;
  std::vector<std::string> tCats;
  Index tN = 10;
  MetricFlags tMetric;
  topn->add_option("--dataset", tData, "dataset CSV")->required();
  topn->add_option("--manifest", tManifest, "dataset manifest");
  topn->add_option("--query", tQuery, "box query l:h,l:h,...")->required();
  topn->add_option("--cat", tCats, "categorical predicate attribute=value (repeatable)");
  topn->add_option("--n-answers", tN, "desired answers N (default 10)");
  topn->add_option("--out", tOut, "output path (default stdout)");
  addMetricFlags(topn, tMetric);

  // bench
  auto* bench = app.add_subcommand("bench", "run a workload through relaxation strategies");
  std::string bData, bManifest, bHist, bMode = "box-preserving", bOut, bStrategies =
      "sauna-dynamic,seq,opt";
  Index bN = 10, bCount = 100;
  double bAlpha = -1.0;
  bool bJson = false;
  MetricFlags bMetric;
  bench->add_option("--dataset", bData, "dataset CSV")->required();
  bench->add_option("--manifest", bManifest, "dataset manifest");
  bench->add_option("--hist", bHist, "histogram file")->required();
  bench->add_option("--n-answers", bN, "desired answers N (default 10)");
  bench->add_option("--workload", bCount, "workload query count (default 100)");
  bench->add_option("--strategies", bStrategies,
                    "comma list of sauna-dynamic,sauna-restarts,sauna-norestarts,seq,opt,manual");
  bench->add_option("--alpha", bAlpha, "fixed alpha; <0 trains on the even-indexed queries");
  bench->add_option("--mode", bMode, "box-preserving | distance-preserving");
  bench->add_flag("--json", bJson, "emit JSON instead of CSV");
  bench->add_option("--out", bOut, "output path (default stdout)");
  addMetricFlags(bench, bMetric);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit 1
  }

  try {
    if (gen->parsed()) {
      return runGenerate(genKind, genN, genDims, genZipf, genBells, genVariance, genSeed,
                         genValues, genDomain, genOut);
    }

    if (hist->parsed()) {
      Dataset ds = loadDataset(histData, histManifest);
      Histogram h = buildEquiDepth(ds, histBudget);
      saveHistogram(h, histOut);
      std::cout << h.buckets.size() << " buckets (budget " << histBudget << "), ~"
                << histogramByteEstimate(h) << " bytes -> " << histOut << '\n';
      return 0;
    }

    if (relax->parsed()) {
      Dataset ds = loadDataset(rData, rManifest);
      Histogram h = loadHistogram(rHist);
      BoxQuery q = parseQueryFlag(rQuery);
      addCatPredicates(q, rCats);
      Metric m = resolveMetric(rMetric.spec(), q.box);
      auto outcome = saunaRelax(ds, h, q, rN, m, rAlpha, parseRelaxMode(rMode));

      std::ofstream file;
      std::ostream& out = openOut(file, rOut);
      if (rJson) {
        nlohmann::json doc;
        doc["plan"] = {{"dRestarts", outcome.plan.dRestarts},
                       {"dNoRestarts", outcome.plan.dNoRestarts},
                       {"alpha", outcome.plan.alpha},
                       {"chosenDistance", outcome.plan.chosenDistance},
                       {"mode", relaxModeName(outcome.plan.mode)}};
        doc["plan"]["relaxedQuery"] = nlohmann::json::array();
        for (Index i = 0; i < outcome.plan.relaxedQuery.dims(); ++i) {
          doc["plan"]["relaxedQuery"].push_back(
              {outcome.plan.relaxedQuery.box.lo(i), outcome.plan.relaxedQuery.box.hi(i)});
        }
        doc["stats"] = {{"queriesIssued", outcome.stats.queriesIssued},
                        {"restarted", outcome.stats.restarted},
                        {"tuplesRetrieved", outcome.stats.tuplesRetrieved},
                        {"answersReturned", outcome.stats.answersReturned}};
        doc["answers"] = nlohmann::json::array();
        for (const auto& [row, dist] : outcome.answers.ranked) {
          doc["answers"].push_back({{"tupleIndex", row}, {"distance", dist}});
        }
        out << doc.dump(2) << '\n';
      } else {
        out << planCsvHeader() << '\n' << planCsvRow(outcome.plan) << '\n';
        out << statsCsvHeader() << '\n' << statsCsvRow(outcome.stats) << '\n';
        out << "tupleIndex,distance\n";
        for (const auto& [row, dist] : outcome.answers.ranked) {
          out << row << ',' << formatDouble(dist) << '\n';
        }
      }
      return 0;
    }

    if (topn->parsed()) {
      Dataset ds = loadDataset(tData, tManifest);
      BoxQuery q = parseQueryFlag(tQuery);
      addCatPredicates(q, tCats);
      Metric m = resolveMetric(tMetric.spec(), q.box);
      AnswerSet answers = topNSequential(ds, q, tN, m);

      std::ofstream file;
      std::ostream& out = openOut(file, tOut);
      out << "tupleIndex,distance\n";
      for (const auto& [row, dist] : answers.ranked) {
        out << row << ',' << formatDouble(dist) << '\n';
      }
      return 0;
    }

    if (bench->parsed()) {
      Dataset ds = loadDataset(bData, bManifest);
      Histogram h = loadHistogram(bHist);
      auto workload = genWorkload(ds.domain(), bCount, ds.numericDims());

      BenchConfig config;
      config.nAnswers = bN;
      config.metric = bMetric.spec();
      config.mode = parseRelaxMode(bMode);
      if (bAlpha >= 0) config.fixedAlpha = bAlpha;
      std::stringstream ss(bStrategies);
      std::string name;
      while (std::getline(ss, name, ',')) config.strategies.push_back(parseStrategy(name));

      BenchResult result = runBench(ds, h, workload, config);
      std::ofstream file;
      std::ostream& out = openOut(file, bOut);
      if (bJson) {
        writeBenchJson(result, out);
      } else {
        writeBenchCsv(result, out);
      }
      std::cerr << "alpha=" << formatDouble(result.trainedAlpha) << ", "
                << result.rows.size() << " rows\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
