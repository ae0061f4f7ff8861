// End-to-end checks of the command-line surface: exit codes, file outputs,
// and determinism of the full generate -> build-hist -> bench pipeline.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kCli = SAUNA_CLI_BIN;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("sauna_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string fileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> readCsv(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run("") == 1);
  CHECK(run("generate --kind nope --out /tmp/x") == 1);
  CHECK(run("generate --kind array") == 1);         // --out is required
  CHECK(run("relax --dataset missing.csv") == 1);   // missing required flags
  CHECK(run("frobnicate") == 1);
}

TEST_CASE("runtime errors exit 2") {
  TempDir tmp;
  CHECK(run("build-hist --dataset " + tmp.file("absent.csv") + " --out " + tmp.file("h.txt")) == 2);
}

TEST_CASE("generate is deterministic and zipf flags are accepted") {
  TempDir tmp;
  CHECK(run("generate --kind array --n 5000 --dims 3 --zipf 1.5 --seed 7 --out " +
            tmp.file("a")) == 0);
  CHECK(run("generate --kind array --n 5000 --dims 3 --zipf 1.5 --seed 7 --out " +
            tmp.file("b")) == 0);
  CHECK(fileBytes(tmp.file("a.csv")) == fileBytes(tmp.file("b.csv")));
  CHECK(fs::exists(tmp.file("a.manifest")));
}

TEST_CASE("full pipeline") {
  TempDir tmp;
  REQUIRE(run("generate --kind array --n 4000 --dims 2 --zipf 1 --seed 3 --values 200 --out " +
              tmp.file("d")) == 0);

  // budget 1 gives a single-bucket histogram file
  REQUIRE(run("build-hist --dataset " + tmp.file("d.csv") + " --manifest " +
              tmp.file("d.manifest") + " --budget 1 --out " + tmp.file("one.hist")) == 0);
  {
    std::ifstream in(tmp.file("one.hist"));
    std::string header, bucket, extra;
    std::getline(in, header);
    std::getline(in, bucket);
    CHECK_FALSE(std::getline(in, extra));
    CHECK(header == "2 4000");
  }
  CHECK(run("build-hist --dataset " + tmp.file("d.csv") + " --budget 0 --out " +
            tmp.file("zero.hist")) == 1);

  REQUIRE(run("build-hist --dataset " + tmp.file("d.csv") + " --manifest " +
              tmp.file("d.manifest") + " --budget 64 --out " + tmp.file("d.hist")) == 0);

  // relax with defaults (N=10, aspect metric) and with the mode switch
  REQUIRE(run("relax --dataset " + tmp.file("d.csv") + " --manifest " + tmp.file("d.manifest") +
              " --hist " + tmp.file("d.hist") + " --query 0.9:0.98,0.9:0.98 --out " +
              tmp.file("relax.csv")) == 0);
  REQUIRE(run("relax --dataset " + tmp.file("d.csv") + " --manifest " + tmp.file("d.manifest") +
              " --hist " + tmp.file("d.hist") +
              " --query 0.9:0.98,0.9:0.98 --mode distance-preserving --json --out " +
              tmp.file("relax.json")) == 0);
  CHECK(fileBytes(tmp.file("relax.json")).find("distance-preserving") != std::string::npos);

  REQUIRE(run("topn --dataset " + tmp.file("d.csv") + " --manifest " + tmp.file("d.manifest") +
              " --query 0.9:0.98,0.9:0.98 --n-answers 5 --out " + tmp.file("top.csv")) == 0);
  auto top = readCsv(tmp.file("top.csv"));
  REQUIRE(top.size() == 6);  // header + 5 answers
  CHECK(top[0] == std::vector<std::string>{"tupleIndex", "distance"});

  // bench over all strategies, distance-preserving for the OPT bound
  const std::string benchArgs =
      "bench --dataset " + tmp.file("d.csv") + " --manifest " + tmp.file("d.manifest") +
      " --hist " + tmp.file("d.hist") +
      " --workload 16 --n-answers 5 --mode distance-preserving"
      " --strategies sauna-dynamic,sauna-restarts,sauna-norestarts,seq,opt,manual --out ";
  REQUIRE(run(benchArgs + tmp.file("bench1.csv")) == 0);
  REQUIRE(run(benchArgs + tmp.file("bench2.csv")) == 0);
  CHECK(run("bench --dataset " + tmp.file("d.csv") + " --hist " + tmp.file("d.hist") +
            " --strategies warp-drive --out " + tmp.file("x.csv")) == 1);

  auto rows = readCsv(tmp.file("bench1.csv"));
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == std::vector<std::string>{"queryId", "strategy", "tuplesRetrievedPct",
                                            "restarted", "wallMs", "seqWallMs", "optTuples",
                                            "iterations"});
  double n = 4000;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 8);
    if (rows[i][1] == "seq" && rows[i][0] != "ratio") {
      CHECK(std::stod(rows[i][2]) == 100.0);
    }
  }
  // per query, OPT never retrieves more than any sauna strategy
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] == "mean" || rows[i][0] == "ratio") continue;
    if (rows[i][1].rfind("sauna", 0) != 0) continue;
    const double saunaTuples = std::stod(rows[i][2]) / 100.0 * n;
    CHECK(std::stod(rows[i][6]) <= saunaTuples + 1e-6);
  }

  // identical runs agree once wall-time columns are dropped
  auto strip = [](const std::string& path) {
    std::string out;
    for (auto& row : readCsv(path)) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c != 4 && c != 5) out += row[c] + ",";
      }
      out += '\n';
    }
    return out;
  };
  CHECK(strip(tmp.file("bench1.csv")) == strip(tmp.file("bench2.csv")));
}
