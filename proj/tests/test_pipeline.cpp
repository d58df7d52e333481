#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "hors/oracle.hpp"
#include "hors/parse.hpp"
#include "hors/pipeline.hpp"

#include "corpus.hpp"
#include "helpers.hpp"

using namespace hors;
namespace fs = std::filesystem;

namespace {

const char* kSplitText =
    "X : o. Y : o -> o. Z : o.\n"
    "X -> Y Z. Y z -> [E 1, z, [E 2, z]]. Z -> [E 2, Z].\n";

const char* kIndirectText =
    "S : o. T : (o -> o) -> o. Y : o -> o. Z : o.\n"
    "S -> T Y. T y -> y Z. Y z -> [E 1, z, [E 2, z]]. Z -> [E 2, Z].\n";

fs::path tempRoot() {
  fs::path dir = fs::temp_directory_path() / "horsmc-tests";
  fs::create_directories(dir);
  return dir;
}

std::string writeInput(const std::string& name, const std::string& text) {
  fs::path path = tempRoot() / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  REQUIRE(out.good());
  return path.string();
}

std::string readAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PipelineConfig parityConfig(const std::string& name, const std::string& text) {
  PipelineConfig config;
  config.schemePath = writeInput(name, text);
  return config;
}

PipelineConfig aptConfig(const horstest::AptPair& pair) {
  PipelineConfig config;
  config.mode = PipelineMode::Apt;
  config.schemePath = writeInput(pair.name + ".hors", renderScheme(pair.scheme));
  config.automatonPath =
      writeInput(pair.name + ".apt", horstest::renderAutomatonText(pair.automaton));
  return config;
}

TermPtr flipPriorities(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Node: {
      std::vector<TermPtr> kids;
      kids.reserve(t->children.size());
      for (const TermPtr& k : t->children) kids.push_back(flipPriorities(k));
      Label label = t->label;
      if (label.parity && label.priority <= 2) label.priority = label.priority == 1 ? 2 : 1;
      return node(std::move(label), std::move(kids));
    }
    case TermKind::App:
      return app(flipPriorities(t->fun), flipPriorities(t->arg));
    default:
      return t;
  }
}

}  // namespace

TEST_CASE("an order-zero scheme is solved directly") {
  PipelineResult even = runPipeline(parityConfig("even-loop.hors", "S : o. S -> [E 2, S]."));
  REQUIRE(even.winner == Player::Eve);
  REQUIRE(even.verdictWord() == "Eve");
  REQUIRE(even.stats.size() == 1);
  REQUIRE(even.stats[0].order == 0);
  REQUIRE(even.stats[0].d == 2);
  REQUIRE(even.stats[0].ruleCount == 1);

  PipelineResult odd = runPipeline(parityConfig("odd-loop.hors", "S : o. S -> [E 1, S]."));
  REQUIRE(odd.winner == Player::Adam);
  REQUIRE(odd.verdictWord() == "Adam");
}

TEST_CASE("worked examples agree with the whole-tree oracle") {
  struct Example {
    const char* name;
    const char* text;
    int order;
    bool bruteSized;  // final game small enough for strategy enumeration
  };
  for (const Example& ex : {Example{"split.hors", kSplitText, 1, true},
                            Example{"indirect.hors", kIndirectText, 2, false}}) {
    DYNAMIC_SECTION(ex.name) {
      PipelineConfig config = parityConfig(ex.name, ex.text);
      PipelineResult result = runPipeline(config);

      REQUIRE(result.stats.size() == static_cast<size_t>(ex.order) + 1);
      for (size_t i = 0; i < result.stats.size(); ++i)
        REQUIRE(result.stats[i].order == ex.order - static_cast<int>(i));
      REQUIRE(result.stats.back().order == 0);

      std::optional<Player> oracle = finiteGameOracle(parseScheme(ex.text), 5000);
      REQUIRE(oracle.has_value());
      REQUIRE(result.winner == *oracle);

      if (ex.bruteSized) {
        PipelineConfig brute = config;
        brute.solver = SolverChoice::Brute;
        REQUIRE(runPipeline(brute).winner == result.winner);
      }
      REQUIRE(runPipeline(config).winner == result.winner);
    }
  }
}

TEST_CASE("acceptance verdicts match the hand analysis of the corpus") {
  for (const horstest::AptPair& pair : horstest::aptCorpus()) {
    // Reducing an order-2 product grows double-exponentially with its
    // priority bound; the bounded-tree suites cover that pair instead.
    if (schemeOrder(pair.scheme) > 1) continue;
    DYNAMIC_SECTION(pair.name) {
      PipelineResult result = runPipeline(aptConfig(pair));
      REQUIRE(result.apt);
      REQUIRE((result.winner == Player::Eve) == pair.accepted);
      REQUIRE(result.verdictWord() == (pair.accepted ? "Accepted" : "Rejected"));
      REQUIRE(result.stats.back().order == 0);
    }
  }
}

TEST_CASE("stage dumps re-parse and the last one solves to the same winner") {
  SECTION("reduction stages") {
    PipelineConfig config = parityConfig("dump-split.hors", kIndirectText);
    fs::path dir = tempRoot() / "dump-parity";
    fs::remove_all(dir);
    config.dumpDir = dir.string();
    PipelineResult result = runPipeline(config);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    REQUIRE(files.size() == 3);

    RecursionScheme last;
    for (const fs::path& f : files) last = parseScheme(readAll(f.string()));
    REQUIRE(schemeOrder(last) == 0);
    ParityGameGraph game = extractGame(last);
    REQUIRE(solveZielonka(game).winner[static_cast<size_t>(game.root)] == result.winner);
  }

  SECTION("product stages carry reserved labels and still re-parse") {
    horstest::AptPair pair = horstest::aptCorpus().front();
    PipelineConfig config = aptConfig(pair);
    fs::path dir = tempRoot() / "dump-apt";
    fs::remove_all(dir);
    config.dumpDir = dir.string();
    runPipeline(config);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    REQUIRE(files.size() >= 4);
    REQUIRE(files[0].filename().string() == "00-wrapped.hors");
    for (const fs::path& f : files) REQUIRE_NOTHROW(parseScheme(readAll(f.string())));
  }
}

TEST_CASE("stats files hold one tab-separated row per stage") {
  PipelineConfig config = parityConfig("stats-split.hors", kIndirectText);
  fs::path statsPath = tempRoot() / "stats.tsv";
  config.statsOut = statsPath.string();
  PipelineResult result = runPipeline(config);

  std::istringstream lines(readAll(statsPath.string()));
  std::string line;
  size_t rows = 0;
  while (std::getline(lines, line)) {
    std::vector<std::string> fields;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, '\t')) fields.push_back(cell);
    REQUIRE(fields.size() == 7);
    REQUIRE(fields[0] == std::to_string(rows));
    const StageStats& s = result.stats.at(rows);
    REQUIRE(fields[1] == std::to_string(s.order));
    REQUIRE(fields[2] == std::to_string(s.schemeSize));
    REQUIRE(fields[3] == std::to_string(s.maxArity));
    REQUIRE(fields[4] == std::to_string(s.d));
    REQUIRE(fields[5] == std::to_string(s.ruleCount));
    REQUIRE(std::stod(fields[6]) >= 0.0);
    ++rows;
  }
  REQUIRE(rows == result.stats.size());
}

TEST_CASE("cross-checks pass on honest runs and fail on a corrupted one") {
  PipelineConfig config = parityConfig("check-split.hors", kIndirectText);

  CrossCheckReport honest = crossCheck(config);
  REQUIRE(honest.allPass());
  std::vector<std::string> names;
  for (const CheckResult& c : honest.checks) names.push_back(c.name);
  REQUIRE(std::count(names.begin(), names.end(), "std2ext@0") == 1);
  REQUIRE(std::count(names.begin(), names.end(), "ext2trans@0") == 1);
  REQUIRE(std::count(names.begin(), names.end(), "ext2trans@1") == 1);
  REQUIRE(std::count(names.begin(), names.end(), "oracle-agreement") == 1);

  CrossCheckReport corrupted = crossCheck(config, [](RecursionScheme& g, int iter) {
    if (iter != 1) return;
    for (const std::string& nt : g.ntOrder) g.rules[nt].body = flipPriorities(g.rules[nt].body);
  });
  REQUIRE_FALSE(corrupted.allPass());
  bool extFailed = false;
  for (const CheckResult& c : corrupted.checks)
    if (c.name == "ext2trans@0" && !c.pass) extFailed = true;
  REQUIRE(extFailed);

  CrossCheckReport apt = crossCheck(aptConfig(horstest::aptCorpus().front()));
  REQUIRE(apt.allPass());
  REQUIRE(apt.checks.front().name == "product-run-tree");
}

TEST_CASE("the command line tool maps verdicts onto exit codes") {
  auto run = [&](const std::string& args, std::string* output = nullptr) {
    fs::path out = tempRoot() / "cli-out.txt";
    std::string cmd = std::string(HORSMC_BIN) + " " + args + " > " + out.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    if (output) *output = readAll(out.string());
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
  };
  const std::string samples = SAMPLES_DIR;

  std::string output;
  REQUIRE(run(samples + "/split-tree.hors", &output) == 0);
  REQUIRE(output == "Eve\n");
  REQUIRE(run(samples + "/indirect-split.hors", &output) == 0);
  REQUIRE(output == "Eve\n");
  REQUIRE(run(samples + "/odd-stream.hors", &output) == 1);
  REQUIRE(output == "Adam\n");

  REQUIRE(run(samples + "/a-stream.hors --mode apt --automaton " + samples + "/inf-a.apt",
              &output) == 0);
  REQUIRE(output == "Accepted\n");
  REQUIRE(run(samples + "/b-stream.hors --mode apt --automaton " + samples + "/inf-a.apt",
              &output) == 1);
  REQUIRE(output == "Rejected\n");

  REQUIRE(run(samples + "/no-such-file.hors") == 2);
  REQUIRE(run(samples + "/a-stream.hors --mode apt") == 2);
  REQUIRE(run(samples + "/split-tree.hors --nope") == 2);
  REQUIRE(run(writeInput("broken.hors", "S : o. S -> .")) == 2);

  REQUIRE(run(samples + "/split-tree.hors --check", &output) == 0);
  REQUIRE(output.find("Eve\n") == 0);
  REQUIRE(output.find("check oracle-agreement: pass") != std::string::npos);

  fs::path statsPath = tempRoot() / "cli-stats.tsv";
  fs::path dumpDir = tempRoot() / "cli-dump";
  fs::remove_all(dumpDir);
  REQUIRE(run(samples + "/split-tree.hors --stats " + statsPath.string() +
              " --dump-stages " + dumpDir.string() + " --solver brute") == 0);
  REQUIRE(fs::exists(statsPath));
  REQUIRE(fs::exists(dumpDir / "00-simple.hors"));
  REQUIRE(fs::exists(dumpDir / "01-reduce-1.hors"));
}
