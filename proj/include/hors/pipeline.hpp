#pragma once
// End-to-end driver. Parses the input files, lowers the scheme stage by
// stage (divergence elimination and product when an automaton is given,
// simple form, one order reduction per level, game extraction), solves the
// final game, and reports per-stage statistics. crossCheck replays the run
// and compares each stage against the bounded tree semantics.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hors/automaton.hpp"
#include "hors/bounded_tree.hpp"
#include "hors/errors.hpp"
#include "hors/game.hpp"
#include "hors/normalize.hpp"
#include "hors/oracle.hpp"
#include "hors/parse.hpp"
#include "hors/product.hpp"
#include "hors/reduce.hpp"
#include "hors/scheme.hpp"
#include "hors/term.hpp"

namespace hors {

enum class PipelineMode { Parity, Apt };
enum class SolverChoice { Zielonka, Brute };

struct PipelineConfig {
  PipelineMode mode = PipelineMode::Parity;
  std::string schemePath;
  std::string automatonPath;  // required in apt mode
  std::optional<std::string> dumpDir;
  int oracleDepth = 6;
  int oracleNodeBudget = 5000;
  SolverChoice solver = SolverChoice::Zielonka;
  std::optional<std::string> statsOut;
};

struct StageStats {
  int order = 0;
  long long schemeSize = 0;
  int maxArity = 0;
  int d = 0;
  long long ruleCount = 0;
  double wallTimeMs = 0.0;
};

struct PipelineResult {
  Player winner = Player::Eve;
  bool apt = false;
  std::vector<StageStats> stats;

  std::string verdictWord() const {
    if (apt) return winner == Player::Eve ? "Accepted" : "Rejected";
    return winner == Player::Eve ? "Eve" : "Adam";
  }
};

// Applied to each reduced scheme as it is produced; lets a harness plant a
// corruption and confirm that crossCheck notices.
using TransformHook = std::function<void(RecursionScheme&, int)>;

inline void dumpStage(const RecursionScheme& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path, 2);
  out << renderScheme(g);
  out.flush();
  if (!out) throw Error("write failed: " + path, 2);
}

namespace detail {

template <class F>
auto stage(const std::string& name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(name + ": " + e.what(), e.exitCode);
  }
}

inline std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path, 2);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct PipelineRun {
  std::vector<StageStats> stats;
  RecursionScheme input;
  bool apt = false;
  RecursionScheme wrapped;   // apt only: every rewriting step made visible
  RecursionScheme strong;    // apt only: product-ready form
  RecursionScheme product;   // apt only
  Apt eliminated;            // apt only
  std::vector<RecursionScheme> chain;  // simple form, then one entry per reduction
  Player winner = Player::Eve;
};

inline PipelineRun execute(const PipelineConfig& config, const TransformHook& hook) {
  namespace fs = std::filesystem;
  using Clock = std::chrono::steady_clock;
  PipelineRun run;

  int dumpIndex = 0;
  auto dump = [&](const RecursionScheme& g, const std::string& name) {
    if (!config.dumpDir) return;
    fs::create_directories(*config.dumpDir);
    std::string file =
        (dumpIndex < 10 ? "0" : "") + std::to_string(dumpIndex) + "-" + name + ".hors";
    ++dumpIndex;
    dumpStage(g, (fs::path(*config.dumpDir) / file).string());
  };

  Clock::time_point mark = Clock::now();
  auto record = [&](const RecursionScheme& g) {
    Clock::time_point now = Clock::now();
    StageStats s;
    s.order = schemeOrder(g);
    s.schemeSize = schemeSize(g);
    s.maxArity = maxArity(g);
    s.d = g.maxPriority;
    s.ruleCount = static_cast<long long>(g.rules.size());
    s.wallTimeMs = std::chrono::duration<double, std::milli>(now - mark).count();
    run.stats.push_back(s);
    mark = now;
  };

  run.input = stage("parse-scheme",
                    [&] { return parseScheme(readFile(config.schemePath)); });

  RecursionScheme current;
  if (config.mode == PipelineMode::Apt) {
    run.apt = true;
    if (config.automatonPath.empty())
      throw Error("an automaton file is required to check acceptance", 2);
    Apt a = stage("parse-automaton",
                  [&] { return parseAutomaton(readFile(config.automatonPath)); });
    auto wrappedPair = stage("eliminate-divergence",
                             [&] { return epsilonEliminate(run.input, a); });
    run.wrapped = std::move(wrappedPair.first);
    run.eliminated = std::move(wrappedPair.second);
    dump(run.wrapped, "wrapped");
    run.strong = stage("normalize", [&] { return toStrongSimpleForm(run.wrapped).first; });
    dump(run.strong, "strong");
    current = stage("product", [&] { return buildProduct(run.strong, run.eliminated); });
    run.product = current;
    dump(current, "product");
  } else {
    if (alphabetKind(run.input) != AlphabetKind::Parity)
      throw Error(
          "verify-input: every constructor must carry an owner and a priority "
          "in this mode",
          2);
    current = run.input;
  }

  RecursionScheme simple = stage("simple-form", [&] { return toSimpleForm(current).first; });
  dump(simple, "simple");
  run.chain.push_back(std::move(simple));
  record(run.chain.back());

  int levels = schemeOrder(run.chain.back());
  for (int i = 1; i <= levels; ++i) {
    RecursionScheme next = stage("reduce-" + std::to_string(i),
                                 [&] { return transformScheme(run.chain.back()); });
    if (hook) hook(next, i);
    dump(next, "reduce-" + std::to_string(i));
    run.chain.push_back(std::move(next));
    record(run.chain.back());
  }

  ParityGameGraph game = stage("extract", [&] { return extractGame(run.chain.back()); });
  Solution sol = stage("solve", [&] {
    return config.solver == SolverChoice::Brute ? bruteForceSolve(game) : solveZielonka(game);
  });
  run.winner = sol.winner[static_cast<size_t>(game.root)];
  return run;
}

inline void writeStats(const std::vector<StageStats>& stats, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path, 2);
  out << std::fixed << std::setprecision(3);
  for (size_t i = 0; i < stats.size(); ++i) {
    const StageStats& s = stats[i];
    out << i << '\t' << s.order << '\t' << s.schemeSize << '\t' << s.maxArity << '\t' << s.d
        << '\t' << s.ruleCount << '\t' << s.wallTimeMs << '\n';
  }
  out.flush();
  if (!out) throw Error("write failed: " + path, 2);
}

}  // namespace detail

inline PipelineResult runPipeline(const PipelineConfig& config) {
  detail::PipelineRun run = detail::execute(config, {});
  if (config.statsOut) detail::writeStats(run.stats, *config.statsOut);
  return {run.winner, run.apt, std::move(run.stats)};
}

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CrossCheckReport {
  std::vector<CheckResult> checks;

  bool allPass() const {
    for (const CheckResult& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Replays the staged run and compares neighbouring stages through their
// bounded trees, then compares the final winner against the whole-tree
// oracle when the latter resolves within budget.
inline CrossCheckReport crossCheck(const PipelineConfig& config, const TransformHook& corrupt = {}) {
  detail::PipelineRun run = detail::execute(config, corrupt);
  CrossCheckReport report;
  const int depth = config.oracleDepth;
  const int budget = config.oracleNodeBudget;
  const int extDepth = 6 * depth + 12;

  auto add = [&](std::string name, bool pass, std::string detail = "") {
    report.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  if (run.apt) {
    BtPtr lhs = boundedBT(run.product, nonterminal(run.product.start), depth, budget);
    BtPtr input = boundedBT(run.strong, nonterminal(run.strong.start), depth, budget);
    BtPtr rhs = boundedRunTree(run.eliminated, run.eliminated.initial, input, depth);
    add("product-run-tree", agreesUpToCutoff(lhs, rhs));
  }

  for (size_t i = 0; i < run.chain.size(); ++i) {
    const RecursionScheme& g = run.chain[i];
    BtPtr ext = boundedBTExt(g, {nonterminal(g.start), {}}, extDepth, budget);
    BtPtr plain = boundedBT(g, nonterminal(g.start), depth, budget);
    add("std2ext@" + std::to_string(i), agreesUpToCutoff(expand(ext, depth), plain));
    if (i + 1 < run.chain.size()) {
      const RecursionScheme& next = run.chain[i + 1];
      BtPtr reduced = boundedBT(next, nonterminal(next.start), depth, budget);
      add("ext2trans@" + std::to_string(i),
          agreesUpToCutoff(trTree({}, ext, g.maxPriority, depth), reduced));
    }
  }

  const RecursionScheme& subject = run.apt ? run.product : run.input;
  std::optional<Player> oracle = finiteGameOracle(subject, budget);
  if (!oracle) {
    add("oracle-agreement", true, "unresolved within budget, skipped");
  } else {
    add("oracle-agreement", *oracle == run.winner);
  }
  return report;
}

}  // namespace hors
