// Command-line front end: reads a scheme file (and optionally an automaton
// file), runs the staged reduction to a finite parity game, and prints the
// verdict. Exit status: 0 when Eve wins / the tree is accepted, 1 when Adam
// wins / it is rejected, 2 for unusable input, 3 when an internal invariant
// breaks.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "hors/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Decides the winner of the parity tree generated by a higher-order "
      "recursion scheme, or whether an alternating parity automaton accepts "
      "the tree of a plain scheme."};

  std::string schemePath;
  std::string mode = "parity";
  std::string automatonPath;
  std::string dumpDir;
  std::string statsFile;
  std::string solver = "zielonka";
  int oracleDepth = 6;
  int oracleBudget = 5000;
  bool check = false;

  app.add_option("scheme", schemePath, "scheme file")->required();
  app.add_option("--mode", mode, "parity (default) or apt")
      ->check(CLI::IsMember({"parity", "apt"}));
  app.add_option("--automaton", automatonPath, "automaton file (apt mode)");
  app.add_option("--dump-stages", dumpDir, "write each intermediate scheme into this directory");
  app.add_option("--oracle-depth", oracleDepth, "tree depth for --check comparisons");
  app.add_option("--oracle-budget", oracleBudget, "node budget for --check comparisons");
  app.add_option("--solver", solver, "zielonka (default) or brute")
      ->check(CLI::IsMember({"zielonka", "brute"}));
  app.add_option("--stats", statsFile, "write per-stage statistics to this file");
  app.add_flag("--check", check, "replay the run against the bounded tree semantics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  hors::PipelineConfig config;
  config.mode = mode == "apt" ? hors::PipelineMode::Apt : hors::PipelineMode::Parity;
  config.schemePath = schemePath;
  config.automatonPath = automatonPath;
  if (!dumpDir.empty()) config.dumpDir = dumpDir;
  config.oracleDepth = oracleDepth;
  config.oracleNodeBudget = oracleBudget;
  config.solver = solver == "brute" ? hors::SolverChoice::Brute : hors::SolverChoice::Zielonka;
  if (!statsFile.empty()) config.statsOut = statsFile;

  try {
    hors::PipelineResult result = hors::runPipeline(config);
    std::cout << result.verdictWord() << "\n";
    if (check) {
      hors::CrossCheckReport report = hors::crossCheck(config);
      for (const hors::CheckResult& c : report.checks) {
        std::cout << "check " << c.name << ": " << (c.pass ? "pass" : "FAIL");
        if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
        std::cout << "\n";
      }
      if (!report.allPass()) {
        std::cerr << "error: stage cross-checks failed\n";
        return 3;
      }
    }
    return result.winner == hors::Player::Eve ? 0 : 1;
  } catch (const hors::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exitCode;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
