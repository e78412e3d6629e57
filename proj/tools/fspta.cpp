#include "fspta/Common.hpp"
#include "fspta/Driver.hpp"

#include "CLI11.hpp"

int main(int argc, char **argv) {
  fspta::log::setLevelFromEnv();

  CLI::App app{"flow-sensitive points-to analysis over a constraint graph"};
  app.require_subcommand(1);

  fspta::DriverOptions dopts;
  fspta::CorpusOptions copts;
  std::string file, what = "program";

  auto addSolverFlags = [&](CLI::App *cmd) {
    cmd->add_flag("--no-simplify", dopts.noSimplify,
                  "disable SCC collapsing and copy-chain folding");
    cmd->add_option("--iter-cap", dopts.iterCap,
                    "solver iteration cap (0 = 10x label count)");
    auto *strict = cmd->add_flag("--strict", "reject undeclared variables");
    cmd->add_flag("--lenient", dopts.lenient,
                  "auto-declare used-but-unassigned variables")
        ->excludes(strict);
  };

  CLI::App *analyze =
      app.add_subcommand("analyze", "run one analysis and emit its result");
  analyze->add_option("file", file, "input program")->required();
  analyze->add_option("--mode", dopts.mode, "fi | fs | dense")
      ->check(CLI::IsMember({"fi", "fs", "dense"}));
  analyze->add_option("--emit", dopts.emit, "json | dot | stats")
      ->check(CLI::IsMember({"json", "dot", "stats"}));
  analyze->add_option("--out", dopts.outPath, "output path (default stdout)");
  analyze
      ->add_flag("--test-disable-su", dopts.disableSu,
                 "fault injection: never apply strong updates (fs only)")
      ->group(""); // hidden
  addSolverFlags(analyze);

  CLI::App *diff = app.add_subcommand(
      "diff", "solve fs and dense, compare every queryable set");
  diff->add_option("file", file, "input program")->required();
  diff->add_flag("--test-disable-su", dopts.disableSu,
                 "fault injection: never apply strong updates (fs only)")
      ->group("");
  addSolverFlags(diff);

  CLI::App *corpus = app.add_subcommand(
      "corpus", "differential-test generated programs, write CSV metrics");
  corpus->add_option("--seed", copts.seed, "base seed; program i uses seed+i");
  corpus->add_option("--n", copts.n, "number of programs");
  corpus->add_option("--max-stmts", copts.maxStmts,
                     "statement budget per program");
  corpus->add_option("--summary-prob", copts.summaryProb,
                     "probability an allocation is marked summary")
      ->check(CLI::Range(0.0, 1.0));
  corpus->add_option("--out", copts.outPath, "CSV path (default stdout)");
  corpus->add_option("--counterexample", copts.counterexamplePath,
                     "where to save a shrunken failing program");
  corpus->add_flag("--no-simplify", copts.noSimplify,
                   "disable SCC collapsing and copy-chain folding");
  corpus->add_option("--iter-cap", copts.iterCap,
                     "solver iteration cap (0 = 10x label count)");

  CLI::App *dump =
      app.add_subcommand("dump", "dump the parsed program or its def-use chains");
  dump->add_option("file", file, "input program")->required();
  dump->add_option("--what", what, "program | defuse")
      ->check(CLI::IsMember({"program", "defuse"}));
  dump->add_option("--out", dopts.outPath, "output path (default stdout)");
  addSolverFlags(dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e); // prints help, exits 0
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return fspta::kExitUsage;
  }

  if (analyze->parsed())
    return fspta::runAnalyze(file, dopts);
  if (diff->parsed())
    return fspta::runDiff(file, dopts);
  if (corpus->parsed())
    return fspta::runCorpus(copts);
  return fspta::runDump(file, what, dopts);
}
