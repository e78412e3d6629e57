#pragma once

#include <cstdint>
#include <string>

namespace fspta {

// Process exit codes shared by the CLI and the test harness.
constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitSolver = 2;
constexpr int kExitDiff = 3;
constexpr int kExitUsage = 64;

struct DriverOptions {
  std::string mode = "fs";   // fi | fs | dense
  std::string emit = "json"; // json | dot | stats
  std::string outPath;       // empty writes to stdout
  bool lenient = false;
  bool noSimplify = false;
  uint64_t iterCap = 0;
  bool disableSu = false; // fault-injection hook, fs mode only
};

struct CorpusOptions {
  uint64_t seed = 42;
  uint32_t n = 100;
  uint32_t maxStmts = 40;
  double summaryProb = 0.1;
  std::string outPath; // CSV; empty writes to stdout
  std::string counterexamplePath = "counterexample.ir";
  bool lenient = false;
  bool noSimplify = false;
  uint64_t iterCap = 0;
};

// All runners return an exit code and keep diagnostics on stderr; the
// selected artifact is the only thing written to the output stream, so
// reruns with the same inputs are byte-identical.
int runAnalyze(const std::string &file, const DriverOptions &opts);
int runDiff(const std::string &file, const DriverOptions &opts);
int runCorpus(const CorpusOptions &opts);
// what: "program" (JSON) or "defuse" (text)
int runDump(const std::string &file, const std::string &what,
            const DriverOptions &opts);

} // namespace fspta
