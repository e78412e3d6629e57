#pragma once

#include "fspta/Common.hpp"

#include <functional>
#include <string>

namespace fspta {

// Knobs for the random program generator. Programs come out as IR text in
// the canonical printer format, always strict-parseable: every used
// variable is defined on all paths reaching its use, branch targets exist,
// call arities match at direct call sites.
struct GenConfig {
  uint64_t seed = 0;
  uint32_t maxStmts = 40;
  uint32_t maxObjects = 6;
  uint32_t maxFuncs = 3;  // helper functions besides main
  uint32_t maxFields = 2; // distinct field names for gep
  double branchProb = 0.25;
  double loopProb = 0.15;
  double indirectCallProb = 0.35; // per call site, once calls are enabled
  double summaryProb = 0.1;       // explicit `summary` keyword on addr
  bool calls = true;
};

std::string generateProgram(const GenConfig &cfg);

// Greedy delta-debugging over the textual form: repeatedly drops whole
// functions, then single statements, keeping a candidate only when it
// still parses and `stillFails` holds. `stillFails(text)` must be true.
std::string
shrinkProgram(const std::string &text,
              const std::function<bool(const std::string &)> &stillFails);

} // namespace fspta
