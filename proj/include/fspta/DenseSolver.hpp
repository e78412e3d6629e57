#pragma once

#include "fspta/Andersen.hpp"
#include "fspta/Cfg.hpp"

#include <map>
#include <set>
#include <vector>

namespace fspta {

// Reference flow-sensitive analysis: classic iterative dataflow over the
// interprocedural CFG with full per-label object maps and a single global
// map for top-level variables. Shares no propagation machinery with the
// graph solvers; only the parser, the CFG and the flow-insensitive sets
// (which gate what a store label can redefine) are common inputs.
struct DenseResult {
  using ObjMap = std::map<VarId, std::set<VarId>>;
  std::map<VarId, std::set<VarId>> top;
  std::vector<ObjMap> in, out; // per label; absent entry = empty set
  std::vector<std::pair<LabelId, FuncId>> callBindings;
  uint64_t rounds = 0;

  const std::set<VarId> &topOf(VarId v) const;
  const std::set<VarId> &inAt(LabelId l, VarId o) const;
  const std::set<VarId> &outAt(LabelId l, VarId o) const;
};

DenseResult solveDense(Program &prog, const Cfg &baseCfg,
                       const AndersenResult &fi,
                       const SolveOptions &opts = {});

} // namespace fspta
