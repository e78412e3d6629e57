#pragma once

#include "fspta/Cfg.hpp"
#include "fspta/ConstraintGraph.hpp"
#include "fspta/Wave.hpp"

#include <utility>
#include <vector>

namespace fspta {

// Flow-insensitive inclusion analysis over the whole program. Statement
// order and labels play no role; Load/Store edges carry no label.
struct AndersenResult {
  ConstraintGraph graph;
  WaveSolver::Outcome stats;
  // indirect call sites resolved during solving, in discovery order
  std::vector<std::pair<LabelId, FuncId>> callBindings;

  explicit AndersenResult(const Program &prog) : graph(prog) {}
  const PointsToSet &pts(VarId v) const;
};

AndersenResult solveAndersen(Program &prog, const SolveOptions &opts = {});

// Construction phase of solveAndersen: one node per variable, top-level
// edges, unlabeled Load/Store edges, fold exemptions. Leaves the graph
// unsolved so callers can inspect or count the raw constraints.
void buildFiConstraints(const Program &prog, ConstraintGraph &g,
                        std::vector<PendingCall> &calls);

// Shared by the flow-insensitive and flow-sensitive builders: top-level
// wiring for one statement (Addr/Copy/Gep, direct call and ret plumbing,
// collecting indirect sites). Load/Store/indirect-call memory handling
// differs per mode and stays with the callers.
void addTopLevelEdges(ConstraintGraph &g, const Program &prog,
                      const Statement &s, const Function &enclosing,
                      std::vector<PendingCall> &calls);

// Flags nodes that may gain in-edges while solving and therefore must not
// be folded: load results always; params, return vars and call results as
// soon as the program has any indirect call.
void flagUnfoldableTopLevels(ConstraintGraph &g, const Program &prog);

} // namespace fspta
