#pragma once

#include "fspta/FsGraph.hpp"

namespace fspta {

struct FsResult {
  FsGraph fsg; // solved graph plus version index
  WaveSolver::Outcome stats;
  std::vector<LabelId> suLabels; // stores whose kill stood, sorted
  std::vector<std::pair<LabelId, FuncId>> callBindings;
  DefUseInfo defuse; // chains over the final call graph
  uint64_t fallbacks = 0;

  explicit FsResult(FsGraph &&g) : fsg(std::move(g)) {}

  const PointsToSet &ptsTop(VarId v) const;
  // State of object o right after / right before label l. Both require
  // the (o, l) pair to be versioned and throw QueryError otherwise.
  const PointsToSet &ptsAfter(VarId o, LabelId l) const;
  PointsToSet ptsBefore(VarId o, LabelId l) const;
};

FsResult solveFs(const Program &prog, const Cfg &baseCfg,
                 const AndersenResult &fi, const SolveOptions &opts = {});

} // namespace fspta
