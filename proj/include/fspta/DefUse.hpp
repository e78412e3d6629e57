#pragma once

#include "fspta/Andersen.hpp"
#include "fspta/Cfg.hpp"

#include <compare>
#include <vector>

namespace fspta {

// Interprocedural def-use chains, one relation per address-taken object.
// A store label may-defines everything its pointer can reach under the
// flow-insensitive sets; a load label may-uses them. A def d reaches a
// label m when some cfg path d -> m has no intervening may-def of the
// same object. Def-def edges are kept: later stores need their inputs.
struct DefUseInfo {
  struct Edge {
    LabelId def, use;
    VarId obj;
    auto operator<=>(const Edge &) const = default;
  };
  std::vector<std::vector<VarId>> mayDef, mayUse; // per label, sorted
  std::vector<Edge> edges;                        // sorted (def, use, obj)
};

DefUseInfo computeDefUse(const Program &prog, const Cfg &cfg,
                         const AndersenResult &fi);

} // namespace fspta
