#pragma once

#include "fspta/Ir.hpp"

#include <set>
#include <utility>
#include <vector>

namespace fspta {

// Statement-level control-flow graph over labels. Direct calls are wired
// at construction; indirect calls are bound later by the solvers through
// addCallBinding, so Cfg instances are value types that each solver may
// clone and extend independently.
//
// Interprocedural shape: a call site has an edge to the callee entry, and
// every callee exit has an edge back to the call site itself; the call
// site keeps its textual fallthrough successor.
struct Cfg {
  std::vector<std::vector<LabelId>> succ, pred; // intra + call + ret edges
  std::vector<std::pair<LabelId, LabelId>> intraEdges;
  std::vector<std::pair<LabelId, LabelId>> callEdges; // (site, callee entry)
  std::vector<std::pair<LabelId, LabelId>> retEdges;  // (callee exit, site)
  std::vector<LabelId> entry;              // per function; kInvalidId if empty
  std::vector<std::vector<LabelId>> exits; // per function
  std::vector<bool> inLoop;                // label lies on an intra-edge cycle

  // Wires one indirect (or additional) call target. Returns true iff any
  // new edge appeared.
  bool addCallBinding(const Program &p, LabelId site, FuncId callee);

  bool hasEdge(LabelId from, LabelId to) const {
    return edgeSet_.count((uint64_t(from) << 32) | to) != 0;
  }

private:
  friend Cfg buildCfg(Program &prog);
  void addEdge(LabelId from, LabelId to);
  std::set<uint64_t> edgeSet_;
};

// Builds per-function CFGs plus direct-call wiring. Also finalizes object
// summary flags: an object is summary iff some Addr site spells the
// keyword, its address is taken at more than one site, or an Addr site
// sits on a CFG cycle (allocation under a loop).
Cfg buildCfg(Program &prog);

} // namespace fspta
