#pragma once

#include "fspta/ConstraintGraph.hpp"

#include <unordered_set>
#include <vector>

namespace fspta {

struct SolveOptions {
  bool simplify = true; // run sccCollapse + foldCopyChains each iteration
  uint64_t iterCap = 0; // 0 picks 10 * max(1, #labels)
  bool disableSu = false; // fault hook: force every store weak
};

// One unresolved indirect call site; seenFuncs accumulates every function
// object already wired (or rejected for arity) so each binds at most once.
struct PendingCall {
  LabelId site = kInvalidId;
  NodeId ptrNode = kInvalidId;
  std::vector<NodeId> argNodes;
  NodeId dstNode = kInvalidId;
  PointsToSet seenFuncs;
};

// Generic wave solver. Each iteration: optional simplification, then diff
// propagation over Copy/Gep edges to exhaustion, then one scan of the
// Load/Store edges handing newly seen pointer objects to the policy hooks,
// then one call-graph pass. Stops when an iteration changes nothing.
class WaveSolver {
public:
  struct Hooks {
    virtual ~Hooks() = default;
    virtual void onLoadDiff(ConstraintGraph::MemEdge &e,
                            const PointsToSet &newObjs) = 0;
    virtual void onStoreDiff(ConstraintGraph::MemEdge &e,
                             const PointsToSet &newObjs) = 0;
    virtual bool onCallGraph() { return false; }
    // Field member for object o, kInvalidId to skip. The flow-insensitive
    // policy interns here; the flow-sensitive one only looks up.
    virtual VarId gepTarget(VarId o, FieldId field) = 0;
  };

  WaveSolver(ConstraintGraph &g, const SolveOptions &opts, Hooks &hooks)
      : g_(g), opts_(opts), hooks_(hooks) {}

  struct Outcome {
    uint64_t iterations = 0;
    uint32_t sccMerged = 0;
    uint32_t folded = 0;
  };
  Outcome solve();

  // Hook helpers. All of them flag the iteration as changed when they
  // actually alter solver state.
  bool insertSeededCopy(NodeId src, NodeId dst, bool killable = false,
                        bool active = true);
  void activateEdge(uint32_t copyIdx);
  void markChanged() { changed_ = true; }

  ConstraintGraph &graph() { return g_; }
  const SolveOptions &options() const { return opts_; }

private:
  void seedAddr();
  void stage1();
  void stage2();
  void seedAlong(NodeId src, NodeId dst);
  void warnBadGepBase(VarId o, FieldId field);

  ConstraintGraph &g_;
  SolveOptions opts_;
  Hooks &hooks_;
  bool changed_ = false;
  std::vector<NodeId> topo_;
  std::unordered_set<uint64_t> gepWarned_;
};

} // namespace fspta
