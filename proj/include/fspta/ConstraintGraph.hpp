#pragma once

#include "fspta/Ir.hpp"
#include "fspta/PointsTo.hpp"

#include <string>
#include <unordered_set>
#include <vector>

namespace fspta {

// Inclusion-constraint graph. Constraints live exclusively on edges:
//   Addr  o --> p        o ∈ pts(p)
//   Copy  q --> p        pts(q) ⊆ pts(p)
//   Gep   q --> p (fld)  { o.fld | o ∈ pts(q) } ⊆ pts(p)
//   Load  q --> p [ℓ]    p = *q
//   Store q --> p [ℓ]    *p = q   (value flows from q through pointer p)
//
// Base nodes are indexed by VarId. Versioned object nodes (o at label ℓ)
// occupy ids above the base range and exist only in flow-sensitive graphs.
// Points-to sets always contain base object VarIds, never versions.
//
// Merging (SCC collapse, chain folding) never rewrites edge endpoints;
// everything downstream resolves endpoints through rep().
class ConstraintGraph {
public:
  struct CopyEdge {
    NodeId src, dst;
    bool killable; // version-chain edge into a store-label version
    bool active;   // killable edges start inactive until the store decides
  };
  struct GepEdge {
    NodeId src, dst;
    FieldId field;
  };
  struct MemEdge {
    NodeId src, dst;  // Load: ptr -> result. Store: value -> ptr.
    LabelId label;    // kInvalidId in flow-insensitive graphs
    PointsToSet seen; // pointer objects already expanded by the solver
  };

  struct NodeInfo {
    VarId base = kInvalidId;       // program variable; versions: base object
    LabelId versionAt = kInvalidId;
    bool objectNode = false;
    bool noFold = false;      // may gain in-edges during solving
    bool killActivated = false; // store version decided weak (permanent)
    NodeId rep;
    PointsToSet pts;
    PointsToSet pending; // facts not yet pushed to copy/gep successors
  };

  explicit ConstraintGraph(const Program &prog) : prog_(&prog) {}

  NodeId ensureNode(VarId v);
  NodeId addVersionNode(VarId baseObj, LabelId at);
  size_t numNodes() const { return nodes_.size(); }
  NodeId versionBase() const { return versionBase_; }

  NodeInfo &node(NodeId n) { return nodes_[n]; }
  const NodeInfo &node(NodeId n) const { return nodes_[n]; }
  bool isVersion(NodeId n) const { return nodes_[n].versionAt != kInvalidId; }

  // Union-find with path compression; the representative is always the
  // smallest NodeId of its class.
  NodeId rep(NodeId n);
  NodeId findRep(NodeId n) const; // no compression
  void mergeInto(NodeId from, NodeId into);

  // All add*Edge calls dedupe on (kind, src, dst, field, label) and
  // return true iff the edge is new.
  bool addAddrEdge(NodeId obj, NodeId dst);
  bool addCopyEdge(NodeId src, NodeId dst, bool killable = false,
                   bool active = true);
  bool addGepEdge(NodeId src, NodeId dst, FieldId field);
  bool addLoadEdge(NodeId ptr, NodeId dst, LabelId label = kInvalidId);
  bool addStoreEdge(NodeId value, NodeId ptr, LabelId label = kInvalidId);

  std::vector<std::pair<NodeId, NodeId>> addrEdges; // (object, dst)
  std::vector<CopyEdge> copyEdges;
  std::vector<GepEdge> gepEdges;
  std::vector<MemEdge> loadEdges, storeEdges;

  // killable in-edge indices per original target node
  const std::vector<uint32_t> &killableIn(NodeId n) const;

  struct SccResult {
    std::vector<NodeId> topo; // representatives, every active non-killable
                              // Copy edge goes forward in this order
    uint32_t merged = 0;      // nodes newly collapsed by this call
  };

  // Collapses cycles of active, non-killable Copy edges. Representatives
  // take the smallest member id; points-to sets union eagerly on merge.
  SccResult sccCollapse();

  // Merges v into u when v's only in-edge of any kind is one active
  // non-killable Copy u->v, v has no Addr in-edge and is not flagged
  // noFold. Runs to fixpoint; returns the number of nodes merged.
  uint32_t foldCopyChains();

  struct Stats {
    uint64_t addr = 0, copy = 0, gep = 0, load = 0, store = 0;
    uint64_t nodes = 0, versionedNodes = 0;
    uint64_t ptsets = 0; // representatives with non-empty pts
    uint64_t edges() const { return addr + copy + gep + load + store; }
  };
  Stats countConstraints() const;

  // pts(src) ⊆ pts(dst) for every active Copy edge, at rep level.
  bool checkCopyClosure();

  std::string toDot() const;

  const Program &prog() const { return *prog_; }

private:
  struct EdgeKey {
    uint8_t kind;
    uint32_t a, b, c;
    bool operator==(const EdgeKey &) const = default;
  };
  struct EdgeKeyHash {
    size_t operator()(const EdgeKey &k) const {
      uint64_t h = 1469598103934665603ull;
      auto mix = [&h](uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
      };
      mix(k.kind);
      mix(k.a);
      mix(k.b);
      mix(k.c);
      return static_cast<size_t>(h);
    }
  };

  bool dedupe(uint8_t kind, uint32_t a, uint32_t b, uint32_t c);

  const Program *prog_;
  std::vector<NodeInfo> nodes_;
  NodeId versionBase_ = kInvalidId; // set once the first version is made;
                                    // ids below it are base nodes
  std::unordered_set<EdgeKey, EdgeKeyHash> edgeKeys_;
  std::vector<std::vector<uint32_t>> killableIn_;
  std::vector<uint32_t> emptyKillable_;
};

} // namespace fspta
