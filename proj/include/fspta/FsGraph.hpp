#pragma once

#include "fspta/Andersen.hpp"
#include "fspta/DefUse.hpp"

#include <unordered_map>

namespace fspta {

// Flow-sensitive constraint graph: the flow-insensitive shape plus one
// version node per (object, label) may-pair and Copy edges along the
// def-use chains. Edges into a store-label version are killable and start
// inactive; the store decides at solve time whether its kill stands.
struct FsGraph {
  ConstraintGraph graph;
  std::vector<PendingCall> calls;
  std::unordered_map<uint64_t, NodeId> versionIndex;
  std::vector<std::vector<NodeId>> versionsAt; // per label, object-ordered

  explicit FsGraph(const Program &p) : graph(p) {}

  static uint64_t pairKey(VarId o, LabelId l) {
    return (static_cast<uint64_t>(o) << 32) | l;
  }
  NodeId version(VarId o, LabelId l) const {
    auto it = versionIndex.find(pairKey(o, l));
    return it == versionIndex.end() ? kInvalidId : it->second;
  }
};

FsGraph buildFsGraph(const Program &prog, const DefUseInfo &du);

} // namespace fspta
