#include "fspta/FsGraph.hpp"

namespace fspta {

FsGraph buildFsGraph(const Program &prog, const DefUseInfo &du) {
  FsGraph fg(prog);
  ConstraintGraph &g = fg.graph;
  for (VarId v = 0; v < prog.vars.size(); ++v)
    g.ensureNode(v);

  // Version every may-pair, label-major then object-ascending, so node
  // ids (and everything derived from them) are input-determined.
  fg.versionsAt.resize(prog.numLabels());
  for (LabelId l = 0; l < prog.numLabels(); ++l) {
    const auto &objs =
        du.mayDef[l].empty() ? du.mayUse[l] : du.mayDef[l];
    for (VarId o : objs) {
      NodeId v = g.addVersionNode(o, l);
      fg.versionIndex.emplace(FsGraph::pairKey(o, l), v);
      fg.versionsAt[l].push_back(v);
    }
  }

  for (const Function &f : prog.funcs) {
    for (const Statement &s : f.stmts) {
      addTopLevelEdges(g, prog, s, f, fg.calls);
      if (s.op == OpKind::Load)
        g.addLoadEdge(g.ensureNode(s.ptr), g.ensureNode(s.dst), s.label);
      else if (s.op == OpKind::Store)
        g.addStoreEdge(g.ensureNode(s.src), g.ensureNode(s.ptr), s.label);
    }
  }
  flagUnfoldableTopLevels(g, prog);

  for (const DefUseInfo::Edge &e : du.edges) {
    NodeId vd = fg.version(e.obj, e.def);
    NodeId vu = fg.version(e.obj, e.use);
    if (vd == kInvalidId || vu == kInvalidId)
      throw GraphError("def-use edge for '" + prog.varName(e.obj) +
                       "' references a label without a version");
    bool killable = prog.stmtOf(e.use).op == OpKind::Store;
    g.addCopyEdge(vd, vu, killable, !killable);
  }

  // Store versions take value edges as the solver discovers targets; with
  // indirect calls around, any version can gain def-use edges later too.
  for (LabelId l = 0; l < prog.numLabels(); ++l) {
    if (prog.stmtOf(l).op != OpKind::Store)
      continue;
    for (NodeId v : fg.versionsAt[l])
      g.node(v).noFold = true;
  }
  if (!fg.calls.empty()) {
    for (NodeId v = g.versionBase(); v < g.numNodes(); ++v)
      g.node(v).noFold = true;
  }
  return fg;
}

} // namespace fspta
