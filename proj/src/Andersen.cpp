#include "fspta/Andersen.hpp"

#include <cassert>

namespace fspta {

const PointsToSet &AndersenResult::pts(VarId v) const {
  static const PointsToSet empty;
  if (v >= graph.numNodes())
    return empty;
  return graph.node(graph.findRep(v)).pts;
}

void addTopLevelEdges(ConstraintGraph &g, const Program &prog,
                      const Statement &s, const Function &enclosing,
                      std::vector<PendingCall> &calls) {
  switch (s.op) {
  case OpKind::Addr:
    g.addAddrEdge(g.ensureNode(s.obj), g.ensureNode(s.dst));
    break;
  case OpKind::Copy:
    g.addCopyEdge(g.ensureNode(s.src), g.ensureNode(s.dst));
    break;
  case OpKind::Gep:
    g.addGepEdge(g.ensureNode(s.src), g.ensureNode(s.dst), s.field);
    break;
  case OpKind::Ret:
    if (s.src != kInvalidId)
      g.addCopyEdge(g.ensureNode(s.src), g.ensureNode(enclosing.retVar));
    break;
  case OpKind::Call: {
    if (s.isIndirectCall()) {
      PendingCall pc;
      pc.site = s.label;
      pc.ptrNode = g.ensureNode(s.ptr);
      for (VarId a : s.args)
        pc.argNodes.push_back(g.ensureNode(a));
      if (s.dst != kInvalidId)
        pc.dstNode = g.ensureNode(s.dst);
      calls.push_back(std::move(pc));
      break;
    }
    const Function &callee = prog.funcs[s.callee];
    assert(callee.params.size() == s.args.size()); // parser enforces arity
    for (size_t i = 0; i < s.args.size(); ++i)
      g.addCopyEdge(g.ensureNode(s.args[i]), g.ensureNode(callee.params[i]));
    if (s.dst != kInvalidId)
      g.addCopyEdge(g.ensureNode(callee.retVar), g.ensureNode(s.dst));
    break;
  }
  case OpKind::Load:
  case OpKind::Store:
  case OpKind::Goto:
  case OpKind::Br:
    break;
  }
}

void flagUnfoldableTopLevels(ConstraintGraph &g, const Program &prog) {
  bool anyIndirect = false;
  for (const Function &f : prog.funcs) {
    for (const Statement &s : f.stmts) {
      if (s.op == OpKind::Load)
        g.node(g.ensureNode(s.dst)).noFold = true;
      if (s.isIndirectCall())
        anyIndirect = true;
    }
  }
  if (!anyIndirect)
    return;
  for (const Function &f : prog.funcs) {
    for (VarId p : f.params)
      g.node(g.ensureNode(p)).noFold = true;
    g.node(g.ensureNode(f.retVar)).noFold = true;
    for (const Statement &s : f.stmts) {
      if (s.op == OpKind::Call && s.dst != kInvalidId)
        g.node(g.ensureNode(s.dst)).noFold = true;
    }
  }
}

namespace {

class FiHooks : public WaveSolver::Hooks {
public:
  FiHooks(Program &prog, ConstraintGraph &g, std::vector<PendingCall> &calls)
      : prog_(prog), g_(g), calls_(calls) {}

  WaveSolver *solver = nullptr;
  std::vector<std::pair<LabelId, FuncId>> bindings;

  void onLoadDiff(ConstraintGraph::MemEdge &e,
                  const PointsToSet &newObjs) override {
    for (NodeId o : newObjs)
      solver->insertSeededCopy(g_.ensureNode(o), e.dst);
  }

  void onStoreDiff(ConstraintGraph::MemEdge &e,
                   const PointsToSet &newObjs) override {
    for (NodeId o : newObjs)
      solver->insertSeededCopy(e.src, g_.ensureNode(o));
  }

  VarId gepTarget(VarId o, FieldId field) override {
    return prog_.gepObject(o, field);
  }

  bool onCallGraph() override {
    bool bound = false;
    for (PendingCall &pc : calls_) {
      // Copy: binding can feed the function pointer's own set.
      PointsToSet p = g_.node(g_.rep(pc.ptrNode)).pts;
      for (NodeId o : p) {
        if (pc.seenFuncs.contains(o))
          continue;
        pc.seenFuncs.insert(o);
        const Variable &ov = prog_.var(o);
        if (!ov.isFunctionObj()) {
          log::info("indirect call at '" + prog_.labelName(pc.site) +
                    "' ignores non-function target '" + ov.name + "'");
          continue;
        }
        const Function &fn = prog_.funcs[ov.func];
        if (fn.params.size() != pc.argNodes.size()) {
          log::info("indirect call at '" + prog_.labelName(pc.site) +
                    "' with " + std::to_string(pc.argNodes.size()) +
                    " args skips '" + fn.name + "' (takes " +
                    std::to_string(fn.params.size()) + ")");
          continue;
        }
        for (size_t i = 0; i < pc.argNodes.size(); ++i)
          solver->insertSeededCopy(pc.argNodes[i],
                                   g_.ensureNode(fn.params[i]));
        if (pc.dstNode != kInvalidId)
          solver->insertSeededCopy(g_.ensureNode(fn.retVar), pc.dstNode);
        bindings.emplace_back(pc.site, ov.func);
        bound = true;
      }
    }
    return bound;
  }

private:
  Program &prog_;
  ConstraintGraph &g_;
  std::vector<PendingCall> &calls_;
};

} // namespace

void buildFiConstraints(const Program &prog, ConstraintGraph &g,
                        std::vector<PendingCall> &calls) {
  for (VarId v = 0; v < prog.vars.size(); ++v)
    g.ensureNode(v);
  for (const Function &f : prog.funcs) {
    for (const Statement &s : f.stmts) {
      addTopLevelEdges(g, prog, s, f, calls);
      if (s.op == OpKind::Load)
        g.addLoadEdge(g.ensureNode(s.ptr), g.ensureNode(s.dst));
      else if (s.op == OpKind::Store)
        g.addStoreEdge(g.ensureNode(s.src), g.ensureNode(s.ptr));
    }
  }
  flagUnfoldableTopLevels(g, prog);
}

AndersenResult solveAndersen(Program &prog, const SolveOptions &opts) {
  AndersenResult result(prog);
  ConstraintGraph &g = result.graph;
  std::vector<PendingCall> calls;
  buildFiConstraints(prog, g, calls);

  FiHooks hooks(prog, g, calls);
  WaveSolver solver(g, opts, hooks);
  hooks.solver = &solver;
  result.stats = solver.solve();
  result.callBindings = std::move(hooks.bindings);
  return result;
}

} // namespace fspta
