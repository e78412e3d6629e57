#include "fspta/FsSolver.hpp"

#include <algorithm>
#include <cassert>

namespace fspta {

namespace {

// Store/Load semantics against versions. The kill discipline is monotone:
// every killable edge starts inactive and the only transition is a
// permanent activation, either because the pointer resolves to several
// objects (weak), to a summary object, or to something other than the
// version's object (plain forwarding). A store whose pointer set stays
// empty never activates anything: dereferencing nothing blocks the chain
// on both sides, and the reference solver mirrors that.
class FsHooks : public WaveSolver::Hooks {
public:
  FsHooks(const Program &prog, FsGraph &fg, const AndersenResult &fi,
          Cfg cfg, DefUseInfo du)
      : prog_(prog), fg_(fg), fi_(fi), cfg_(std::move(cfg)),
        du_(std::move(du)) {}

  WaveSolver *solver = nullptr;
  std::vector<std::pair<LabelId, FuncId>> bindings;
  uint64_t fallbacks = 0;

  DefUseInfo takeDefUse() { return std::move(du_); }

  void onLoadDiff(ConstraintGraph::MemEdge &e,
                  const PointsToSet &newObjs) override {
    ConstraintGraph &g = fg_.graph;
    for (NodeId o : newObjs) {
      NodeId v = fg_.version(o, e.label);
      if (v == kInvalidId) {
        fallback(o, e.label);
        solver->insertSeededCopy(g.ensureNode(o), e.dst);
        continue;
      }
      solver->insertSeededCopy(v, e.dst);
    }
  }

  void onStoreDiff(ConstraintGraph::MemEdge &e,
                   const PointsToSet &) override {
    ConstraintGraph &g = fg_.graph;
    // Copy: seeding below can feed the pointer's own set.
    PointsToSet p = g.node(g.rep(e.dst)).pts;
    for (NodeId o : p) {
      NodeId v = fg_.version(o, e.label);
      if (v == kInvalidId) {
        fallback(o, e.label);
        solver->insertSeededCopy(e.src, g.ensureNode(o));
        continue;
      }
      solver->insertSeededCopy(e.src, v);
    }
    bool strong = p.size() == 1 && !prog_.var(*p.begin()).summary &&
                  !solver->options().disableSu;
    for (NodeId v : fg_.versionsAt[e.label]) {
      if (strong && g.node(v).base == *p.begin())
        continue; // kill stands; in-edges stay inactive
      activateKills(v);
    }
  }

  VarId gepTarget(VarId o, FieldId field) override {
    VarId t = prog_.findGepObject(o, field);
    if (t == kInvalidId) {
      // flow-sensitive sets are subsets of the pre-analysis, which interned
      // every reachable field object already
      assert(false && "field object missing from pre-analysis");
      ++fallbacks;
    }
    return t;
  }

  bool onCallGraph() override {
    ConstraintGraph &g = fg_.graph;
    bool bound = false, cfgGrew = false;
    for (PendingCall &pc : fg_.calls) {
      PointsToSet p = g.node(g.rep(pc.ptrNode)).pts;
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
                                   g.ensureNode(fn.params[i]));
        if (pc.dstNode != kInvalidId)
          solver->insertSeededCopy(g.ensureNode(fn.retVar), pc.dstNode);
        bindings.emplace_back(pc.site, ov.func);
        bound = true;
        if (cfg_.addCallBinding(prog_, pc.site, ov.func))
          cfgGrew = true;
      }
    }
    if (cfgGrew)
      extendChains();
    return bound || cfgGrew;
  }

private:
  // New cfg edges only add def-use chains, never remove them; wire the
  // difference. A new killable edge into a version that already went weak
  // must arrive active, or it would never be activated again.
  void extendChains() {
    ConstraintGraph &g = fg_.graph;
    DefUseInfo fresh = computeDefUse(prog_, cfg_, fi_);
    std::vector<DefUseInfo::Edge> added;
    std::set_difference(fresh.edges.begin(), fresh.edges.end(),
                        du_.edges.begin(), du_.edges.end(),
                        std::back_inserter(added));
    for (const DefUseInfo::Edge &e : added) {
      NodeId vd = fg_.version(e.obj, e.def);
      NodeId vu = fg_.version(e.obj, e.use);
      if (vd == kInvalidId || vu == kInvalidId)
        throw GraphError("def-use edge for '" + prog_.varName(e.obj) +
                         "' references a label without a version");
      bool killable = prog_.stmtOf(e.use).op == OpKind::Store;
      bool active = !killable || g.node(vu).killActivated;
      solver->insertSeededCopy(vd, vu, killable, active);
    }
    du_ = std::move(fresh);
  }

  void activateKills(NodeId version) {
    ConstraintGraph &g = fg_.graph;
    if (g.node(version).killActivated)
      return;
    g.node(version).killActivated = true;
    for (uint32_t idx : g.killableIn(version))
      solver->activateEdge(idx);
  }

  void fallback(VarId o, LabelId l) {
    ++fallbacks;
    log::info("no version of '" + prog_.varName(o) + "' at '" +
              prog_.labelName(l) + "', falling back to the base object");
    assert(false && "unversioned may-pair");
  }

  const Program &prog_;
  FsGraph &fg_;
  const AndersenResult &fi_;
  Cfg cfg_;
  DefUseInfo du_;
};

std::vector<LabelId> computeSuLabels(const Program &prog, FsGraph &fg,
                                     const SolveOptions &opts) {
  std::vector<LabelId> su;
  if (opts.disableSu)
    return su;
  ConstraintGraph &g = fg.graph;
  for (const auto &e : g.storeEdges) {
    const PointsToSet &p = g.node(g.rep(e.dst)).pts;
    if (p.size() != 1)
      continue;
    VarId o = *p.begin();
    if (prog.var(o).summary)
      continue;
    NodeId v = fg.version(o, e.label);
    if (v == kInvalidId)
      continue;
    // Only count kills that sever something: a first store to an object
    // has no incoming chain and updates nothing.
    if (g.killableIn(v).empty())
      continue;
    assert(!g.node(v).killActivated);
    su.push_back(e.label);
  }
  std::sort(su.begin(), su.end());
  return su;
}

} // namespace

const PointsToSet &FsResult::ptsTop(VarId v) const {
  static const PointsToSet empty;
  if (v >= fsg.graph.numNodes())
    return empty;
  return fsg.graph.node(fsg.graph.findRep(v)).pts;
}

const PointsToSet &FsResult::ptsAfter(VarId o, LabelId l) const {
  NodeId v = fsg.version(o, l);
  if (v == kInvalidId)
    throw QueryError("no flow-sensitive state for '" +
                     fsg.graph.prog().varName(o) + "' at '" +
                     fsg.graph.prog().labelName(l) + "'");
  return fsg.graph.node(fsg.graph.findRep(v)).pts;
}

PointsToSet FsResult::ptsBefore(VarId o, LabelId l) const {
  if (fsg.version(o, l) == kInvalidId)
    throw QueryError("no flow-sensitive state for '" +
                     fsg.graph.prog().varName(o) + "' at '" +
                     fsg.graph.prog().labelName(l) + "'");
  PointsToSet r;
  for (const DefUseInfo::Edge &e : defuse.edges) {
    if (e.use == l && e.obj == o)
      r.unionWith(ptsAfter(o, e.def));
  }
  return r;
}

FsResult solveFs(const Program &prog, const Cfg &baseCfg,
                 const AndersenResult &fi, const SolveOptions &opts) {
  DefUseInfo du = computeDefUse(prog, baseCfg, fi);
  FsResult result(buildFsGraph(prog, du));
  FsHooks hooks(prog, result.fsg, fi, baseCfg, std::move(du));
  WaveSolver solver(result.fsg.graph, opts, hooks);
  hooks.solver = &solver;
  result.stats = solver.solve();
  result.suLabels = computeSuLabels(prog, result.fsg, opts);
  result.callBindings = std::move(hooks.bindings);
  result.defuse = hooks.takeDefUse();
  result.fallbacks = hooks.fallbacks;
  return result;
}

} // namespace fspta
