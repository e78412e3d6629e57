#include "fspta/Wave.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace fspta {

WaveSolver::Outcome WaveSolver::solve() {
  Outcome out;
  seedAddr();
  const Program &prog = g_.prog();
  uint64_t cap = opts_.iterCap
                     ? opts_.iterCap
                     : 10 * std::max<uint64_t>(1, prog.numLabels());
  for (;;) {
    ++out.iterations;
    if (out.iterations > cap)
      throw SolverError("no fixpoint after " + std::to_string(cap) +
                        " iterations");
    changed_ = false;
    if (opts_.simplify) {
      auto scc = g_.sccCollapse();
      out.sccMerged += scc.merged;
      uint32_t folded = g_.foldCopyChains();
      out.folded += folded;
      topo_ = std::move(scc.topo);
      log::debug("iteration " + std::to_string(out.iterations) + ": merged " +
                 std::to_string(scc.merged) + " scc nodes, folded " +
                 std::to_string(folded));
    }
    stage1();
    stage2();
    if (hooks_.onCallGraph())
      changed_ = true;
    if (!changed_)
      break;
  }
  log::info("fixpoint after " + std::to_string(out.iterations) +
            " iterations");
  return out;
}

void WaveSolver::seedAddr() {
  for (const auto &[obj, dst] : g_.addrEdges) {
    NodeId d = g_.rep(dst);
    VarId member = g_.node(obj).base;
    if (g_.node(d).pts.insert(member))
      g_.node(d).pending.insert(member);
  }
}

void WaveSolver::stage1() {
  const size_t n = g_.numNodes();
  // Reps are stable for the whole stage: nothing below merges nodes.
  std::vector<std::vector<uint32_t>> copyAdj(n), gepAdj(n);
  for (uint32_t i = 0; i < g_.copyEdges.size(); ++i) {
    const auto &e = g_.copyEdges[i];
    if (e.active)
      copyAdj[g_.rep(e.src)].push_back(i);
  }
  for (uint32_t i = 0; i < g_.gepEdges.size(); ++i)
    gepAdj[g_.rep(g_.gepEdges[i].src)].push_back(i);

  std::deque<NodeId> work;
  std::vector<char> inQ(n, 0);
  auto push = [&](NodeId r) {
    if (!inQ[r]) {
      inQ[r] = 1;
      work.push_back(r);
    }
  };
  // Seed in topological position when simplification provided one, then
  // sweep for anything it missed (folds may have rearranged reps).
  for (NodeId t : topo_) {
    NodeId r = g_.rep(t);
    if (!g_.node(r).pending.empty())
      push(r);
  }
  for (NodeId v = 0; v < n; ++v) {
    if (g_.rep(v) == v && !g_.node(v).pending.empty())
      push(v);
  }

  PointsToSet fresh;
  while (!work.empty()) {
    NodeId u = work.front();
    work.pop_front();
    inQ[u] = 0;
    PointsToSet diff = std::move(g_.node(u).pending);
    g_.node(u).pending.clear();
    if (diff.empty())
      continue;
    for (uint32_t i : copyAdj[u]) {
      NodeId d = g_.rep(g_.copyEdges[i].dst);
      if (d == u)
        continue;
      fresh.clear();
      if (g_.node(d).pts.unionWith(diff, fresh)) {
        g_.node(d).pending.unionWith(fresh);
        changed_ = true;
        push(d);
      }
    }
    for (uint32_t i : gepAdj[u]) {
      const auto &e = g_.gepEdges[i];
      NodeId d = g_.rep(e.dst);
      for (NodeId o : diff) {
        const Variable &ov = g_.prog().var(o);
        if (ov.isFunctionObj() || ov.isFieldObj()) {
          warnBadGepBase(o, e.field);
          continue;
        }
        VarId t = hooks_.gepTarget(o, e.field);
        if (t == kInvalidId)
          continue;
        if (g_.node(d).pts.insert(t)) {
          g_.node(d).pending.insert(t);
          changed_ = true;
          push(d);
        }
      }
    }
  }
}

void WaveSolver::stage2() {
  PointsToSet fresh;
  for (auto &e : g_.loadEdges) {
    const PointsToSet &p = g_.node(g_.rep(e.src)).pts;
    fresh.clear();
    e.seen.unionWith(p, fresh);
    if (!fresh.empty())
      hooks_.onLoadDiff(e, fresh);
  }
  for (auto &e : g_.storeEdges) {
    const PointsToSet &p = g_.node(g_.rep(e.dst)).pts;
    fresh.clear();
    e.seen.unionWith(p, fresh);
    if (!fresh.empty())
      hooks_.onStoreDiff(e, fresh);
  }
}

bool WaveSolver::insertSeededCopy(NodeId src, NodeId dst, bool killable,
                                  bool active) {
  if (!g_.addCopyEdge(src, dst, killable, active))
    return false;
  changed_ = true;
  if (active)
    seedAlong(src, dst);
  return true;
}

void WaveSolver::activateEdge(uint32_t copyIdx) {
  auto &e = g_.copyEdges[copyIdx];
  if (e.active)
    return;
  e.active = true;
  changed_ = true;
  seedAlong(e.src, e.dst);
}

void WaveSolver::seedAlong(NodeId src, NodeId dst) {
  NodeId s = g_.rep(src), d = g_.rep(dst);
  if (s == d)
    return;
  PointsToSet fresh;
  if (g_.node(d).pts.unionWith(g_.node(s).pts, fresh)) {
    g_.node(d).pending.unionWith(fresh);
    changed_ = true;
  }
}

void WaveSolver::warnBadGepBase(VarId o, FieldId field) {
  uint64_t key = (static_cast<uint64_t>(o) << 32) | field;
  if (!gepWarned_.insert(key).second)
    return;
  const Variable &ov = g_.prog().var(o);
  log::info(std::string("field access through ") +
            (ov.isFunctionObj() ? "function object '" : "field object '") +
            ov.name + "' ignored");
}

} // namespace fspta
