#include "fspta/Cfg.hpp"
#include "fspta/Common.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace fspta {

void Cfg::addEdge(LabelId from, LabelId to) {
  uint64_t key = (uint64_t(from) << 32) | to;
  if (!edgeSet_.insert(key).second)
    return;
  succ[from].push_back(to);
  pred[to].push_back(from);
}

bool Cfg::addCallBinding(const Program &p, LabelId site, FuncId callee) {
  (void)p;
  bool changed = false;
  if (entry[callee] != kInvalidId) {
    if (!hasEdge(site, entry[callee])) {
      addEdge(site, entry[callee]);
      callEdges.emplace_back(site, entry[callee]);
      changed = true;
    }
    for (LabelId ex : exits[callee]) {
      if (!hasEdge(ex, site)) {
        addEdge(ex, site);
        retEdges.emplace_back(ex, site);
        changed = true;
      }
    }
  }
  return changed;
}

namespace {

// Marks labels lying on an intra-procedural cycle. Iterative Tarjan over
// one function's labels; an SCC of size >= 2 or a self-edge is a loop.
void markLoops(const std::vector<LabelId> &labels,
               const std::vector<std::vector<LabelId>> &intraSucc,
               std::vector<bool> &inLoop) {
  std::map<LabelId, uint32_t> index, low;
  std::vector<LabelId> stack;
  std::map<LabelId, bool> onStack;
  uint32_t counter = 0;

  struct Frame {
    LabelId v;
    size_t child;
  };
  for (LabelId root : labels) {
    if (index.count(root))
      continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    onStack[root] = true;
    while (!frames.empty()) {
      Frame &fr = frames.back();
      const auto &ss = intraSucc[fr.v];
      if (fr.child < ss.size()) {
        LabelId w = ss[fr.child++];
        if (!index.count(w)) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          onStack[w] = true;
          frames.push_back({w, 0});
        } else if (onStack[w]) {
          low[fr.v] = std::min(low[fr.v], index[w]);
        }
      } else {
        LabelId v = fr.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          std::vector<LabelId> scc;
          for (;;) {
            LabelId w = stack.back();
            stack.pop_back();
            onStack[w] = false;
            scc.push_back(w);
            if (w == v)
              break;
          }
          bool selfEdge =
              std::find(intraSucc[v].begin(), intraSucc[v].end(), v) !=
              intraSucc[v].end();
          if (scc.size() >= 2 || selfEdge)
            for (LabelId w : scc)
              inLoop[w] = true;
        }
      }
    }
  }
}

} // namespace

Cfg buildCfg(Program &prog) {
  Cfg cfg;
  size_t n = prog.numLabels();
  cfg.succ.resize(n);
  cfg.pred.resize(n);
  cfg.inLoop.assign(n, false);
  cfg.entry.assign(prog.funcs.size(), kInvalidId);
  cfg.exits.resize(prog.funcs.size());

  std::vector<std::vector<LabelId>> intraSucc(n);

  for (FuncId fi = 0; fi < prog.funcs.size(); ++fi) {
    const Function &fn = prog.funcs[fi];
    if (fn.stmts.empty())
      continue;
    cfg.entry[fi] = fn.stmts.front().label;
    for (size_t i = 0; i < fn.stmts.size(); ++i) {
      const Statement &s = fn.stmts[i];
      auto intra = [&](LabelId to) {
        if (!cfg.hasEdge(s.label, to)) {
          cfg.addEdge(s.label, to);
          cfg.intraEdges.emplace_back(s.label, to);
        }
        intraSucc[s.label].push_back(to);
      };
      switch (s.op) {
      case OpKind::Goto:
        intra(s.target);
        break;
      case OpKind::Br:
        intra(s.target);
        intra(s.target2);
        break;
      case OpKind::Ret:
        cfg.exits[fi].push_back(s.label);
        break;
      default:
        if (i + 1 < fn.stmts.size())
          intra(fn.stmts[i + 1].label);
        else
          cfg.exits[fi].push_back(s.label); // falls off the end
        break;
      }
    }
  }

  // loop marking precedes summary finalization and direct-call wiring
  for (FuncId fi = 0; fi < prog.funcs.size(); ++fi) {
    std::vector<LabelId> labels;
    for (const Statement &s : prog.funcs[fi].stmts)
      labels.push_back(s.label);
    markLoops(labels, intraSucc, cfg.inLoop);
  }

  // summary(o) = keyword | several Addr sites | Addr site on a cycle
  std::map<VarId, uint32_t> addrSites;
  for (const Function &fn : prog.funcs) {
    for (const Statement &s : fn.stmts) {
      if (s.op != OpKind::Addr)
        continue;
      Variable &obj = prog.vars[s.obj];
      if (s.summaryKeyword)
        obj.summary = true;
      if (obj.isFunctionObj())
        continue; // implicitly one location however often its address is taken
      addrSites[s.obj]++;
      if (addrSites[s.obj] > 1 || cfg.inLoop[s.label])
        obj.summary = true;
    }
  }

  for (const Function &fn : prog.funcs) {
    for (const Statement &s : fn.stmts) {
      if (s.op == OpKind::Call && !s.isIndirectCall())
        cfg.addCallBinding(prog, s.label, s.callee);
    }
  }

  // unreachable labels are legal but usually a fixture bug; warn once each
  for (FuncId fi = 0; fi < prog.funcs.size(); ++fi) {
    if (cfg.entry[fi] == kInvalidId)
      continue;
    std::set<LabelId> seen{cfg.entry[fi]};
    std::vector<LabelId> work{cfg.entry[fi]};
    while (!work.empty()) {
      LabelId l = work.back();
      work.pop_back();
      for (LabelId t : intraSucc[l])
        if (seen.insert(t).second)
          work.push_back(t);
    }
    for (const Statement &s : prog.funcs[fi].stmts)
      if (!seen.count(s.label))
        log::info("unreachable label '" + prog.labelName(s.label) + "' in '" +
                  prog.funcs[fi].name + "'");
  }

  return cfg;
}

} // namespace fspta
