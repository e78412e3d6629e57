#include "fspta/DenseSolver.hpp"

#include <algorithm>

namespace fspta {

namespace {

const std::set<VarId> kEmptySet;

const std::set<VarId> &lookup(const DenseResult::ObjMap &m, VarId o) {
  auto it = m.find(o);
  return it == m.end() ? kEmptySet : it->second;
}

const std::set<VarId> &lookupTop(const std::map<VarId, std::set<VarId>> &m,
                                 VarId v) {
  auto it = m.find(v);
  return it == m.end() ? kEmptySet : it->second;
}

bool unionInto(std::set<VarId> &dst, const std::set<VarId> &src) {
  bool grew = false;
  for (VarId v : src)
    grew |= dst.insert(v).second;
  return grew;
}

void joinMaps(DenseResult::ObjMap &dst, const DenseResult::ObjMap &src) {
  for (const auto &[o, s] : src) {
    if (!s.empty())
      unionInto(dst[o], s);
  }
}

} // namespace

const std::set<VarId> &DenseResult::topOf(VarId v) const {
  return lookupTop(top, v);
}
const std::set<VarId> &DenseResult::inAt(LabelId l, VarId o) const {
  return lookup(in[l], o);
}
const std::set<VarId> &DenseResult::outAt(LabelId l, VarId o) const {
  return lookup(out[l], o);
}

DenseResult solveDense(Program &prog, const Cfg &baseCfg,
                       const AndersenResult &fi, const SolveOptions &opts) {
  DenseResult r;
  const size_t n = prog.numLabels();
  r.in.resize(n);
  r.out.resize(n);
  Cfg cfg = baseCfg;
  std::set<std::pair<LabelId, FuncId>> bound;
  uint64_t cap =
      opts.iterCap ? opts.iterCap : 10 * std::max<uint64_t>(1, n);

  bool changed = true;
  while (changed) {
    ++r.rounds;
    if (r.rounds > cap)
      throw SolverError("reference solver: no fixpoint after " +
                        std::to_string(cap) + " rounds");
    changed = false;
    for (const Function &f : prog.funcs) {
      for (const Statement &s : f.stmts) {
        LabelId l = s.label;
        DenseResult::ObjMap newIn;
        for (LabelId p : cfg.pred[l])
          joinMaps(newIn, r.out[p]);
        if (newIn != r.in[l]) {
          r.in[l] = newIn;
          changed = true;
        }
        DenseResult::ObjMap newOut = std::move(newIn);

        switch (s.op) {
        case OpKind::Addr:
          changed |= r.top[s.dst].insert(s.obj).second;
          break;
        case OpKind::Copy:
          changed |= unionInto(r.top[s.dst], lookupTop(r.top, s.src));
          break;
        case OpKind::Gep: {
          std::set<VarId> bases = lookupTop(r.top, s.src);
          for (VarId o : bases) {
            const Variable &ov = prog.var(o);
            if (ov.isFunctionObj() || ov.isFieldObj())
              continue;
            changed |= r.top[s.dst].insert(prog.gepObject(o, s.field)).second;
          }
          break;
        }
        case OpKind::Load: {
          // Loads read the state before the statement; newOut still equals
          // the freshly joined in-state here.
          std::set<VarId> ptrs = lookupTop(r.top, s.ptr);
          for (VarId o : ptrs)
            changed |= unionInto(r.top[s.dst], lookup(newOut, o));
          break;
        }
        case OpKind::Store: {
          // A store may only redefine what the pre-analysis says its
          // pointer can reach; everything else flows past untouched.
          std::set<VarId> p = lookupTop(r.top, s.ptr);
          bool strong = p.size() == 1 && !prog.var(*p.begin()).summary;
          for (VarId o : fi.pts(s.ptr)) {
            if (p.empty()) {
              newOut.erase(o); // dereference of nothing: chain blocked
            } else if (p.count(o)) {
              std::set<VarId> v = lookupTop(r.top, s.src);
              if (!strong)
                unionInto(v, lookup(r.in[l], o));
              if (v.empty())
                newOut.erase(o);
              else
                newOut[o] = std::move(v);
            }
          }
          break;
        }
        case OpKind::Call: {
          if (s.isIndirectCall()) {
            std::set<VarId> ptrs = lookupTop(r.top, s.ptr);
            for (VarId o : ptrs) {
              const Variable &ov = prog.var(o);
              if (!ov.isFunctionObj())
                continue;
              if (prog.funcs[ov.func].params.size() != s.args.size())
                continue;
              if (bound.insert({l, ov.func}).second) {
                r.callBindings.emplace_back(l, ov.func);
                cfg.addCallBinding(prog, l, ov.func);
                changed = true;
              }
            }
            for (const auto &[site, callee] : r.callBindings) {
              if (site != l)
                continue;
              const Function &fn = prog.funcs[callee];
              for (size_t i = 0; i < s.args.size(); ++i)
                changed |=
                    unionInto(r.top[fn.params[i]], lookupTop(r.top, s.args[i]));
              if (s.dst != kInvalidId)
                changed |=
                    unionInto(r.top[s.dst], lookupTop(r.top, fn.retVar));
            }
          } else {
            const Function &fn = prog.funcs[s.callee];
            for (size_t i = 0; i < s.args.size(); ++i)
              changed |=
                  unionInto(r.top[fn.params[i]], lookupTop(r.top, s.args[i]));
            if (s.dst != kInvalidId)
              changed |= unionInto(r.top[s.dst], lookupTop(r.top, fn.retVar));
          }
          break;
        }
        case OpKind::Ret:
          if (s.src != kInvalidId)
            changed |= unionInto(r.top[f.retVar], lookupTop(r.top, s.src));
          break;
        case OpKind::Goto:
        case OpKind::Br:
          break;
        }

        for (auto it = newOut.begin(); it != newOut.end();) {
          it = it->second.empty() ? newOut.erase(it) : std::next(it);
        }
        if (newOut != r.out[l]) {
          r.out[l] = std::move(newOut);
          changed = true;
        }
      }
    }
    for (auto it = r.top.begin(); it != r.top.end();) {
      it = it->second.empty() ? r.top.erase(it) : std::next(it);
    }
  }
  std::sort(r.callBindings.begin(), r.callBindings.end());
  return r;
}

} // namespace fspta
