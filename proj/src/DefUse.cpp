#include "fspta/DefUse.hpp"

#include <algorithm>

namespace fspta {

DefUseInfo computeDefUse(const Program &prog, const Cfg &cfg,
                         const AndersenResult &fi) {
  DefUseInfo du;
  const size_t n = prog.numLabels();
  du.mayDef.resize(n);
  du.mayUse.resize(n);
  for (LabelId l = 0; l < n; ++l) {
    const Statement &s = prog.stmtOf(l);
    if (s.op == OpKind::Store)
      du.mayDef[l] = fi.pts(s.ptr).ids();
    else if (s.op == OpKind::Load)
      du.mayUse[l] = fi.pts(s.ptr).ids();
  }

  auto hits = [](const std::vector<VarId> &v, VarId o) {
    return std::binary_search(v.begin(), v.end(), o);
  };

  // One forward reach per (def label, object), reusing the stamp buffer.
  // The walk stops at labels that redefine the object but still records
  // them; the def label itself is only reachable through a cycle.
  std::vector<uint32_t> stamp(n, 0);
  uint32_t cur = 0;
  std::vector<LabelId> queue;
  for (LabelId d = 0; d < n; ++d) {
    for (VarId o : du.mayDef[d]) {
      ++cur;
      queue.clear();
      for (LabelId s : cfg.succ[d]) {
        if (stamp[s] != cur) {
          stamp[s] = cur;
          queue.push_back(s);
        }
      }
      for (size_t i = 0; i < queue.size(); ++i) {
        LabelId m = queue[i];
        bool defs = hits(du.mayDef[m], o);
        if (defs || hits(du.mayUse[m], o))
          du.edges.push_back(DefUseInfo::Edge{d, m, o});
        if (defs)
          continue;
        for (LabelId s : cfg.succ[m]) {
          if (stamp[s] != cur) {
            stamp[s] = cur;
            queue.push_back(s);
          }
        }
      }
    }
  }
  std::sort(du.edges.begin(), du.edges.end());
  return du;
}

} // namespace fspta
