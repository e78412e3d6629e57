#include "fspta/ConstraintGraph.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <sstream>

namespace fspta {

namespace {

bool containsAll(const PointsToSet &big, const PointsToSet &small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

} // namespace

NodeId ConstraintGraph::ensureNode(VarId v) {
  if (versionBase_ != kInvalidId && v >= versionBase_)
    throw GraphError("base node id collides with version range");
  if (v >= nodes_.size()) {
    size_t old = nodes_.size();
    nodes_.resize(v + 1);
    for (size_t i = old; i < nodes_.size(); ++i) {
      nodes_[i].base = static_cast<VarId>(i);
      nodes_[i].rep = static_cast<NodeId>(i);
      nodes_[i].objectNode = prog_->isObject(static_cast<VarId>(i));
    }
  }
  return v;
}

NodeId ConstraintGraph::addVersionNode(VarId baseObj, LabelId at) {
  if (versionBase_ == kInvalidId) {
    for (VarId v = 0; v < prog_->vars.size(); ++v)
      ensureNode(v);
    versionBase_ = static_cast<NodeId>(nodes_.size());
  }
  NodeInfo info;
  info.base = baseObj;
  info.versionAt = at;
  info.objectNode = true;
  info.rep = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(info));
  return nodes_.back().rep;
}

NodeId ConstraintGraph::rep(NodeId n) {
  NodeId r = n;
  while (nodes_[r].rep != r)
    r = nodes_[r].rep;
  while (nodes_[n].rep != r) {
    NodeId next = nodes_[n].rep;
    nodes_[n].rep = r;
    n = next;
  }
  return r;
}

NodeId ConstraintGraph::findRep(NodeId n) const {
  while (nodes_[n].rep != n)
    n = nodes_[n].rep;
  return n;
}

void ConstraintGraph::mergeInto(NodeId from, NodeId into) {
  assert(rep(from) == from && rep(into) == into && from != into);
  // Smallest id stays representative so merge order never shows in output.
  NodeId keep = std::min(from, into);
  NodeId lose = std::max(from, into);
  nodes_[lose].rep = keep;
  NodeInfo &k = nodes_[keep];
  NodeInfo &l = nodes_[lose];
  k.pts.unionWith(l.pts);
  k.pending = k.pts; // re-push everything once; unions are idempotent
  k.noFold = k.noFold || l.noFold;
  k.objectNode = k.objectNode || l.objectNode;
  // killActivated stays on the original version node: activation and
  // strong-update reporting key on version identity, not on classes.
  l.pts.clear();
  l.pending.clear();
}

bool ConstraintGraph::dedupe(uint8_t kind, uint32_t a, uint32_t b,
                             uint32_t c) {
  return edgeKeys_.insert(EdgeKey{kind, a, b, c}).second;
}

bool ConstraintGraph::addAddrEdge(NodeId obj, NodeId dst) {
  if (!nodes_[obj].objectNode || nodes_[dst].objectNode)
    throw GraphError("Addr edge endpoints must be object -> top-level");
  if (!dedupe(0, obj, dst, 0))
    return false;
  addrEdges.emplace_back(obj, dst);
  return true;
}

bool ConstraintGraph::addCopyEdge(NodeId src, NodeId dst, bool killable,
                                  bool active) {
  assert(killable || active); // only killable edges may start inactive
  if (!dedupe(1, src, dst, 0))
    return false;
  copyEdges.push_back(CopyEdge{src, dst, killable, active});
  if (killable) {
    if (dst >= killableIn_.size())
      killableIn_.resize(dst + 1);
    killableIn_[dst].push_back(static_cast<uint32_t>(copyEdges.size() - 1));
  }
  return true;
}

bool ConstraintGraph::addGepEdge(NodeId src, NodeId dst, FieldId field) {
  if (!dedupe(2, src, dst, field))
    return false;
  gepEdges.push_back(GepEdge{src, dst, field});
  return true;
}

bool ConstraintGraph::addLoadEdge(NodeId ptr, NodeId dst, LabelId label) {
  if (!dedupe(3, ptr, dst, label))
    return false;
  loadEdges.push_back(MemEdge{ptr, dst, label, {}});
  return true;
}

bool ConstraintGraph::addStoreEdge(NodeId value, NodeId ptr, LabelId label) {
  if (!dedupe(4, value, ptr, label))
    return false;
  storeEdges.push_back(MemEdge{value, ptr, label, {}});
  return true;
}

const std::vector<uint32_t> &ConstraintGraph::killableIn(NodeId n) const {
  if (n >= killableIn_.size())
    return emptyKillable_;
  return killableIn_[n];
}

ConstraintGraph::SccResult ConstraintGraph::sccCollapse() {
  SccResult result;
  const size_t n = nodes_.size();

  std::vector<std::vector<NodeId>> adj(n);
  for (const CopyEdge &e : copyEdges) {
    if (!e.active || e.killable)
      continue;
    NodeId s = rep(e.src), d = rep(e.dst);
    if (s != d)
      adj[s].push_back(d);
  }

  // Iterative Tarjan over current representatives.
  constexpr uint32_t kUnvisited = 0xffffffffu;
  std::vector<uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> onStack(n, false);
  std::vector<NodeId> stack;
  std::vector<std::vector<NodeId>> sccs;
  uint32_t counter = 0;

  struct Frame {
    NodeId v;
    size_t edge;
  };
  std::vector<Frame> frames;

  for (NodeId root = 0; root < n; ++root) {
    if (rep(root) != root || index[root] != kUnvisited)
      continue;
    frames.push_back(Frame{root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    onStack[root] = true;
    while (!frames.empty()) {
      Frame &f = frames.back();
      if (f.edge < adj[f.v].size()) {
        NodeId w = adj[f.v][f.edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          onStack[w] = true;
          frames.push_back(Frame{w, 0});
        } else if (onStack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        NodeId v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          std::vector<NodeId> scc;
          for (;;) {
            NodeId w = stack.back();
            stack.pop_back();
            onStack[w] = false;
            scc.push_back(w);
            if (w == v)
              break;
          }
          if (scc.size() > 1)
            sccs.push_back(std::move(scc));
        }
      }
    }
  }

  for (auto &scc : sccs) {
    NodeId keep = *std::min_element(scc.begin(), scc.end());
    for (NodeId v : scc) {
      if (v == keep)
        continue;
      mergeInto(rep(v), rep(keep));
      ++result.merged;
    }
  }

  // Kahn order over the condensation, smallest representative first.
  std::vector<uint32_t> indeg(n, 0);
  std::vector<std::vector<NodeId>> cadj(n);
  std::unordered_set<uint64_t> seen;
  for (const CopyEdge &e : copyEdges) {
    if (!e.active || e.killable)
      continue;
    NodeId s = rep(e.src), d = rep(e.dst);
    if (s == d)
      continue;
    if (!seen.insert((static_cast<uint64_t>(s) << 32) | d).second)
      continue;
    cadj[s].push_back(d);
    ++indeg[d];
  }
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<NodeId>> ready;
  size_t repCount = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (rep(v) != v)
      continue;
    ++repCount;
    if (indeg[v] == 0)
      ready.push(v);
  }
  while (!ready.empty()) {
    NodeId v = ready.top();
    ready.pop();
    result.topo.push_back(v);
    for (NodeId w : cadj[v]) {
      if (--indeg[w] == 0)
        ready.push(w);
    }
  }
  assert(result.topo.size() == repCount);
  (void)repCount;
  return result;
}

uint32_t ConstraintGraph::foldCopyChains() {
  uint32_t total = 0;
  for (;;) {
    const size_t n = nodes_.size();
    std::vector<uint32_t> inCopy(n, 0), inOther(n, 0);
    std::vector<NodeId> soleSrc(n, kInvalidId);

    for (const CopyEdge &e : copyEdges) {
      NodeId s = rep(e.src), d = rep(e.dst);
      if (s == d)
        continue;
      if (e.killable) {
        // An inactive edge can still activate later; it always blocks.
        ++inOther[d];
        continue;
      }
      if (++inCopy[d] == 1)
        soleSrc[d] = e.src;
    }
    for (const auto &[obj, dst] : addrEdges) {
      (void)obj;
      ++inOther[rep(dst)];
    }
    for (const GepEdge &e : gepEdges) {
      // A self Gep keeps generating field members, so it blocks too.
      ++inOther[rep(e.dst)];
    }

    bool changed = false;
    for (NodeId v = 0; v < n; ++v) {
      if (rep(v) != v)
        continue;
      const NodeInfo &info = nodes_[v];
      if (info.noFold || (info.objectNode && !isVersion(v)))
        continue;
      if (inCopy[v] != 1 || inOther[v] != 0)
        continue;
      NodeId u = rep(soleSrc[v]);
      if (u == v)
        continue;
      mergeInto(u, v);
      ++total;
      changed = true;
    }
    if (!changed)
      break;
  }
  return total;
}

ConstraintGraph::Stats ConstraintGraph::countConstraints() const {
  Stats s;
  s.addr = addrEdges.size();
  s.copy = copyEdges.size();
  s.gep = gepEdges.size();
  s.load = loadEdges.size();
  s.store = storeEdges.size();
  s.nodes = nodes_.size();
  for (NodeId v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].versionAt != kInvalidId)
      ++s.versionedNodes;
    if (nodes_[v].rep == v && !nodes_[v].pts.empty())
      ++s.ptsets;
  }
  return s;
}

bool ConstraintGraph::checkCopyClosure() {
  for (const auto &[obj, dst] : addrEdges) {
    if (!node(rep(dst)).pts.contains(node(obj).base))
      return false;
  }
  for (const CopyEdge &e : copyEdges) {
    if (!e.active)
      continue;
    if (!containsAll(node(rep(e.dst)).pts, node(rep(e.src)).pts))
      return false;
  }
  for (const GepEdge &e : gepEdges) {
    const PointsToSet &src = node(rep(e.src)).pts;
    const PointsToSet &dst = node(rep(e.dst)).pts;
    for (NodeId o : src) {
      const Variable &ov = prog_->var(o);
      if (ov.isFunctionObj() || ov.isFieldObj())
        continue;
      VarId fld = prog_->findGepObject(o, e.field);
      if (fld != kInvalidId && !dst.contains(fld))
        return false;
    }
  }
  return true;
}

std::string ConstraintGraph::toDot() const {
  auto name = [this](NodeId v) {
    const NodeInfo &info = nodes_[v];
    if (info.versionAt != kInvalidId)
      return prog_->varName(info.base) + "@" + prog_->labelName(info.versionAt);
    return prog_->varName(info.base);
  };
  std::ostringstream os;
  os << "digraph consgraph {\n  rankdir=LR;\n";
  for (NodeId v = 0; v < nodes_.size(); ++v)
    os << "  n" << v << " [label=\"" << name(v) << "\"];\n";

  // nodes by id, edges lexicographic per kind
  auto sorted = [](auto edges, auto key) {
    std::sort(edges.begin(), edges.end(),
              [&key](const auto &a, const auto &b) { return key(a) < key(b); });
    return edges;
  };
  auto lbl = [this](LabelId l, const char *fallback) {
    return l == kInvalidId ? std::string(fallback) : prog_->labelName(l);
  };
  for (const auto &[obj, dst] : sorted(addrEdges, [](const auto &e) { return e; }))
    os << "  n" << obj << " -> n" << dst << " [style=dashed];\n";
  for (const CopyEdge &e : sorted(copyEdges, [](const CopyEdge &e) {
         return std::make_pair(e.src, e.dst);
       })) {
    os << "  n" << e.src << " -> n" << e.dst;
    if (e.killable)
      os << (e.active ? " [color=gray]" : " [color=gray style=dotted]");
    os << ";\n";
  }
  for (const GepEdge &e : sorted(gepEdges, [](const GepEdge &e) {
         return std::make_tuple(e.src, e.dst, e.field);
       }))
    os << "  n" << e.src << " -> n" << e.dst << " [label=\""
       << prog_->fieldNames[e.field] << "\" color=purple];\n";
  auto memKey = [](const MemEdge &e) {
    return std::make_tuple(e.src, e.dst, e.label);
  };
  for (const MemEdge &e : sorted(loadEdges, memKey))
    os << "  n" << e.src << " -> n" << e.dst << " [label=\""
       << lbl(e.label, "ld") << "\" color=blue];\n";
  for (const MemEdge &e : sorted(storeEdges, memKey))
    os << "  n" << e.src << " -> n" << e.dst << " [label=\""
       << lbl(e.label, "st") << "\" color=red];\n";
  os << "}\n";
  return os.str();
}

} // namespace fspta
