#include "fspta/Emit.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>

namespace fspta {

using nlohmann::json;

namespace {

json sortedNames(const Program &prog, const PointsToSet &s) {
  std::vector<std::string> names;
  names.reserve(s.size());
  for (VarId o : s)
    names.push_back(prog.varName(o));
  std::sort(names.begin(), names.end());
  return json(names);
}

json sortedNames(const Program &prog, const std::set<VarId> &s) {
  std::vector<std::string> names;
  names.reserve(s.size());
  for (VarId o : s)
    names.push_back(prog.varName(o));
  std::sort(names.begin(), names.end());
  return json(names);
}

std::string versionKey(const Program &prog, const ConstraintGraph &g,
                       NodeId v) {
  return prog.varName(g.node(v).base) + "@" +
         prog.labelName(g.node(v).versionAt);
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

void statsCommon(std::ostringstream &out, const ConstraintGraph::Stats &s) {
  out << "nodes=" << s.nodes << "\n"
      << "versioned_nodes=" << s.versionedNodes << "\n"
      << "addr_edges=" << s.addr << "\n"
      << "copy_edges=" << s.copy << "\n"
      << "gep_edges=" << s.gep << "\n"
      << "load_edges=" << s.load << "\n"
      << "store_edges=" << s.store << "\n"
      << "edges=" << s.edges() << "\n"
      << "ptsets=" << s.ptsets << "\n";
}

} // namespace

std::string emitFiJson(const Program &prog, const AndersenResult &fi) {
  json j;
  j["mode"] = "fi";
  j["pts"] = json::object();
  for (VarId v = 0; v < prog.vars.size(); ++v) {
    const PointsToSet &p = fi.pts(v);
    if (!p.empty())
      j["pts"][prog.varName(v)] = sortedNames(prog, p);
  }
  return dump(j);
}

std::string emitFsJson(const Program &prog, const FsResult &fs) {
  const ConstraintGraph &g = fs.fsg.graph;
  json j;
  j["mode"] = "fs";
  j["pts"] = json::object();
  for (VarId v = 0; v < prog.vars.size(); ++v) {
    if (prog.var(v).kind != VarKind::TopLevel)
      continue;
    const PointsToSet &p = g.node(g.findRep(v)).pts;
    if (!p.empty())
      j["pts"][prog.varName(v)] = sortedNames(prog, p);
  }
  j["versions"] = json::object();
  if (g.versionBase() != kInvalidId) {
    for (NodeId v = g.versionBase(); v < g.numNodes(); ++v)
      j["versions"][versionKey(prog, g, v)] =
          sortedNames(prog, g.node(g.findRep(v)).pts);
  }
  std::vector<std::string> su;
  for (LabelId l : fs.suLabels)
    su.push_back(prog.labelName(l));
  std::sort(su.begin(), su.end());
  j["su_labels"] = json(su);
  j["iterations"] = fs.stats.iterations;
  j["fallbacks"] = fs.fallbacks;
  return dump(j);
}

std::string emitDenseJson(const Program &prog, const DenseResult &dense) {
  json j;
  j["mode"] = "dense";
  j["pts"] = json::object();
  for (const auto &[v, s] : dense.top)
    j["pts"][prog.varName(v)] = sortedNames(prog, s);
  json in = json::object(), out = json::object();
  for (LabelId l = 0; l < dense.in.size(); ++l) {
    if (!dense.in[l].empty()) {
      json &slot = in[prog.labelName(l)] = json::object();
      for (const auto &[o, s] : dense.in[l])
        slot[prog.varName(o)] = sortedNames(prog, s);
    }
    if (!dense.out[l].empty()) {
      json &slot = out[prog.labelName(l)] = json::object();
      for (const auto &[o, s] : dense.out[l])
        slot[prog.varName(o)] = sortedNames(prog, s);
    }
  }
  j["in"] = std::move(in);
  j["out"] = std::move(out);
  j["iterations"] = dense.rounds;
  return dump(j);
}

std::string emitProgramJson(const Program &prog) {
  json funcs = json::array();
  for (const Function &f : prog.funcs) {
    json jf;
    jf["name"] = f.name;
    json params = json::array();
    for (VarId p : f.params)
      params.push_back(prog.varName(p));
    jf["params"] = std::move(params);
    json stmts = json::array();
    for (const Statement &s : f.stmts) {
      json js;
      js["label"] = prog.labelName(s.label);
      js["op"] = opName(s.op);
      json ops = json::array();
      auto var = [&](VarId v) { ops.push_back(prog.varName(v)); };
      switch (s.op) {
      case OpKind::Addr:
        var(s.dst);
        var(s.obj);
        if (s.summaryKeyword)
          ops.push_back("summary");
        break;
      case OpKind::Copy:
        var(s.dst);
        var(s.src);
        break;
      case OpKind::Gep:
        var(s.dst);
        var(s.src);
        ops.push_back(prog.fieldNames[s.field]);
        break;
      case OpKind::Load:
        var(s.dst);
        var(s.ptr);
        break;
      case OpKind::Store:
        var(s.ptr);
        var(s.src);
        break;
      case OpKind::Call:
        ops.push_back(s.dst != kInvalidId ? prog.varName(s.dst) : "");
        ops.push_back(s.isIndirectCall() ? "*" + prog.varName(s.ptr)
                                         : prog.funcs[s.callee].name);
        for (VarId a : s.args)
          var(a);
        break;
      case OpKind::Ret:
        if (s.src != kInvalidId)
          var(s.src);
        break;
      case OpKind::Goto:
        ops.push_back(prog.labelName(s.target));
        break;
      case OpKind::Br:
        ops.push_back(prog.labelName(s.target));
        ops.push_back(prog.labelName(s.target2));
        break;
      }
      js["operands"] = std::move(ops);
      stmts.push_back(std::move(js));
    }
    jf["stmts"] = std::move(stmts);
    funcs.push_back(std::move(jf));
  }
  json j;
  j["functions"] = std::move(funcs);
  return dump(j);
}

std::string emitDefUseText(const Program &prog, const DefUseInfo &du) {
  std::vector<std::string> lines;
  for (const DefUseInfo::Edge &e : du.edges)
    lines.push_back("def " + prog.labelName(e.def) + " -> use " +
                    prog.labelName(e.use) + " [" + prog.varName(e.obj) + "]");
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string &l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

std::string emitFiStats(const Program &prog, const AndersenResult &fi) {
  std::ostringstream out;
  out << "mode=fi\n";
  statsCommon(out, fi.graph.countConstraints());
  out << "iterations=" << fi.stats.iterations << "\n"
      << "call_bindings=" << fi.callBindings.size() << "\n"
      << "digest=" << digestHex(emitFiJson(prog, fi)) << "\n";
  return out.str();
}

std::string emitFsStats(const Program &prog, const FsResult &fs) {
  std::ostringstream out;
  out << "mode=fs\n";
  statsCommon(out, fs.fsg.graph.countConstraints());
  out << "iterations=" << fs.stats.iterations << "\n"
      << "fallbacks=" << fs.fallbacks << "\n"
      << "su_labels=" << fs.suLabels.size() << "\n"
      << "call_bindings=" << fs.callBindings.size() << "\n"
      << "digest=" << digestHex(emitFsJson(prog, fs)) << "\n";
  return out.str();
}

std::string emitDenseStats(const Program &prog, const DenseResult &dense) {
  std::ostringstream out;
  out << "mode=dense\n"
      << "labels=" << dense.in.size() << "\n"
      << "rounds=" << dense.rounds << "\n"
      << "ptsets=" << countDensePtSets(dense) << "\n"
      << "call_bindings=" << dense.callBindings.size() << "\n"
      << "digest=" << digestHex(emitDenseJson(prog, dense)) << "\n";
  return out.str();
}

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digestHex(std::string_view canonicalJson) {
  static const char *hex = "0123456789abcdef";
  uint64_t h = fnv1a(canonicalJson);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4)
    out[i] = hex[h & 0xf];
  return out;
}

uint64_t countFsPtSets(const FsResult &fs) {
  const ConstraintGraph &g = fs.fsg.graph;
  uint64_t n = 0;
  for (NodeId i = 0; i < g.numNodes(); ++i)
    if (g.findRep(i) == i && !g.node(i).pts.empty())
      ++n;
  return n;
}

uint64_t countDensePtSets(const DenseResult &dense) {
  uint64_t n = dense.top.size();
  for (const auto &m : dense.out)
    for (const auto &[o, s] : m)
      n += !s.empty();
  return n;
}

} // namespace fspta
