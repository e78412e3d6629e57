#include "fspta/Driver.hpp"

#include "fspta/DefUse.hpp"
#include "fspta/Emit.hpp"
#include "fspta/Parser.hpp"
#include "fspta/ProgGen.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace fspta {

namespace {

using Clock = std::chrono::steady_clock;

double msSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError(0, 0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int writeOut(const std::string &outPath, const std::string &content) {
  if (outPath.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return kExitOk;
  }
  std::ofstream out(outPath, std::ios::binary);
  out << content;
  if (!out) {
    std::fprintf(stderr, "error: cannot write '%s'\n", outPath.c_str());
    return kExitSolver;
  }
  return kExitOk;
}

struct Pipeline {
  Program prog;
  Cfg cfg;
};

Pipeline frontend(const std::string &text, bool lenient) {
  Pipeline p;
  ParseOptions popts;
  popts.lenient = lenient;
  p.prog = parseProgram(text, popts);
  p.cfg = buildCfg(p.prog);
  return p;
}

std::string fmtSet(const Program &prog, const std::vector<VarId> &ids) {
  std::vector<std::string> names;
  names.reserve(ids.size());
  for (VarId v : ids)
    names.push_back(prog.varName(v));
  std::sort(names.begin(), names.end());
  std::string out = "{";
  for (size_t i = 0; i < names.size(); ++i) {
    if (i)
      out += ", ";
    out += names[i];
  }
  return out + "}";
}

std::string fmtSet(const Program &prog, const PointsToSet &s) {
  return fmtSet(prog, s.ids());
}

std::string fmtSet(const Program &prog, const std::set<VarId> &s) {
  return fmtSet(prog, std::vector<VarId>(s.begin(), s.end()));
}

bool sameSet(const PointsToSet &a, const std::set<VarId> &b) {
  if (a.size() != b.size())
    return false;
  auto it = b.begin();
  for (VarId v : a) {
    if (v != *it)
      return false;
    ++it;
  }
  return true;
}

struct DiffReport {
  bool ok = true;
  std::string message; // first difference, dense side is "expected"
  uint64_t topCompared = 0, pairsCompared = 0;
};

DiffReport compareFsDense(const Program &prog, const FsResult &fs,
                          const DenseResult &dense) {
  DiffReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.message = std::move(msg);
  };

  for (VarId v = 0; v < prog.vars.size(); ++v) {
    if (prog.var(v).kind != VarKind::TopLevel)
      continue;
    ++rep.topCompared;
    const PointsToSet &got = fs.ptsTop(v);
    const std::set<VarId> &want = dense.topOf(v);
    if (!sameSet(got, want)) {
      fail("pts(" + prog.varName(v) + "): expected " + fmtSet(prog, want) +
           ", got " + fmtSet(prog, got));
      return rep;
    }
  }

  const ConstraintGraph &g = fs.fsg.graph;
  if (g.versionBase() != kInvalidId) {
    for (NodeId n = g.versionBase(); n < g.numNodes(); ++n) {
      VarId o = g.node(n).base;
      LabelId l = g.node(n).versionAt;
      ++rep.pairsCompared;
      std::string key = prog.varName(o) + "@" + prog.labelName(l);
      const PointsToSet &after = fs.ptsAfter(o, l);
      if (!sameSet(after, dense.outAt(l, o))) {
        fail("pts(" + key + ") after " + prog.labelName(l) + ": expected " +
             fmtSet(prog, dense.outAt(l, o)) + ", got " +
             fmtSet(prog, after));
        return rep;
      }
      PointsToSet before = fs.ptsBefore(o, l);
      if (!sameSet(before, dense.inAt(l, o))) {
        fail("pts(" + key + ") before " + prog.labelName(l) + ": expected " +
             fmtSet(prog, dense.inAt(l, o)) + ", got " +
             fmtSet(prog, before));
        return rep;
      }
    }
  }

  std::vector<std::pair<LabelId, FuncId>> fsBind = fs.callBindings;
  std::sort(fsBind.begin(), fsBind.end());
  if (fsBind != dense.callBindings) {
    fail("call bindings differ: expected " +
         std::to_string(dense.callBindings.size()) + " bindings, got " +
         std::to_string(fsBind.size()));
  }
  return rep;
}

SolveOptions solveOpts(bool noSimplify, uint64_t iterCap,
                       bool disableSu = false) {
  SolveOptions o;
  o.simplify = !noSimplify;
  o.iterCap = iterCap;
  o.disableSu = disableSu;
  return o;
}

} // namespace

int runAnalyze(const std::string &file, const DriverOptions &opts) {
  try {
    auto start = Clock::now();
    Pipeline p = frontend(readFile(file), opts.lenient);
    AndersenResult fi =
        solveAndersen(p.prog, solveOpts(opts.noSimplify, opts.iterCap));

    std::string artifact;
    if (opts.mode == "fi") {
      if (opts.emit == "json")
        artifact = emitFiJson(p.prog, fi);
      else if (opts.emit == "dot")
        artifact = fi.graph.toDot();
      else
        artifact = emitFiStats(p.prog, fi);
    } else if (opts.mode == "fs") {
      FsResult fs = solveFs(p.prog, p.cfg, fi,
                            solveOpts(opts.noSimplify, opts.iterCap,
                                      opts.disableSu));
      if (opts.emit == "json")
        artifact = emitFsJson(p.prog, fs);
      else if (opts.emit == "dot")
        artifact = fs.fsg.graph.toDot();
      else
        artifact = emitFsStats(p.prog, fs);
    } else { // dense
      DenseResult dense =
          solveDense(p.prog, p.cfg, fi, solveOpts(opts.noSimplify, opts.iterCap));
      if (opts.emit == "dot") {
        std::fprintf(stderr, "error: --emit dot requires --mode fi or fs\n");
        return kExitUsage;
      }
      artifact = opts.emit == "json" ? emitDenseJson(p.prog, dense)
                                     : emitDenseStats(p.prog, dense);
    }
    std::fprintf(stderr, "wall_ms=%.3f\n", msSince(start));
    return writeOut(opts.outPath, artifact);
  } catch (const ParseError &e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitParse;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
}

int runDiff(const std::string &file, const DriverOptions &opts) {
  try {
    Pipeline p = frontend(readFile(file), opts.lenient);
    AndersenResult fi =
        solveAndersen(p.prog, solveOpts(opts.noSimplify, opts.iterCap));
    FsResult fs =
        solveFs(p.prog, p.cfg, fi,
                solveOpts(opts.noSimplify, opts.iterCap, opts.disableSu));
    DenseResult dense =
        solveDense(p.prog, p.cfg, fi, solveOpts(opts.noSimplify, opts.iterCap));
    DiffReport rep = compareFsDense(p.prog, fs, dense);
    if (!rep.ok) {
      std::printf("mismatch: %s\n", rep.message.c_str());
      return kExitDiff;
    }
    std::printf("fs matches dense: %llu top-level variables, %llu versioned "
                "pairs\n",
                static_cast<unsigned long long>(rep.topCompared),
                static_cast<unsigned long long>(rep.pairsCompared));
    return kExitOk;
  } catch (const ParseError &e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitParse;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
}

int runCorpus(const CorpusOptions &opts) {
  auto start = Clock::now();
  std::ostringstream csv;
  csv << "seed,stmts,fsconsg_edges,fsconsg_nodes,versions,fs_ptsets,"
         "dense_ptsets,su_count,diff_ok\n";
  uint64_t totalFs = 0, totalDense = 0, passed = 0;

  struct Row {
    DiffReport rep;
    uint64_t stmts = 0, edges = 0, nodes = 0, versions = 0, fsSets = 0,
             denseSets = 0, suCount = 0;
  };
  auto pipeline = [&](const std::string &text) {
    Pipeline p = frontend(text, opts.lenient);
    AndersenResult fi =
        solveAndersen(p.prog, solveOpts(opts.noSimplify, opts.iterCap));
    FsResult fs =
        solveFs(p.prog, p.cfg, fi, solveOpts(opts.noSimplify, opts.iterCap));
    DenseResult dense =
        solveDense(p.prog, p.cfg, fi, solveOpts(opts.noSimplify, opts.iterCap));
    Row row;
    row.rep = compareFsDense(p.prog, fs, dense);
    ConstraintGraph::Stats st = fs.fsg.graph.countConstraints();
    row.stmts = p.prog.numLabels();
    row.edges = st.edges();
    row.nodes = st.nodes;
    row.versions = st.versionedNodes;
    row.fsSets = countFsPtSets(fs);
    row.denseSets = countDensePtSets(dense);
    row.suCount = fs.suLabels.size();
    return row;
  };

  for (uint32_t i = 0; i < opts.n; ++i) {
    GenConfig gc;
    gc.seed = opts.seed + i;
    gc.maxStmts = opts.maxStmts;
    gc.summaryProb = opts.summaryProb;
    std::string text = generateProgram(gc);

    Row row;
    try {
      row = pipeline(text);
    } catch (const std::exception &e) {
      std::fprintf(stderr, "corpus seed %llu: %s\n",
                   static_cast<unsigned long long>(gc.seed), e.what());
      return kExitSolver;
    }

    csv << gc.seed << ',' << row.stmts << ',' << row.edges << ',' << row.nodes
        << ',' << row.versions << ',' << row.fsSets << ',' << row.denseSets
        << ',' << row.suCount << ',' << (row.rep.ok ? 1 : 0) << '\n';
    totalFs += row.fsSets;
    totalDense += row.denseSets;
    passed += row.rep.ok;

    if (!row.rep.ok) {
      std::fprintf(stderr, "corpus seed %llu: %s\n",
                   static_cast<unsigned long long>(gc.seed),
                   row.rep.message.c_str());
      auto stillFails = [&](const std::string &candidate) {
        try {
          return !pipeline(candidate).rep.ok;
        } catch (const std::exception &) {
          return false;
        }
      };
      std::string minimal = shrinkProgram(text, stillFails);
      std::ofstream out(opts.counterexamplePath, std::ios::binary);
      out << minimal;
      std::fprintf(stderr, "shrunken counterexample written to %s\n",
                   opts.counterexamplePath.c_str());
      writeOut(opts.outPath, csv.str());
      return kExitDiff;
    }
  }

  if (opts.n > 0) {
    double passRate = 100.0 * static_cast<double>(passed) / opts.n;
    double reduction =
        totalDense > 0
            ? 100.0 * (1.0 - static_cast<double>(totalFs) /
                                 static_cast<double>(totalDense))
            : 0.0;
    char agg[160];
    std::snprintf(agg, sizeof(agg),
                  "# programs=%u pass_rate=%.2f total_fs_ptsets=%llu "
                  "total_dense_ptsets=%llu reduction_pct=%.2f\n",
                  opts.n, passRate, static_cast<unsigned long long>(totalFs),
                  static_cast<unsigned long long>(totalDense), reduction);
    csv << agg;
  }
  std::fprintf(stderr, "wall_ms=%.3f\n", msSince(start));
  return writeOut(opts.outPath, csv.str());
}

int runDump(const std::string &file, const std::string &what,
            const DriverOptions &opts) {
  try {
    Pipeline p = frontend(readFile(file), opts.lenient);
    std::string artifact;
    if (what == "program") {
      artifact = emitProgramJson(p.prog);
    } else { // defuse over the FI-resolved call graph
      AndersenResult fi =
          solveAndersen(p.prog, solveOpts(opts.noSimplify, opts.iterCap));
      for (auto [site, callee] : fi.callBindings)
        p.cfg.addCallBinding(p.prog, site, callee);
      artifact = emitDefUseText(p.prog, computeDefUse(p.prog, p.cfg, fi));
    }
    return writeOut(opts.outPath, artifact);
  } catch (const ParseError &e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitParse;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
}

} // namespace fspta
