// End-to-end gate run by ctest: one pass/fail line per criterion, nonzero
// exit if anything fails. argv[1] is the CLI binary; the subprocess
// criteria go through it, everything else runs in-process.

#include "Oracles.hpp"

#include "fspta/DefUse.hpp"
#include "fspta/DenseSolver.hpp"
#include "fspta/Driver.hpp"
#include "fspta/Emit.hpp"
#include "fspta/FsSolver.hpp"
#include "fspta/Parser.hpp"
#include "fspta/ProgGen.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <sys/resource.h>
#include <sys/wait.h>
#include <vector>

using namespace fspta;

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string &name) {
  return std::string(FSPTA_FIXTURES_DIR) + "/" + name;
}

std::set<std::string> nameSet(const Program &p, const PointsToSet &s) {
  std::set<std::string> out;
  for (VarId v : s)
    out.insert(p.varName(v));
  return out;
}

struct Solved {
  std::unique_ptr<Program> prog;
  Cfg cfg;
  AndersenResult fi;
  FsResult fs;
};

Solved solveText(const std::string &text, bool simplify) {
  auto prog = std::make_unique<Program>(parseProgram(text));
  Cfg cfg = buildCfg(*prog);
  SolveOptions opts;
  opts.simplify = simplify;
  AndersenResult fi = solveAndersen(*prog, opts);
  FsResult fs = solveFs(*prog, cfg, fi, opts);
  return {std::move(prog), std::move(cfg), std::move(fi), std::move(fs)};
}

// Everything a caller can query, rendered to one string. Iteration counts
// and other solver internals deliberately stay out: simplification is
// allowed to change how the fixpoint is reached, not what it is.
std::string observable(const Solved &s) {
  const Program &p = *s.prog;
  std::ostringstream out;
  auto render = [&](const PointsToSet &pts) {
    std::set<std::string> sorted;
    for (VarId v : pts)
      sorted.insert(p.varName(v));
    std::string txt = "{";
    for (const std::string &n : sorted)
      txt += n + " ";
    return txt + "}";
  };
  for (VarId v = 0; v < p.vars.size(); ++v)
    if (p.var(v).kind == VarKind::TopLevel)
      out << p.varName(v) << " = " << render(s.fs.ptsTop(v)) << '\n';
  // version node order tracks field-object interning, which follows solve
  // order; sort the rendered lines so both runs compare canonically
  const ConstraintGraph &g = s.fs.fsg.graph;
  std::vector<std::string> versionLines;
  if (g.versionBase() != kInvalidId)
    for (NodeId n = g.versionBase(); n < g.numNodes(); ++n) {
      VarId o = g.node(n).base;
      LabelId l = g.node(n).versionAt;
      versionLines.push_back(p.varName(o) + "@" + p.labelName(l) +
                             " after = " + render(s.fs.ptsAfter(o, l)) +
                             " before = " + render(s.fs.ptsBefore(o, l)));
    }
  std::sort(versionLines.begin(), versionLines.end());
  for (const std::string &l : versionLines)
    out << l << '\n';
  out << "su =";
  for (LabelId l : s.fs.suLabels)
    out << ' ' << p.labelName(l);
  out << "\nbindings =";
  std::vector<std::pair<LabelId, FuncId>> b = s.fs.callBindings;
  std::sort(b.begin(), b.end());
  for (auto [site, f] : b)
    out << ' ' << p.labelName(site) << "->" << p.funcs[f].name;
  out << '\n';
  return out.str();
}

// The corpus every property criterion runs over. Batches: plenty of
// call-free programs with branches, loops and mixed summary flags; a batch
// with direct and indirect calls; and small batches of both kinds so the
// exponential def-use oracle has programs it can afford to check.
std::vector<std::string> buildCorpus(size_t &numNoCall, size_t &numWithCalls) {
  std::vector<std::string> texts;
  auto gen = [&](uint64_t seed, uint32_t maxStmts, bool calls, double sp) {
    GenConfig gc;
    gc.seed = seed;
    gc.maxStmts = maxStmts;
    gc.maxObjects = 8;
    gc.calls = calls;
    gc.summaryProb = sp;
    texts.push_back(generateProgram(gc));
  };
  const double summaryMix[3] = {0.0, 0.15, 0.6};
  for (uint64_t i = 0; i < 500; ++i)
    gen(1000 + i, 40, false, summaryMix[i % 3]);
  for (uint64_t i = 0; i < 150; ++i)
    gen(20000 + i, 9, false, summaryMix[i % 3]);
  numNoCall = texts.size();
  for (uint64_t i = 0; i < 100; ++i)
    gen(9000 + i, 40, true, 0.1);
  for (uint64_t i = 0; i < 50; ++i)
    gen(30000 + i, 9, true, 0.1);
  numWithCalls = texts.size() - numNoCall;
  return texts;
}

// One in-process pass over the corpus collecting everything criteria 3,
// 5, 6 and 7 assert, so each program is solved once per option set.
struct SweepResult {
  bool envelopeOk = true;
  std::string envelopeDetail;
  bool defuseOk = true;
  std::string defuseDetail;
  size_t defuseCompared = 0;
  bool simplifyOk = true;
  std::string simplifyDetail;
  uint64_t totalFs = 0, totalDense = 0;
  size_t eligible = 0, strictlySmaller = 0;
};

SweepResult sweepCorpus(const std::vector<std::string> &texts) {
  SweepResult r;
  for (size_t i = 0; i < texts.size(); ++i) {
    Solved s = solveText(texts[i], /*simplify=*/true);
    const Program &p = *s.prog;
    auto tag = [&](const char *what) {
      return "program " + std::to_string(i) + ": " + what;
    };

    // criterion: every fs set inside the matching fi set
    if (r.envelopeOk) {
      for (VarId v = 0; v < p.vars.size() && r.envelopeOk; ++v) {
        if (p.var(v).kind != VarKind::TopLevel)
          continue;
        for (VarId t : s.fs.ptsTop(v))
          if (!s.fi.pts(v).contains(t)) {
            r.envelopeOk = false;
            r.envelopeDetail = tag("pts(") + p.varName(v) + ") outside fi";
          }
      }
      const ConstraintGraph &g = s.fs.fsg.graph;
      std::map<VarId, std::set<VarId>> unionOverVersions;
      if (g.versionBase() != kInvalidId)
        for (NodeId n = g.versionBase(); n < g.numNodes(); ++n) {
          const PointsToSet &after =
              s.fs.ptsAfter(g.node(n).base, g.node(n).versionAt);
          unionOverVersions[g.node(n).base].insert(after.begin(), after.end());
        }
      for (auto &[o, u] : unionOverVersions) {
        for (VarId t : u)
          if (!s.fi.pts(o).contains(t)) {
            r.envelopeOk = false;
            r.envelopeDetail = tag("versions of ") + p.varName(o) +
                               " exceed fi";
          }
      }
    }

    // criterion: chains equal brute-force path enumeration (small only)
    if (r.defuseOk && p.numLabels() <= 12) {
      Cfg bound = s.cfg;
      for (auto [site, callee] : s.fs.callBindings)
        bound.addCallBinding(p, site, callee);
      oracle::Pts naive = oracle::naiveAndersen(*s.prog);
      std::set<oracle::DefUseEdge> want =
          oracle::defUseByPaths(bound, oracle::modRef(p, naive));
      std::set<oracle::DefUseEdge> got;
      for (const DefUseInfo::Edge &e : s.fs.defuse.edges)
        got.insert({e.def, e.use, e.obj});
      if (got != want) {
        r.defuseOk = false;
        r.defuseDetail = tag("def-use chains diverge from path oracle");
      }
      ++r.defuseCompared;
    }

    // criterion: --no-simplify changes nothing queryable
    if (r.simplifyOk) {
      Solved plain = solveText(texts[i], /*simplify=*/false);
      if (observable(s) != observable(plain)) {
        r.simplifyOk = false;
        r.simplifyDetail = tag("simplified and plain runs disagree");
      }
    }

    // criterion: distinct nonempty points-to sets, fs vs dense
    DenseResult dense = solveDense(*s.prog, s.cfg, s.fi);
    uint64_t fsSets = countFsPtSets(s.fs);
    uint64_t denseSets = countDensePtSets(dense);
    r.totalFs += fsSets;
    r.totalDense += denseSets;
    size_t memOps = 0;
    for (const Function &f : p.funcs)
      for (const Statement &st : f.stmts)
        memOps += st.op == OpKind::Load || st.op == OpKind::Store;
    if (memOps >= 2) {
      ++r.eligible;
      r.strictlySmaller += fsSets < denseSets;
    }
  }
  return r;
}

int runCli(const std::string &cmd) {
  int rc = std::system(cmd.c_str());
  if (rc == -1 || !WIFEXITED(rc))
    return -1;
  return WEXITSTATUS(rc);
}

struct Gate {
  int failures = 0;
  void report(const char *name, bool ok, const std::string &detail = "") {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) {
      ++failures;
      if (!detail.empty())
        std::fprintf(stderr, "       %s\n", detail.c_str());
    }
  }
};

} // namespace

int main(int argc, char **argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli-binary>\n", argv[0]);
    return 2;
  }
  const std::string bin = argv[1];
  const std::string tmp =
      (std::filesystem::temp_directory_path() / "fspta_acc").string();
  Gate gate;

  size_t numNoCall = 0, numWithCalls = 0;
  std::vector<std::string> corpus = buildCorpus(numNoCall, numWithCalls);
  SweepResult sweep = sweepCorpus(corpus);

  // 1. fs tells the two loads of the fixture apart; fi does not
  {
    std::string detail;
    bool ok = true;
    auto start = Clock::now();
    try {
      Solved s = solveText(readFile(fixture("motiv.ir")), true);
      const Program &p = *s.prog;
      VarId o = p.findVar("o");
      ok = nameSet(p, s.fs.ptsTop(p.findVar("y"))) ==
               std::set<std::string>{"a"} &&
           nameSet(p, s.fs.ptsTop(p.findVar("z"))) ==
               std::set<std::string>{"b"} &&
           nameSet(p, s.fs.ptsAfter(o, p.findLabel("l7"))) ==
               std::set<std::string>{"a"} &&
           nameSet(p, s.fs.ptsAfter(o, p.findLabel("l9"))) ==
               std::set<std::string>{"b"} &&
           nameSet(p, s.fs.ptsBefore(o, p.findLabel("l10"))) ==
               std::set<std::string>{"b"} &&
           nameSet(p, s.fi.pts(p.findVar("y"))) ==
               std::set<std::string>{"a", "b"} &&
           nameSet(p, s.fi.pts(p.findVar("z"))) ==
               std::set<std::string>{"a", "b"} &&
           nameSet(p, s.fi.pts(o)) == std::set<std::string>{"a", "b"};
      if (!ok)
        detail = "points-to sets off the goldens";
      if (secondsSince(start) >= 1.0) {
        ok = false;
        detail = "fixture took too long";
      }
    } catch (const std::exception &e) {
      ok = false;
      detail = e.what();
    }
    gate.report("fixture goldens: fs splits the loads, fi merges them", ok,
                detail);
  }

  // 2. the diff command accepts every corpus program, within the budget
  {
    std::string detail;
    bool ok = numNoCall >= 500 && numWithCalls >= 100;
    if (!ok)
      detail = "corpus smaller than required";
    bool sawDirect = false, sawIndirect = false;
    for (size_t i = numNoCall; i < corpus.size(); ++i) {
      sawDirect |= corpus[i].find("call g") != std::string::npos;
      sawIndirect |= corpus[i].find("call *") != std::string::npos;
    }
    if (ok && !(sawDirect && sawIndirect)) {
      ok = false;
      detail = "call batch lacks a call kind";
    }
    auto start = Clock::now();
    const std::string file = tmp + "_diff.ir";
    for (size_t i = 0; ok && i < corpus.size(); ++i) {
      std::ofstream(file, std::ios::binary) << corpus[i];
      int rc = runCli("\"" + bin + "\" diff \"" + file + "\" >/dev/null 2>&1");
      if (rc != 0) {
        ok = false;
        detail = "diff exited " + std::to_string(rc) + " on program " +
                 std::to_string(i);
      }
    }
    double secs = secondsSince(start);
    if (ok && secs >= 60.0) {
      ok = false;
      detail = "sweep took " + std::to_string(secs) + "s";
    }
    std::filesystem::remove(file);
    std::string name = "differential sweep: diff exits 0 on " +
                       std::to_string(corpus.size()) + " programs (" +
                       std::to_string(numNoCall) + " call-free)";
    gate.report(name.c_str(), ok, detail);
  }

  // 3. flow-sensitive never exceeds flow-insensitive
  gate.report("envelope: every fs set within the fi set", sweep.envelopeOk,
              sweep.envelopeDetail);

  // 4. strong-update census on the fixture and its summary variant
  {
    std::string detail;
    bool ok = true;
    try {
      Solved m = solveText(readFile(fixture("motiv.ir")), true);
      ok = m.fs.suLabels.size() == 1 &&
           m.fs.suLabels[0] == m.prog->findLabel("l9");
      if (!ok)
        detail = "fixture should strongly update exactly l9";
      Solved v = solveText(readFile(fixture("motiv_summary.ir")), true);
      if (ok && !v.fs.suLabels.empty()) {
        ok = false;
        detail = "summary variant must not strongly update";
      }
      if (ok && nameSet(*v.prog, v.fs.ptsTop(v.prog->findVar("z"))) !=
                    std::set<std::string>{"a", "b"}) {
        ok = false;
        detail = "summary variant should keep pts(z)={a,b}";
      }
    } catch (const std::exception &e) {
      ok = false;
      detail = e.what();
    }
    gate.report("strong updates: exactly l9 on the fixture, none on the "
                "summary variant",
                ok, detail);
  }

  // 5. def-use chains: fixture golden plus the path-enumeration oracle
  {
    std::string detail = sweep.defuseDetail;
    bool ok = sweep.defuseOk;
    try {
      Solved m = solveText(readFile(fixture("motiv.ir")), true);
      const Program &p = *m.prog;
      std::set<oracle::DefUseEdge> got;
      for (const DefUseInfo::Edge &e : m.fs.defuse.edges)
        got.insert({e.def, e.use, e.obj});
      VarId o = p.findVar("o");
      std::set<oracle::DefUseEdge> want = {
          {p.findLabel("l7"), p.findLabel("l8"), o},
          {p.findLabel("l7"), p.findLabel("l9"), o},
          {p.findLabel("l9"), p.findLabel("l10"), o}};
      if (got != want) {
        ok = false;
        detail = "fixture chains are not the three expected edges";
      }
    } catch (const std::exception &e) {
      ok = false;
      detail = e.what();
    }
    if (ok && sweep.defuseCompared < 100) {
      ok = false;
      detail = "only " + std::to_string(sweep.defuseCompared) +
               " programs were small enough for the path oracle";
    }
    std::string name = "def-use: fixture exact, " +
                       std::to_string(sweep.defuseCompared) +
                       " small programs match path enumeration";
    gate.report(name.c_str(), ok, detail);
  }

  // 6. simplification is an optimization, not a semantics change
  gate.report("simplification neutrality across the corpus", sweep.simplifyOk,
              sweep.simplifyDetail);

  // 7. fs keeps fewer distinct nonempty sets than the dense baseline
  {
    std::string detail;
    bool ok = sweep.totalFs <= sweep.totalDense;
    if (!ok)
      detail = "aggregate fs sets exceed dense sets";
    double strictRate =
        sweep.eligible ? static_cast<double>(sweep.strictlySmaller) /
                             static_cast<double>(sweep.eligible)
                       : 0.0;
    if (ok && strictRate < 0.80) {
      ok = false;
      detail = "strictly smaller on only " +
               std::to_string(100.0 * strictRate) + "% of " +
               std::to_string(sweep.eligible) + " eligible programs";
    }
    if (ok) {
      CorpusOptions copts;
      copts.n = 50;
      copts.outPath = tmp + "_economy.csv";
      if (runCorpus(copts) != kExitOk ||
          readFile(copts.outPath).find("reduction_pct=") ==
              std::string::npos) {
        ok = false;
        detail = "corpus CSV lacks the reduction percentage";
      }
      std::filesystem::remove(copts.outPath);
    }
    char name[128];
    std::snprintf(name, sizeof(name),
                  "set economy: fs < dense on %.1f%% of %zu eligible programs",
                  100.0 * strictRate, sweep.eligible);
    gate.report(name, ok, detail);
  }

  // 8. identical invocations, identical bytes
  {
    std::string detail;
    bool ok = true;
    const std::string a = tmp + "_a.out", b = tmp + "_b.out";
    auto rerun = [&](const std::string &args, const char *what) {
      if (!ok)
        return;
      if (runCli("\"" + bin + "\" " + args + " --out \"" + a +
                 "\" >/dev/null 2>&1") != 0 ||
          runCli("\"" + bin + "\" " + args + " --out \"" + b +
                 "\" >/dev/null 2>&1") != 0) {
        ok = false;
        detail = std::string(what) + " rerun failed";
        return;
      }
      if (readFile(a) != readFile(b)) {
        ok = false;
        detail = std::string(what) + " reruns differ";
      }
    };
    std::string motiv = fixture("motiv.ir");
    rerun("analyze \"" + motiv + "\"", "analyze json");
    rerun("analyze \"" + motiv + "\" --emit stats", "analyze stats");
    rerun("corpus --n 25", "corpus");
    std::filesystem::remove(a);
    std::filesystem::remove(b);
    gate.report("byte-identical reruns of analyze and corpus", ok, detail);
  }

  // 9. scale smoke: long straight-line program, bounded time and memory
  {
    std::string detail;
    bool ok = true;
    try {
      std::ostringstream text;
      text << "func main() {\n";
      int lbl = 1;
      for (int k = 0; k < 100; ++k)
        text << "  l" << lbl++ << ": x" << k << " = &o" << k << "\n";
      for (int i = 0; i < 10000; ++i) {
        int k = i % 100, j = (i + 1) % 100;
        text << "  l" << lbl++ << ": *x" << k << " = x" << j << "\n";
        text << "  l" << lbl++ << ": y" << i << " = *x" << k << "\n";
      }
      text << "}\n";

      auto start = Clock::now();
      Solved s = solveText(text.str(), true);
      double secs = secondsSince(start);

      struct rusage ru;
      getrusage(RUSAGE_SELF, &ru);
      double gb = static_cast<double>(ru.ru_maxrss) / (1024.0 * 1024.0);

      if (secs >= 5.0) {
        ok = false;
        detail = "took " + std::to_string(secs) + "s";
      } else if (gb >= 1.0) {
        ok = false;
        detail = "peak rss " + std::to_string(gb) + " GB";
      } else if (s.fs.stats.iterations > 5) {
        ok = false;
        detail = std::to_string(s.fs.stats.iterations) + " iterations";
      }
    } catch (const std::exception &e) {
      ok = false;
      detail = e.what();
    }
    gate.report("scale smoke: 10k store/load pairs over 100 objects within "
                "5s, 1GB, 5 iterations",
                ok, detail);
  }

  if (gate.failures)
    std::printf("%d criterion(s) failed\n", gate.failures);
  else
    std::printf("all criteria passed\n");
  return gate.failures ? 1 : 0;
}
