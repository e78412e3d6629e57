#pragma once

#include "doctest.h"

#include "fspta/Andersen.hpp"
#include "fspta/DenseSolver.hpp"
#include "fspta/FsSolver.hpp"
#include "fspta/Parser.hpp"

#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>

namespace fspta::test {

inline std::string readFixture(const std::string &name) {
  std::string path = std::string(FSPTA_FIXTURES_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing fixture " << path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parsed program plus everything the solvers derive from it. The program
// lives behind a unique_ptr because the graphs keep pointers into it and
// the whole bundle gets moved out of the factory.
struct Pipeline {
  std::unique_ptr<Program> prog;
  Cfg cfg;
  AndersenResult fi;
  FsResult fs;
};

inline Pipeline runPipeline(const std::string &text,
                            const SolveOptions &opts = {},
                            bool lenient = false) {
  ParseOptions popts;
  popts.lenient = lenient;
  auto prog = std::make_unique<Program>(parseProgram(text, popts));
  Cfg cfg = buildCfg(*prog);
  AndersenResult fi = solveAndersen(*prog, opts);
  FsResult fs = solveFs(*prog, cfg, fi, opts);
  return {std::move(prog), std::move(cfg), std::move(fi), std::move(fs)};
}

inline DenseResult runDense(Pipeline &p, const SolveOptions &opts = {}) {
  return solveDense(*p.prog, p.cfg, p.fi, opts);
}

inline VarId vid(const Program &p, const std::string &name) {
  VarId v = p.findVar(name);
  REQUIRE_MESSAGE(v != kInvalidId, "unknown variable " << name);
  return v;
}

inline LabelId lid(const Program &p, const std::string &name) {
  LabelId l = p.findLabel(name);
  REQUIRE_MESSAGE(l != kInvalidId, "unknown label " << name);
  return l;
}

using NameSet = std::set<std::string>;

inline NameSet names(const Program &p, const PointsToSet &s) {
  NameSet out;
  for (VarId v : s)
    out.insert(p.varName(v));
  return out;
}

inline NameSet names(const Program &p, const std::set<VarId> &s) {
  NameSet out;
  for (VarId v : s)
    out.insert(p.varName(v));
  return out;
}

} // namespace fspta::test
