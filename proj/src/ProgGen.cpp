#include "fspta/ProgGen.hpp"

#include "fspta/Parser.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

namespace fspta {

namespace {

struct GenStmt {
  enum Kind { Plain, Goto, Br } kind = Plain;
  std::string text;  // body without label, Plain only
  int target = -1;   // slot index within the same function
  int target2 = -1;
};

struct Binding {
  std::string var;
  int helper; // index into helpers, -1 = unknown arity source
};

// What is definitely assigned when control reaches the current point.
// ptrs/fps are hints for picking operands that keep pointer chains alive;
// both are subsets of vars.
struct Env {
  std::vector<std::string> vars;
  std::vector<std::string> ptrs;
  std::vector<Binding> fps;

  void addVar(const std::string &v) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      vars.push_back(v);
  }
  void addPtr(const std::string &v) {
    addVar(v);
    if (std::find(ptrs.begin(), ptrs.end(), v) == ptrs.end())
      ptrs.push_back(v);
  }
  void addFp(const std::string &v, int helper) {
    addPtr(v);
    fps.push_back({v, helper});
  }
};

template <typename T>
std::vector<T> intersect(const std::vector<T> &a, const std::vector<T> &b,
                         bool (*eq)(const T &, const T &)) {
  std::vector<T> out;
  for (const T &x : a)
    for (const T &y : b)
      if (eq(x, y)) {
        out.push_back(x);
        break;
      }
  return out;
}

Env joinEnv(const Env &a, const Env &b) {
  Env e;
  e.vars = intersect<std::string>(
      a.vars, b.vars, [](const std::string &x, const std::string &y) { return x == y; });
  e.ptrs = intersect<std::string>(
      a.ptrs, b.ptrs, [](const std::string &x, const std::string &y) { return x == y; });
  e.fps = intersect<Binding>(a.fps, b.fps, [](const Binding &x, const Binding &y) {
    return x.var == y.var && x.helper == y.helper;
  });
  return e;
}

struct GenFn {
  std::string name;
  std::vector<std::string> params;
  std::vector<GenStmt> slots;
};

class Generator {
public:
  explicit Generator(const GenConfig &cfg) : cfg_(cfg), rng_(cfg.seed) {}

  std::string run() {
    uint32_t budget = std::max<uint32_t>(1, cfg_.maxStmts);
    uint32_t helpers = 0;
    if (cfg_.calls && cfg_.maxFuncs > 0 && budget >= 8)
      helpers = 1 + pick(std::min(cfg_.maxFuncs, budget / 6));
    helperArity_.resize(helpers);
    // one budget share per helper, two for main
    uint32_t share = budget / (helpers + 2);
    for (uint32_t k = 0; k < helpers; ++k) {
      helperArity_[k] = static_cast<uint32_t>(pick(3));
      genFunction("g" + std::to_string(k), helperArity_[k],
                  std::max<uint32_t>(1, share), static_cast<int>(k));
      budget -= static_cast<uint32_t>(fns_.back().slots.size());
    }
    genFunction("main", 0, std::max<uint32_t>(1, budget),
                static_cast<int>(helpers));
    return render();
  }

private:
  uint64_t pick(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(rng_()) * n) >> 64);
  }
  bool chance(double p) {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p;
  }
  template <typename T> const T &pickOf(const std::vector<T> &v) {
    return v[pick(v.size())];
  }

  void genFunction(const std::string &name, uint32_t arity, uint32_t budget,
                   int calleeLimit) {
    fns_.push_back({});
    GenFn &fn = fns_.back();
    fn.name = name;
    varCounter_ = 0;
    varPrefix_ = name == "main" ? "v" : name + "v";
    Env env;
    for (uint32_t i = 0; i < arity; ++i) {
      fn.params.push_back(freshName());
      env.addPtr(fn.params.back()); // params typically carry pointers
    }
    if (budget > 1)
      genSeq(fn, env, budget - 1, 0, calleeLimit);
    GenStmt ret;
    ret.text = "ret";
    if (name != "main" && !env.vars.empty()) {
      const std::string &v =
          env.ptrs.empty() ? pickOf(env.vars) : pickOf(env.ptrs);
      ret.text += " " + v;
    }
    fn.slots.push_back(std::move(ret));
  }

  // Emits up to `budget` slots. Structured blocks flatten contiguously, so
  // a slot's fall-through continuation is always the next emitted slot; a
  // target just past the sequence resolves to whatever the caller emits
  // next, ultimately the function's trailing ret.
  void genSeq(GenFn &fn, Env &env, uint32_t budget, int depth,
              int calleeLimit) {
    while (budget > 0) {
      size_t before = fn.slots.size();
      if (depth < 3 && budget >= 6 && chance(cfg_.branchProb))
        genDiamond(fn, env, budget, depth, calleeLimit);
      else if (depth < 3 && budget >= 4 && chance(cfg_.loopProb))
        genLoop(fn, env, budget, depth, calleeLimit);
      else
        genPrimitive(fn, env, budget, calleeLimit);
      uint32_t used = static_cast<uint32_t>(fn.slots.size() - before);
      budget = used >= budget ? 0 : budget - used;
    }
  }

  void genDiamond(GenFn &fn, Env &env, uint32_t budget, int depth,
                  int calleeLimit) {
    uint32_t room = (budget - 2) / 2;
    uint32_t bt = 1 + static_cast<uint32_t>(pick(room));
    uint32_t be = 1 + static_cast<uint32_t>(pick(room));
    size_t brIdx = fn.slots.size();
    fn.slots.push_back({GenStmt::Br, "", -1, -1});
    Env envT = env;
    genSeq(fn, envT, bt, depth + 1, calleeLimit);
    size_t gotoIdx = fn.slots.size();
    fn.slots.push_back({GenStmt::Goto, "", -1, -1});
    Env envE = env;
    genSeq(fn, envE, be, depth + 1, calleeLimit);
    fn.slots[brIdx].target = static_cast<int>(brIdx) + 1;
    fn.slots[brIdx].target2 = static_cast<int>(gotoIdx) + 1;
    fn.slots[gotoIdx].target = static_cast<int>(fn.slots.size());
    env = joinEnv(envT, envE);
  }

  void genLoop(GenFn &fn, Env &env, uint32_t budget, int depth,
               int calleeLimit) {
    // Fall-through entry, so the body runs at least once and its
    // definitions survive the join at the back edge.
    size_t bodyStart = fn.slots.size();
    genSeq(fn, env, budget - 1, depth + 1, calleeLimit);
    size_t brIdx = fn.slots.size();
    fn.slots.push_back({GenStmt::Br, "", static_cast<int>(bodyStart),
                        static_cast<int>(brIdx) + 1});
  }

  void genPrimitive(GenFn &fn, Env &env, uint32_t budget, int calleeLimit) {
    enum Op { Addr, Copy, Gep, Load, Store, Call };
    std::vector<Op> bag;
    auto add = [&](Op op, int weight) {
      for (int i = 0; i < weight; ++i)
        bag.push_back(op);
    };
    if (cfg_.maxObjects > 0)
      add(Addr, 3);
    add(Copy, 2);
    if (cfg_.maxFields > 0 && !env.ptrs.empty())
      add(Gep, 2);
    if (!env.ptrs.empty()) {
      add(Load, 3);
      if (!env.vars.empty())
        add(Store, 3);
    }
    if (cfg_.calls && calleeLimit > 0 && !env.vars.empty())
      add(Call, 2);

    if (bag.empty()) {
      // objects disabled and nothing defined yet: seed with a self-copy
      std::string v = freshName();
      emit(fn, v + " = " + v);
      env.addVar(v);
      return;
    }

    switch (pickOf(bag)) {
    case Addr: {
      std::string obj;
      if (objects_.size() < cfg_.maxObjects &&
          (objects_.empty() || chance(0.4))) {
        obj = "o" + std::to_string(objects_.size());
        objects_.push_back(obj);
      } else {
        obj = pickOf(objects_);
      }
      std::string dst = dstVar(env);
      emit(fn, dst + " = &" + obj +
                   (chance(cfg_.summaryProb) ? " summary" : ""));
      env.addPtr(dst);
      break;
    }
    case Copy: {
      if (env.vars.empty()) {
        std::string v = freshName();
        emit(fn, v + " = " + v);
        env.addVar(v);
        break;
      }
      std::string src = pickOf(env.vars);
      std::string dst = dstVar(env);
      emit(fn, dst + " = " + src);
      env.addVar(dst);
      if (std::find(env.ptrs.begin(), env.ptrs.end(), src) != env.ptrs.end())
        env.addPtr(dst);
      for (const Binding &b : env.fps)
        if (b.var == src) {
          env.addFp(dst, b.helper);
          break;
        }
      break;
    }
    case Gep: {
      std::string src = pickOf(env.ptrs);
      std::string field = "f" + std::to_string(pick(cfg_.maxFields));
      std::string dst = dstVar(env);
      emit(fn, dst + " = &" + src + "." + field);
      env.addPtr(dst);
      break;
    }
    case Load: {
      std::string ptr = pickOf(env.ptrs);
      std::string dst = dstVar(env);
      emit(fn, dst + " = *" + ptr);
      env.addPtr(dst); // whatever it loaded may itself be a pointer
      break;
    }
    case Store: {
      std::string ptr = pickOf(env.ptrs);
      emit(fn, "*" + ptr + " = " + pickOf(env.vars));
      break;
    }
    case Call:
      genCall(fn, env, budget, calleeLimit);
      break;
    }
  }

  void genCall(GenFn &fn, Env &env, uint32_t budget, int calleeLimit) {
    bool indirect = chance(cfg_.indirectCallProb);
    int helper = static_cast<int>(pick(calleeLimit));
    std::string calleeText;
    uint32_t arity = 0;
    if (indirect) {
      Binding b{"", -1};
      if (!env.fps.empty() && chance(0.7)) {
        b = pickOf(env.fps);
      } else if (budget >= 2) {
        b.var = dstVar(env);
        b.helper = helper;
        emit(fn, b.var + " = &g" + std::to_string(helper) +
                     (chance(cfg_.summaryProb) ? " summary" : ""));
        env.addFp(b.var, helper);
      } else if (!env.fps.empty()) {
        b = pickOf(env.fps);
      } else {
        indirect = false;
      }
      if (indirect) {
        // occasionally call through an arbitrary pointer; targets that are
        // not functions of the right arity simply never bind
        if (b.helper >= 0 && chance(0.15) && !env.ptrs.empty()) {
          calleeText = "*" + pickOf(env.ptrs);
          arity = static_cast<uint32_t>(pick(3));
        } else {
          calleeText = "*" + b.var;
          arity = b.helper >= 0 ? helperArity_[b.helper]
                                : static_cast<uint32_t>(pick(3));
        }
      }
    }
    if (!indirect) {
      calleeText = "g" + std::to_string(helper);
      arity = helperArity_[helper];
    }
    std::string stmt = "call " + calleeText + "(";
    for (uint32_t i = 0; i < arity; ++i) {
      if (i)
        stmt += ", ";
      stmt += env.ptrs.empty() || chance(0.3) ? pickOf(env.vars)
                                              : pickOf(env.ptrs);
    }
    stmt += ")";
    if (chance(0.7)) {
      std::string dst = dstVar(env);
      stmt = dst + " = " + stmt;
      env.addPtr(dst); // returned values may carry pointers
    }
    emit(fn, stmt);
  }

  std::string freshName() {
    return varPrefix_ + std::to_string(varCounter_++);
  }

  std::string dstVar(Env &env) {
    if (!env.vars.empty() && chance(0.25))
      return pickOf(env.vars);
    return freshName();
  }

  void emit(GenFn &fn, std::string text) {
    fn.slots.push_back({GenStmt::Plain, std::move(text), -1, -1});
  }

  std::string render() const {
    // global label numbering in textual order, like hand-written fixtures
    std::vector<std::vector<std::string>> labels(fns_.size());
    int next = 1;
    for (size_t f = 0; f < fns_.size(); ++f)
      for (size_t i = 0; i < fns_[f].slots.size(); ++i)
        labels[f].push_back("l" + std::to_string(next++));

    std::ostringstream out;
    for (size_t f = 0; f < fns_.size(); ++f) {
      const GenFn &fn = fns_[f];
      out << "func " << fn.name << "(";
      for (size_t i = 0; i < fn.params.size(); ++i)
        out << (i ? ", " : "") << fn.params[i];
      out << ") {\n";
      for (size_t i = 0; i < fn.slots.size(); ++i) {
        const GenStmt &s = fn.slots[i];
        out << "  " << labels[f][i] << ": ";
        switch (s.kind) {
        case GenStmt::Plain:
          out << s.text;
          break;
        case GenStmt::Goto:
          out << "goto " << labels[f][s.target];
          break;
        case GenStmt::Br:
          out << "br " << labels[f][s.target] << " " << labels[f][s.target2];
          break;
        }
        out << "\n";
      }
      out << "}\n";
    }
    return out.str();
  }

  GenConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<GenFn> fns_;
  std::vector<std::string> objects_;
  std::vector<uint32_t> helperArity_;
  std::string varPrefix_;
  uint32_t varCounter_ = 0;
};

bool parses(const std::string &text) {
  try {
    parseProgram(text);
    return true;
  } catch (const ParseError &) {
    return false;
  }
}

std::vector<std::string> splitLines(const std::string &text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty())
    lines.push_back(cur);
  return lines;
}

std::string joinLines(const std::vector<std::string> &lines,
                      const std::vector<bool> &keep) {
  std::string out;
  for (size_t i = 0; i < lines.size(); ++i)
    if (keep[i]) {
      out += lines[i];
      out += '\n';
    }
  return out;
}

} // namespace

std::string generateProgram(const GenConfig &cfg) {
  return Generator(cfg).run();
}

std::string
shrinkProgram(const std::string &text,
              const std::function<bool(const std::string &)> &stillFails) {
  std::vector<std::string> lines = splitLines(text);
  std::vector<bool> keep(lines.size(), true);

  // On failure restore the previous keep state of the range, not all-true:
  // blanket restoration would resurrect lines earlier attempts dropped and
  // the pass loop would oscillate forever.
  auto attempt = [&](size_t from, size_t to) {
    std::vector<bool> saved(keep.begin() + from, keep.begin() + to + 1);
    bool dropsAnything = false;
    for (size_t i = from; i <= to; ++i) {
      dropsAnything |= keep[i];
      keep[i] = false;
    }
    if (!dropsAnything)
      return false;
    std::string candidate = joinLines(lines, keep);
    if (parses(candidate) && stillFails(candidate))
      return true;
    std::copy(saved.begin(), saved.end(), keep.begin() + from);
    return false;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    // whole functions first: "func ..." through the next bare "}"
    for (size_t i = 0; i < lines.size(); ++i) {
      if (!keep[i] || lines[i].rfind("func ", 0) != 0)
        continue;
      size_t close = i;
      while (close < lines.size() && lines[close] != "}")
        ++close;
      if (close < lines.size() && attempt(i, close))
        changed = true;
    }
    // then individual statements
    for (size_t i = 0; i < lines.size(); ++i) {
      if (!keep[i] || lines[i].rfind("func ", 0) == 0 || lines[i] == "}")
        continue;
      if (attempt(i, i))
        changed = true;
    }
  }
  return joinLines(lines, keep);
}

} // namespace fspta
