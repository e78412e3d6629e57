// Recursive-descent parser for the textual IR:
//
//   program := func*
//   func    := "func" NAME "(" params? ")" "{" stmt* "}"
//   stmt    := LABEL ":" body
//   body    := ID "=" "&" ID ["summary"]      addr
//            | ID "=" ID                      copy
//            | ID "=" "&" ID "." ID           gep
//            | ID "=" "*" ID                  load
//            | "*" ID "=" ID                  store
//            | [ID "="] "call" (ID | "*" ID) "(" args? ")"
//            | "ret" [ID] | "goto" LABEL | "br" LABEL LABEL
//
// "#" starts a comment running to end of line. Whitespace is free-form.
// A callee ID naming a declared function is a direct call; any other
// callee (including the "*" form) is an indirect call through a
// top-level variable.

#include "fspta/Parser.hpp"

#include <cassert>
#include <map>
#include <set>

namespace fspta {

namespace {

enum class Tok : uint8_t {
  Ident,
  KwFunc,
  KwCall,
  KwRet,
  KwGoto,
  KwBr,
  KwSummary,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Colon,
  Eq,
  Amp,
  Star,
  Dot,
  Comma,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skipWs();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = text_[pos_];
    if (isIdentStart(c)) {
      size_t begin = pos_;
      while (pos_ < text_.size() && isIdentChar(text_[pos_]))
        advance();
      t.text = std::string(text_.substr(begin, pos_ - begin));
      if (t.text == "func")
        t.kind = Tok::KwFunc;
      else if (t.text == "call")
        t.kind = Tok::KwCall;
      else if (t.text == "ret")
        t.kind = Tok::KwRet;
      else if (t.text == "goto")
        t.kind = Tok::KwGoto;
      else if (t.text == "br")
        t.kind = Tok::KwBr;
      else if (t.text == "summary")
        t.kind = Tok::KwSummary;
      else
        t.kind = Tok::Ident;
      return t;
    }
    advance();
    switch (c) {
    case '(':
      t.kind = Tok::LParen;
      return t;
    case ')':
      t.kind = Tok::RParen;
      return t;
    case '{':
      t.kind = Tok::LBrace;
      return t;
    case '}':
      t.kind = Tok::RBrace;
      return t;
    case ':':
      t.kind = Tok::Colon;
      return t;
    case '=':
      t.kind = Tok::Eq;
      return t;
    case '&':
      t.kind = Tok::Amp;
      return t;
    case '*':
      t.kind = Tok::Star;
      return t;
    case '.':
      t.kind = Tok::Dot;
      return t;
    case ',':
      t.kind = Tok::Comma;
      return t;
    default:
      throw ParseError(t.line, t.col, std::string("unexpected character '") + c + "'");
    }
  }

private:
  static bool isIdentStart(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool isIdentChar(char c) {
    return isIdentStart(c) || (c >= '0' && c <= '9');
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skipWs() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n')
          advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

struct PendingCallee {
  FuncId func;      // owning function of the call statement
  uint32_t stmt;    // index into funcs[func].stmts
  std::string name; // callee spelled as a bare identifier
  int line, col;
};

struct PendingTarget {
  FuncId func;
  uint32_t stmt;
  std::string name;
  bool second; // resolve into target2
  int line, col;
};

class Parser {
public:
  Parser(std::string_view text, const ParseOptions &opts)
      : lex_(text), opts_(opts) {
    bump();
  }

  Program run() {
    while (cur_.kind != Tok::End) {
      expect(Tok::KwFunc, "'func'");
      parseFunction();
    }
    resolveCallees();
    validate();
    return std::move(prog_);
  }

private:
  void bump() { cur_ = lex_.next(); }

  void expect(Tok k, const char *what) {
    if (cur_.kind != k)
      throw ParseError(cur_.line, cur_.col,
                       std::string("expected ") + what + describeCur());
    bump();
  }

  std::string describeCur() const {
    if (cur_.kind == Tok::End)
      return ", got end of input";
    if (!cur_.text.empty())
      return ", got '" + cur_.text + "'";
    return "";
  }

  std::string expectIdent(const char *what) {
    if (cur_.kind != Tok::Ident)
      throw ParseError(cur_.line, cur_.col,
                       std::string("expected ") + what + describeCur());
    std::string s = cur_.text;
    bump();
    return s;
  }

  VarId internTop(const std::string &name, int line, int col) {
    try {
      return prog_.internTopLevel(name);
    } catch (const GraphError &e) {
      throw ParseError(line, col, e.what());
    }
  }

  VarId internObj(const std::string &name, int line, int col) {
    try {
      return prog_.internObject(name);
    } catch (const GraphError &e) {
      throw ParseError(line, col, e.what());
    }
  }

  void parseFunction() {
    int fline = cur_.line, fcol = cur_.col;
    std::string name = expectIdent("function name");
    FuncId fid;
    try {
      fid = prog_.addFunction(name);
    } catch (const GraphError &e) {
      throw ParseError(fline, fcol, e.what());
    }
    Function &fn = prog_.funcs[fid];
    expect(Tok::LParen, "'('");
    if (cur_.kind != Tok::RParen) {
      for (;;) {
        int pl = cur_.line, pc = cur_.col;
        std::string p = expectIdent("parameter name");
        VarId v = internTop(p, pl, pc);
        fn.params.push_back(v);
        defined_.insert(v);
        recordDef(v, pl, pc);
        if (cur_.kind != Tok::Comma)
          break;
        bump();
      }
    }
    expect(Tok::RParen, "')'");
    expect(Tok::LBrace, "'{'");
    while (cur_.kind != Tok::RBrace) {
      if (cur_.kind == Tok::End)
        throw ParseError(cur_.line, cur_.col, "unterminated function body");
      parseStatement(fid);
    }
    bump(); // consume '}'

    // goto/br targets resolve within the enclosing function only
    for (const PendingTarget &t : pendingTargets_) {
      LabelId l = prog_.findLabel(t.name);
      if (l == kInvalidId || prog_.labels[l].func != t.func)
        throw ParseError(t.line, t.col, "undefined label target '" + t.name + "'");
      Statement &s = prog_.funcs[t.func].stmts[t.stmt];
      (t.second ? s.target2 : s.target) = l;
    }
    pendingTargets_.clear();
  }

  void parseStatement(FuncId fid) {
    int lline = cur_.line, lcol = cur_.col;
    std::string labelName = expectIdent("label");
    Function &fn = prog_.funcs[fid];
    uint32_t index = static_cast<uint32_t>(fn.stmts.size());
    LabelId label;
    try {
      label = prog_.addLabel(labelName, fid, index);
    } catch (const GraphError &e) {
      throw ParseError(lline, lcol, e.what());
    }
    expect(Tok::Colon, "':'");

    Statement s;
    s.label = label;

    switch (cur_.kind) {
    case Tok::Star: { // *p = q
      bump();
      int pl = cur_.line, pc = cur_.col;
      s.op = OpKind::Store;
      s.ptr = useTop(expectIdent("pointer"), pl, pc);
      expect(Tok::Eq, "'='");
      int sl = cur_.line, sc = cur_.col;
      s.src = useTop(expectIdent("value"), sl, sc);
      break;
    }
    case Tok::KwCall:
      parseCall(s, /*dst=*/kInvalidId);
      break;
    case Tok::KwRet: {
      bump();
      s.op = OpKind::Ret;
      // `ret v` only when the identifier is not the next statement's label
      if (cur_.kind == Tok::Ident) {
        Token save = cur_;
        Lexer probe = lex_;
        Token after = probe.next();
        if (after.kind != Tok::Colon) {
          s.src = useTop(save.text, save.line, save.col);
          bump();
        }
      }
      break;
    }
    case Tok::KwGoto: {
      bump();
      s.op = OpKind::Goto;
      pendingTargets_.push_back({fid, index, expectIdent("label"), false,
                                 lline, lcol});
      break;
    }
    case Tok::KwBr: {
      bump();
      s.op = OpKind::Br;
      int t1l = cur_.line, t1c = cur_.col;
      std::string t1 = expectIdent("label");
      int t2l = cur_.line, t2c = cur_.col;
      std::string t2 = expectIdent("label");
      if (t1 == t2)
        throw ParseError(t2l, t2c, "branch targets must differ");
      pendingTargets_.push_back({fid, index, t1, false, t1l, t1c});
      pendingTargets_.push_back({fid, index, t2, true, t2l, t2c});
      break;
    }
    case Tok::Ident: {
      int dl = cur_.line, dc = cur_.col;
      std::string dst = expectIdent("variable");
      expect(Tok::Eq, "'='");
      if (cur_.kind == Tok::KwCall) {
        s.dst = internTop(dst, dl, dc);
        defined_.insert(s.dst);
        recordDef(s.dst, dl, dc);
        parseCall(s, s.dst);
        break;
      }
      s.dst = internTop(dst, dl, dc);
      defined_.insert(s.dst);
      recordDef(s.dst, dl, dc);
      if (cur_.kind == Tok::Amp) {
        bump();
        int ol = cur_.line, oc = cur_.col;
        std::string name = expectIdent("object or variable");
        if (cur_.kind == Tok::Dot) { // gep through a top-level variable
          bump();
          s.op = OpKind::Gep;
          s.src = useTop(name, ol, oc);
          s.field = prog_.internField(expectIdent("field name"));
        } else {
          s.op = OpKind::Addr;
          s.obj = internObj(name, ol, oc);
          if (cur_.kind == Tok::KwSummary) {
            s.summaryKeyword = true;
            bump();
          }
        }
      } else if (cur_.kind == Tok::Star) {
        bump();
        int pl = cur_.line, pc = cur_.col;
        s.op = OpKind::Load;
        s.ptr = useTop(expectIdent("pointer"), pl, pc);
      } else {
        int sl = cur_.line, sc = cur_.col;
        s.op = OpKind::Copy;
        s.src = useTop(expectIdent("variable"), sl, sc);
      }
      break;
    }
    default:
      throw ParseError(cur_.line, cur_.col, "expected statement" + describeCur());
    }

    fn.stmts.push_back(std::move(s));
  }

  void parseCall(Statement &s, VarId dst) {
    expect(Tok::KwCall, "'call'");
    s.op = OpKind::Call;
    s.dst = dst;
    bool starred = false;
    if (cur_.kind == Tok::Star) {
      starred = true;
      bump();
    }
    int cl = cur_.line, cc = cur_.col;
    std::string callee = expectIdent("callee");
    FuncId owner = static_cast<FuncId>(prog_.funcs.size() - 1);
    uint32_t stmt = static_cast<uint32_t>(prog_.funcs[owner].stmts.size());
    if (starred) {
      s.ptr = useTop(callee, cl, cc);
    } else {
      // may be a forward reference to a function declared later
      pendingCallees_.push_back({owner, stmt, callee, cl, cc});
    }
    expect(Tok::LParen, "'('");
    if (cur_.kind != Tok::RParen) {
      for (;;) {
        int al = cur_.line, ac = cur_.col;
        s.args.push_back(useTop(expectIdent("argument"), al, ac));
        if (cur_.kind != Tok::Comma)
          break;
        bump();
      }
    }
    expect(Tok::RParen, "')'");
  }

  VarId useTop(const std::string &name, int line, int col) {
    VarId v = internTop(name, line, col);
    uses_.emplace(v, std::make_pair(line, col));
    return v;
  }

  void recordDef(VarId v, int line, int col) {
    defCount_[v]++;
    if (opts_.requireSsa && defCount_[v] > 1)
      throw ParseError(line, col, "variable '" + prog_.varName(v) +
                                      "' assigned more than once");
  }

  void resolveCallees() {
    for (const PendingCallee &c : pendingCallees_) {
      Statement &s = prog_.funcs[c.func].stmts[c.stmt];
      FuncId f = prog_.findFunc(c.name);
      if (f != kInvalidId) {
        s.callee = f;
        if (s.args.size() != prog_.funcs[f].params.size())
          throw ParseError(c.line, c.col,
                           "call to '" + c.name + "' with " +
                               std::to_string(s.args.size()) + " args, takes " +
                               std::to_string(prog_.funcs[f].params.size()));
      } else {
        // indirect call through a top-level variable
        VarId v = internTop(c.name, c.line, c.col);
        uses_.emplace(v, std::make_pair(c.line, c.col));
        s.ptr = v;
      }
    }
  }

  void validate() {
    if (opts_.lenient)
      return;
    for (const auto &[v, pos] : uses_) {
      if (defined_.count(v) || defCount_.count(v))
        continue;
      throw ParseError(pos.first, pos.second,
                       "use of undeclared variable '" + prog_.varName(v) + "'");
    }
  }

  Lexer lex_;
  ParseOptions opts_;
  Token cur_;
  Program prog_;
  std::vector<PendingTarget> pendingTargets_;
  std::vector<PendingCallee> pendingCallees_;
  std::set<VarId> defined_;
  std::map<VarId, uint32_t> defCount_;
  std::map<VarId, std::pair<int, int>> uses_;
};

} // namespace

Program parseProgram(std::string_view text, const ParseOptions &opts) {
  return Parser(text, opts).run();
}

} // namespace fspta
