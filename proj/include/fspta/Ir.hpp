#pragma once

#include "fspta/Common.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace fspta {

// Two disjoint name spaces: top-level variables (pointer registers,
// never address-taken) and address-taken objects (memory). Field objects
// and function objects live on the object side.
enum class VarKind : uint8_t { TopLevel, Object };

struct Variable {
  std::string name; // "p", "o", "o.f", "f" (function object), "f.ret"
  VarKind kind;
  bool summary = false;         // objects: may stand for several locations
  FuncId func = kInvalidId;     // set iff this is a function object
  VarId fieldBase = kInvalidId; // set iff this is a field object
  FieldId field = kInvalidId;

  bool isFunctionObj() const { return func != kInvalidId; }
  bool isFieldObj() const { return fieldBase != kInvalidId; }
};

enum class OpKind : uint8_t { Addr, Copy, Gep, Load, Store, Call, Ret, Goto, Br };

const char *opName(OpKind op);

// One flat struct for all statement forms; unused slots stay kInvalidId.
//   Addr  dst = &obj [summary]
//   Copy  dst = src
//   Gep   dst = &src.field      (src is top-level)
//   Load  dst = *ptr
//   Store *ptr = src
//   Call  [dst =] call callee(args) | call *ptr(args) — callee xor ptr
//   Ret   ret [src]
//   Goto  goto target
//   Br    br target target2
struct Statement {
  LabelId label = kInvalidId;
  OpKind op;
  VarId dst = kInvalidId;
  VarId src = kInvalidId;
  VarId obj = kInvalidId;
  VarId ptr = kInvalidId;
  FieldId field = kInvalidId;
  bool summaryKeyword = false;
  FuncId callee = kInvalidId;
  std::vector<VarId> args;
  LabelId target = kInvalidId;
  LabelId target2 = kInvalidId;

  bool isIndirectCall() const { return op == OpKind::Call && ptr != kInvalidId; }
  bool isTerminator() const {
    return op == OpKind::Ret || op == OpKind::Goto || op == OpKind::Br;
  }
};

struct Function {
  std::string name;
  std::vector<VarId> params;
  VarId retVar = kInvalidId;  // synthesized top-level "<name>.ret"
  VarId funcObj = kInvalidId; // object whose address `&name` yields
  std::vector<Statement> stmts;
};

struct LabelInfo {
  std::string name;
  FuncId func;
  uint32_t stmtIndex; // position inside the owning function
};

// Labels are globally unique and densely numbered in declaration order,
// so LabelId comparisons follow textual order.
class Program {
public:
  std::vector<Variable> vars;
  std::vector<Function> funcs;
  std::vector<LabelInfo> labels;
  std::vector<std::string> fieldNames;

  VarId internTopLevel(const std::string &name);
  VarId internObject(const std::string &name);
  FieldId internField(const std::string &name);
  FuncId addFunction(const std::string &name); // creates funcObj + retVar
  LabelId addLabel(const std::string &name, FuncId f, uint32_t stmtIndex);

  // Interns the field object base.field. Errors on field-of-field and on
  // function objects: fields are single-level and functions have none.
  VarId gepObject(VarId base, FieldId field);
  VarId findGepObject(VarId base, FieldId field) const;

  VarId findVar(const std::string &name) const;
  FuncId findFunc(const std::string &name) const;
  LabelId findLabel(const std::string &name) const;
  FieldId findField(const std::string &name) const;

  const Variable &var(VarId v) const { return vars[v]; }
  const std::string &varName(VarId v) const { return vars[v].name; }
  const std::string &labelName(LabelId l) const { return labels[l].name; }
  const Statement &stmtOf(LabelId l) const;
  size_t numLabels() const { return labels.size(); }

  bool isObject(VarId v) const { return vars[v].kind == VarKind::Object; }

private:
  std::unordered_map<std::string, VarId> varByName_;
  std::unordered_map<std::string, FuncId> funcByName_;
  std::unordered_map<std::string, LabelId> labelByName_;
  std::unordered_map<std::string, FieldId> fieldByName_;
  std::unordered_map<uint64_t, VarId> fieldObjByKey_; // (base, field)
};

// Canonical text form; parse(printProgram(p)) is structurally identical
// to p, and genprog emits through this printer.
std::string printStatement(const Program &p, const Statement &s);
std::string printProgram(const Program &p);

} // namespace fspta
