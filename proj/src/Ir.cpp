#include "fspta/Ir.hpp"

#include <cassert>

namespace fspta {

const char *opName(OpKind op) {
  switch (op) {
  case OpKind::Addr:
    return "addr";
  case OpKind::Copy:
    return "copy";
  case OpKind::Gep:
    return "gep";
  case OpKind::Load:
    return "load";
  case OpKind::Store:
    return "store";
  case OpKind::Call:
    return "call";
  case OpKind::Ret:
    return "ret";
  case OpKind::Goto:
    return "goto";
  case OpKind::Br:
    return "br";
  }
  return "?";
}

VarId Program::internTopLevel(const std::string &name) {
  auto it = varByName_.find(name);
  if (it != varByName_.end()) {
    if (vars[it->second].kind != VarKind::TopLevel)
      throw GraphError("variable '" + name +
                       "' used as both top-level and address-taken");
    return it->second;
  }
  VarId id = static_cast<VarId>(vars.size());
  vars.push_back(Variable{name, VarKind::TopLevel});
  varByName_.emplace(name, id);
  return id;
}

VarId Program::internObject(const std::string &name) {
  auto it = varByName_.find(name);
  if (it != varByName_.end()) {
    if (vars[it->second].kind != VarKind::Object)
      throw GraphError("variable '" + name +
                       "' used as both top-level and address-taken");
    return it->second;
  }
  VarId id = static_cast<VarId>(vars.size());
  vars.push_back(Variable{name, VarKind::Object});
  varByName_.emplace(name, id);
  return id;
}

FieldId Program::internField(const std::string &name) {
  auto it = fieldByName_.find(name);
  if (it != fieldByName_.end())
    return it->second;
  FieldId id = static_cast<FieldId>(fieldNames.size());
  fieldNames.push_back(name);
  fieldByName_.emplace(name, id);
  return id;
}

FuncId Program::addFunction(const std::string &name) {
  if (funcByName_.count(name))
    throw GraphError("duplicate function '" + name + "'");
  FuncId id = static_cast<FuncId>(funcs.size());
  Function f;
  f.name = name;
  f.funcObj = internObject(name);
  vars[f.funcObj].func = id;
  f.retVar = internTopLevel(name + ".ret");
  funcs.push_back(std::move(f));
  funcByName_.emplace(name, id);
  return id;
}

LabelId Program::addLabel(const std::string &name, FuncId f, uint32_t stmtIndex) {
  if (labelByName_.count(name))
    throw GraphError("duplicate label '" + name + "'");
  LabelId id = static_cast<LabelId>(labels.size());
  labels.push_back(LabelInfo{name, f, stmtIndex});
  labelByName_.emplace(name, id);
  return id;
}

VarId Program::gepObject(VarId base, FieldId field) {
  const Variable &b = vars[base];
  assert(b.kind == VarKind::Object);
  if (b.isFieldObj())
    throw GraphError("field of field object '" + b.name + "' (single-level)");
  if (b.isFunctionObj())
    throw GraphError("field of function object '" + b.name + "'");
  uint64_t key = (uint64_t(base) << 32) | field;
  auto it = fieldObjByKey_.find(key);
  if (it != fieldObjByKey_.end())
    return it->second;
  VarId id = static_cast<VarId>(vars.size());
  Variable v;
  v.name = b.name + "." + fieldNames[field];
  v.kind = VarKind::Object;
  v.summary = b.summary; // field objects inherit the base's summary flag
  v.fieldBase = base;
  v.field = field;
  vars.push_back(std::move(v));
  fieldObjByKey_.emplace(key, id);
  varByName_.emplace(vars[id].name, id);
  return id;
}

VarId Program::findGepObject(VarId base, FieldId field) const {
  auto it = fieldObjByKey_.find((uint64_t(base) << 32) | field);
  return it == fieldObjByKey_.end() ? kInvalidId : it->second;
}

VarId Program::findVar(const std::string &name) const {
  auto it = varByName_.find(name);
  return it == varByName_.end() ? kInvalidId : it->second;
}

FuncId Program::findFunc(const std::string &name) const {
  auto it = funcByName_.find(name);
  return it == funcByName_.end() ? kInvalidId : it->second;
}

LabelId Program::findLabel(const std::string &name) const {
  auto it = labelByName_.find(name);
  return it == labelByName_.end() ? kInvalidId : it->second;
}

FieldId Program::findField(const std::string &name) const {
  auto it = fieldByName_.find(name);
  return it == fieldByName_.end() ? kInvalidId : it->second;
}

const Statement &Program::stmtOf(LabelId l) const {
  const LabelInfo &info = labels[l];
  return funcs[info.func].stmts[info.stmtIndex];
}

std::string printStatement(const Program &p, const Statement &s) {
  std::string out = p.labelName(s.label) + ": ";
  switch (s.op) {
  case OpKind::Addr:
    out += p.varName(s.dst) + " = &" + p.varName(s.obj);
    if (s.summaryKeyword)
      out += " summary";
    break;
  case OpKind::Copy:
    out += p.varName(s.dst) + " = " + p.varName(s.src);
    break;
  case OpKind::Gep:
    out += p.varName(s.dst) + " = &" + p.varName(s.src) + "." +
           p.fieldNames[s.field];
    break;
  case OpKind::Load:
    out += p.varName(s.dst) + " = *" + p.varName(s.ptr);
    break;
  case OpKind::Store:
    out += "*" + p.varName(s.ptr) + " = " + p.varName(s.src);
    break;
  case OpKind::Call: {
    if (s.dst != kInvalidId)
      out += p.varName(s.dst) + " = ";
    out += "call ";
    if (s.isIndirectCall())
      out += "*" + p.varName(s.ptr);
    else
      out += p.funcs[s.callee].name;
    out += "(";
    for (size_t i = 0; i < s.args.size(); ++i) {
      if (i)
        out += ", ";
      out += p.varName(s.args[i]);
    }
    out += ")";
    break;
  }
  case OpKind::Ret:
    out += "ret";
    if (s.src != kInvalidId)
      out += " " + p.varName(s.src);
    break;
  case OpKind::Goto:
    out += "goto " + p.labelName(s.target);
    break;
  case OpKind::Br:
    out += "br " + p.labelName(s.target) + " " + p.labelName(s.target2);
    break;
  }
  return out;
}

std::string printProgram(const Program &p) {
  std::string out;
  for (const Function &f : p.funcs) {
    out += "func " + f.name + "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i)
        out += ", ";
      out += p.varName(f.params[i]);
    }
    out += ") {\n";
    for (const Statement &s : f.stmts)
      out += "  " + printStatement(p, s) + "\n";
    out += "}\n";
  }
  return out;
}

} // namespace fspta
