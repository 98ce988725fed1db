// Copyright 2026 The l4ptr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "l4ptr/minic/typecheck.hpp"

#include <set>

#include "l4ptr/error.hpp"
#include "l4ptr/minic/parser.hpp"

namespace l4ptr::minic {

Layout::Layout(const Program& program) : program_(&program) {}

std::uint64_t Layout::struct_size(const std::string& name) const {
  if (auto it = struct_sizes_.find(name); it != struct_sizes_.end()) return it->second;
  const StructDef* def = program_->find_struct(name);
  if (def == nullptr) throw TypeError("unknown struct '" + name + "'");
  if (!in_progress_.insert(name).second) throw TypeError("struct '" + name + "' contains itself by value");
  std::uint64_t total = 0;
  for (const auto& f : def->fields) {
    const std::uint64_t sz = size_of(f.type);
    total += (sz + 7) / 8 * 8;
  }
  in_progress_.erase(name);
  struct_sizes_[name] = total;
  return total;
}

std::uint64_t Layout::size_of(const Type& type) const {
  switch (type.kind()) {
    case TypeKind::Void: throw TypeError("void has no size");
    case TypeKind::Int: return static_cast<std::uint64_t>(type.bits() / 8);
    case TypeKind::Ptr: return 8;
    case TypeKind::L4: return 16;
    case TypeKind::Array: return type.count() * size_of(type.elem());
    case TypeKind::Struct: return struct_size(type.name());
  }
  return 0;
}

const Field* Layout::find_field(const std::string& struct_name, const std::string& field) const {
  const StructDef* def = program_->find_struct(struct_name);
  if (def == nullptr) return nullptr;
  for (const auto& f : def->fields) {
    if (f.name == field) return &f;
  }
  return nullptr;
}

std::uint64_t Layout::field_offset(const std::string& struct_name, const std::string& field) const {
  const StructDef* def = program_->find_struct(struct_name);
  if (def == nullptr) throw TypeError("unknown struct '" + struct_name + "'");
  std::uint64_t offset = 0;
  for (const auto& f : def->fields) {
    if (f.name == field) return offset;
    offset += (size_of(f.type) + 7) / 8 * 8;
  }
  throw TypeError("struct '" + struct_name + "' has no field '" + field + "'");
}

namespace {

class Checker {
 public:
  Checker(const Program& p, bool instrumented) : prog_(p), layout_(p), instrumented_(instrumented) {}

  Program run() {
    Program out = prog_;
    for (const auto& s : prog_.structs) {
      for (const auto& f : s.fields) check_decl_type(f.type, "field '" + s.name + "." + f.name + "'");
      layout_.size_of(Type::struct_ref(s.name));
    }
    for (const auto& g : prog_.globals) {
      check_decl_type(g.type, "global '" + g.name + "'");
      if (!g.type.is_array()) throw TypeError("global '" + g.name + "' must have array type");
      layout_.size_of(g.type);
    }
    for (const auto& e : prog_.externs) {
      for (const auto& t : e.params) {
        if (!t.is_scalar() || t.contains_l4()) throw TypeError("extern '" + e.name + "': parameters must be integers or ptr");
        check_decl_type(t, "extern '" + e.name + "'");
      }
      if (!(e.ret.is_void() || (e.ret.is_scalar() && !e.ret.contains_l4()))) {
        throw TypeError("extern '" + e.name + "': return type must be void, an integer or ptr");
      }
      if (e.contract) {
        if (!e.ret.is_ptr()) throw TypeError("extern '" + e.name + "': size contract on non-pointer result");
        if (e.contract->from_arg &&
            (e.contract->value < 0 || static_cast<std::size_t>(e.contract->value) >= e.params.size() ||
             !e.params[e.contract->value].is_int())) {
          throw TypeError("extern '" + e.name + "': size contract names an invalid argument");
        }
      }
    }
    for (auto& fn : out.functions) check_function(fn);
    return out;
  }

 private:
  void check_decl_type(const Type& t, const std::string& what) const {
    if (!instrumented_ && t.contains_l4()) throw TypeError(what + ": L4 type in uninstrumented program");
    check_sized_refs(t, what);
  }

  void check_sized_refs(const Type& t, const std::string& what) const {
    switch (t.kind()) {
      case TypeKind::Ptr:
      case TypeKind::L4:
      case TypeKind::Array: check_sized_refs(t.elem(), what); break;
      case TypeKind::Struct:
        if (prog_.find_struct(t.name()) == nullptr) throw TypeError(what + ": unknown struct '" + t.name() + "'");
        break;
      default: break;
    }
  }

  [[noreturn]] void fail(const Instruction& ins, const std::string& msg) const {
    throw TypeError("function '" + fn_->name + "', line " + std::to_string(ins.loc.line) + ": '" +
                    print_instruction(ins) + "': " + msg);
  }

  const Type* var_type(const std::string& name) const {
    if (const Variable* v = fn_->find_variable(name)) return &v->type;
    return nullptr;
  }

  const Type& dst_type(const Instruction& ins) const {
    const Type* t = var_type(ins.dst);
    if (t == nullptr) fail(ins, "unknown variable '" + ins.dst + "'");
    if (!t->is_scalar()) fail(ins, "destination '" + ins.dst + "' is not a scalar");
    return *t;
  }

  // Type of a value operand. Immediates report i64, null reports void.
  Type operand_type(const Instruction& ins, const Operand& op) const {
    switch (op.kind) {
      case OperandKind::Var: {
        const Type* t = var_type(op.name);
        if (t == nullptr) fail(ins, "unknown variable '" + op.name + "'");
        if (!t->is_scalar()) fail(ins, "'" + op.name + "' is an array; use index");
        return *t;
      }
      case OperandKind::Imm: return Type::i64();
      case OperandKind::Null: return Type::void_type();
      case OperandKind::SizeOf:
        check_decl_type(op.type, "sizeof");
        layout_.size_of(op.type);
        return Type::i64();
      case OperandKind::AddrOf: fail(ins, "'&' is only valid as the base of l4.encode");
      case OperandKind::None: fail(ins, "missing operand");
    }
    fail(ins, "bad operand");
  }

  bool assignable(const Type& target, const Instruction& ins, const Operand& op, Type* annotated) const {
    Type t = operand_type(ins, op);
    *annotated = t;
    if (op.kind == OperandKind::Null) return target.is_pointer_like();
    if (op.kind == OperandKind::Imm || op.kind == OperandKind::SizeOf) return target.is_int();
    return t == target;
  }

  void require_assignable(const Type& target, Instruction& ins, const Operand& op) const {
    Type annotated;
    if (!assignable(target, ins, op, &annotated)) {
      fail(ins, "cannot use " + describe(op, annotated) + " as " + target.str());
    }
    ins.operand_types.push_back(annotated);
  }

  static std::string describe(const Operand& op, const Type& t) {
    if (op.kind == OperandKind::Null) return "null";
    if (op.kind == OperandKind::Imm) return "immediate " + std::to_string(op.imm);
    return "'" + op.name + "' of type " + t.str();
  }

  Type require_int(Instruction& ins, const Operand& op) const {
    Type t = operand_type(ins, op);
    if (!t.is_int()) fail(ins, "expected integer operand");
    ins.operand_types.push_back(t);
    return t;
  }

  Type require_pointer(Instruction& ins, const Operand& op, bool allow_raw) const {
    Type t = operand_type(ins, op);
    const bool ok = t.is_ptr() || (allow_raw && instrumented_ && t == Type::i64() && op.kind == OperandKind::Var);
    if (!ok) fail(ins, "expected pointer operand");
    ins.operand_types.push_back(t);
    return t;
  }

  void check_size_expr(Instruction& ins) const {
    require_int(ins, ins.size.lhs);
    if (ins.size.rhs) require_int(ins, *ins.size.rhs);
  }

  const Type& array_var(const Instruction& ins, const Operand& op) const {
    if (op.kind != OperandKind::Var && op.kind != OperandKind::AddrOf) fail(ins, "expected array variable");
    const Type* t = var_type(op.name);
    if (t == nullptr) {
      if (const Global* g = prog_.find_global(op.name)) t = &g->type;
    }
    if (t == nullptr) fail(ins, "unknown variable '" + op.name + "'");
    if (!t->is_array()) fail(ins, "'" + op.name + "' is not an array");
    return *t;
  }

  void check_function(Function& fn) {
    fn_ = &fn;
    if (!(fn.ret.is_void() || fn.ret.is_scalar())) throw TypeError("function '" + fn.name + "': bad return type");
    check_decl_type(fn.ret, "function '" + fn.name + "'");
    for (const auto& p : fn.params) {
      check_decl_type(p.type, "parameter '" + p.name + "'");
      if (!p.type.is_scalar()) throw TypeError("parameter '" + p.name + "' must be a scalar");
    }
    for (const auto& l : fn.locals) {
      check_decl_type(l.type, "variable '" + l.name + "'");
      if (!(l.type.is_scalar() || l.type.is_array())) {
        throw TypeError("variable '" + l.name + "' must be a scalar or an array");
      }
      if (l.shim && !(instrumented_ && l.type.is_ptr())) {
        throw TypeError("shim variable '" + l.name + "' must be a ptr in an instrumented program");
      }
      layout_.size_of(l.type);
    }
    std::set<std::string> labels;
    for (const auto& ins : fn.body) {
      if (ins.op == Opcode::Label) labels.insert(ins.symbol);
    }
    for (auto& ins : fn.body) {
      ins.operand_types.clear();
      for (const auto& target : ins.targets) {
        if (!labels.count(target)) fail(ins, "unknown label '" + target + "'");
      }
      if (is_l4_opcode(ins.op) && !instrumented_) fail(ins, "L4 instruction in uninstrumented program");
      check_instruction(ins);
    }
  }

  void check_instruction(Instruction& ins) const {
    switch (ins.op) {
      case Opcode::Label: return;
      case Opcode::Alloc: {
        const Type& d = dst_type(ins);
        if (!(d.is_ptr() || (instrumented_ && d == Type::i64()))) fail(ins, "alloc destination must be a pointer");
        check_size_expr(ins);
        return;
      }
      case Opcode::Free:
        require_pointer(ins, ins.args[0], true);
        return;
      case Opcode::PtrAdd: {
        const Type& d = dst_type(ins);
        Type src = require_pointer(ins, ins.args[0], false);
        if (!(src == d)) fail(ins, "ptradd result type differs from source type");
        check_size_expr(ins);
        return;
      }
      case Opcode::FieldAddr: {
        const Type& d = dst_type(ins);
        Type src = require_pointer(ins, ins.args[0], false);
        if (!src.elem().is_struct()) fail(ins, "fieldaddr through a non-struct pointer");
        const Field* f = layout_.find_field(src.elem().name(), ins.symbol);
        if (f == nullptr) fail(ins, "struct '" + src.elem().name() + "' has no field '" + ins.symbol + "'");
        if (!(d == Type::ptr(f->type))) fail(ins, "fieldaddr result must be " + Type::ptr(f->type).str());
        return;
      }
      case Opcode::Index: {
        const Type& d = dst_type(ins);
        const Type& arr = array_var(ins, ins.args[0]);
        ins.operand_types.push_back(arr);
        require_int(ins, ins.args[1]);
        if (!(d == Type::ptr(arr.elem()))) fail(ins, "index result must be " + Type::ptr(arr.elem()).str());
        return;
      }
      case Opcode::Load: {
        const Type& d = dst_type(ins);
        Type src = require_pointer(ins, ins.args[0], true);
        if (src.is_ptr() && !(src.elem() == d)) fail(ins, "load of " + src.elem().str() + " into " + d.str());
        return;
      }
      case Opcode::Store: {
        Type dst = require_pointer(ins, ins.args[0], true);
        if (dst.is_ptr()) {
          if (!dst.elem().is_scalar()) fail(ins, "store target is not a scalar");
          if (ins.access_type && !(*ins.access_type == dst.elem())) fail(ins, "store type differs from the target");
          require_assignable(dst.elem(), ins, ins.args[1]);
        } else {
          if (!ins.access_type || !ins.access_type->is_scalar()) fail(ins, "store through a raw address needs ': T'");
          require_assignable(*ins.access_type, ins, ins.args[1]);
        }
        return;
      }
      case Opcode::Mov: {
        // Between integer widths mov truncates or sign-extends.
        const Type& d = dst_type(ins);
        if (d.is_int() && ins.args[0].kind == OperandKind::Var) {
          Type src = operand_type(ins, ins.args[0]);
          if (src.is_int()) {
            ins.operand_types.push_back(src);
            return;
          }
        }
        require_assignable(d, ins, ins.args[0]);
        return;
      }
      case Opcode::IsNull: {
        if (!dst_type(ins).is_int()) fail(ins, "isnull result must be an integer");
        Type t = operand_type(ins, ins.args[0]);
        if (!t.is_pointer_like()) fail(ins, "isnull of a non-pointer");
        ins.operand_types.push_back(t);
        return;
      }
      case Opcode::Call:
      case Opcode::ExtCall: {
        const std::vector<Type>* params = nullptr;
        std::vector<Type> fn_params;
        Type ret;
        if (ins.op == Opcode::Call) {
          const Function* callee = prog_.find_function(ins.symbol);
          if (callee == nullptr) fail(ins, "unknown function '" + ins.symbol + "'");
          for (const auto& p : callee->params) fn_params.push_back(p.type);
          params = &fn_params;
          ret = callee->ret;
        } else {
          const ExternDecl* ext = prog_.find_extern(ins.symbol);
          if (ext == nullptr) fail(ins, "'" + ins.symbol + "' is not declared extern");
          params = &ext->params;
          ret = ext->ret;
        }
        if (params->size() != ins.args.size()) fail(ins, "wrong number of arguments");
        for (std::size_t i = 0; i < ins.args.size(); ++i) require_assignable((*params)[i], ins, ins.args[i]);
        if (!ins.dst.empty()) {
          if (ret.is_void()) fail(ins, "void call has no result");
          if (!(dst_type(ins) == ret)) fail(ins, "result type " + ret.str() + " assigned to " + dst_type(ins).str());
        }
        return;
      }
      case Opcode::Br:
        require_int(ins, ins.args[0]);
        return;
      case Opcode::Jmp:
        return;
      case Opcode::Ret:
        if (fn_->ret.is_void()) {
          if (!ins.args.empty()) fail(ins, "void function returns a value");
        } else if (!ins.args.empty()) {
          require_assignable(fn_->ret, ins, ins.args[0]);
        } else if (!fn_->ret.is_int()) {
          fail(ins, "missing return value");
        }
        return;
      case Opcode::L4Encode: {
        const Type& d = dst_type(ins);
        if (!d.is_l4()) fail(ins, "l4.encode result must be l4");
        const Operand& base = ins.args[0];
        if (base.kind == OperandKind::AddrOf) {
          const Type& arr = array_var(ins, base);
          if (!(Type::l4(arr.elem()) == d)) fail(ins, "l4.encode of array with mismatched element type");
          ins.operand_types.push_back(arr);
        } else {
          Type t = operand_type(ins, base);
          if (!(t == Type::i64() || t.is_ptr())) fail(ins, "l4.encode base must be i64, ptr or &array");
          ins.operand_types.push_back(t);
        }
        check_size_expr(ins);
        return;
      }
      case Opcode::L4Add: {
        const Type& d = dst_type(ins);
        Type src = operand_type(ins, ins.args[0]);
        // Field addresses change the pointee type; the bounds travel unchanged.
        if (!src.is_l4() || !d.is_l4()) fail(ins, "l4.add needs l4 operands");
        ins.operand_types.push_back(src);
        check_size_expr(ins);
        return;
      }
      case Opcode::L4MsbUpper:
      case Opcode::L4MsbLower: {
        if (!(dst_type(ins) == Type::i64())) fail(ins, "flag extraction result must be i64");
        Type src = operand_type(ins, ins.args[0]);
        if (!src.is_l4()) fail(ins, "flag extraction needs an l4 operand");
        ins.operand_types.push_back(src);
        return;
      }
      case Opcode::L4Poison: {
        if (!(dst_type(ins) == Type::i64())) fail(ins, "l4.poison result must be i64");
        Type src = operand_type(ins, ins.args[0]);
        if (!src.is_l4()) fail(ins, "l4.poison needs an l4 operand");
        ins.operand_types.push_back(src);
        require_int(ins, ins.args[1]);
        return;
      }
      case Opcode::L4Strip: {
        const Type& d = dst_type(ins);
        Type src = operand_type(ins, ins.args[0]);
        if (!src.is_l4()) fail(ins, "l4.strip needs an l4 operand");
        if (!(d == Type::i64() || d.is_ptr())) fail(ins, "l4.strip result must be i64 or a raw pointer");
        ins.operand_types.push_back(src);
        return;
      }
      default:
        break;
    }
    // Binary operators.
    const Type& d = dst_type(ins);
    if (!d.is_int()) fail(ins, "arithmetic result must be an integer");
    Type a = operand_type(ins, ins.args[0]);
    Type b = operand_type(ins, ins.args[1]);
    if (ins.op == Opcode::Eq || ins.op == Opcode::Ne) {
      const bool ints = (a.is_int() || a.is_void()) && (b.is_int() || b.is_void()) && !(a.is_void() && b.is_void());
      const bool a_null = ins.args[0].kind == OperandKind::Null;
      const bool b_null = ins.args[1].kind == OperandKind::Null;
      const bool ptrs = (a.is_pointer_like() && (b == a || b_null)) || (b.is_pointer_like() && a_null);
      if ((a_null || b_null) ? !ptrs : !(ints || ptrs)) fail(ins, "incomparable operands");
    } else if (!a.is_int() || !b.is_int()) {
      fail(ins, "arithmetic on non-integer operands");
    }
    ins.operand_types.push_back(a);
    ins.operand_types.push_back(b);
  }

  const Program& prog_;
  Layout layout_;
  bool instrumented_;
  const Function* fn_ = nullptr;
};

}  // namespace

Program typecheck(const Program& program, CheckMode mode) {
  const bool instrumented =
      mode == CheckMode::Instrumented || (mode == CheckMode::Auto && program.is_instrumented());
  return Checker(program, instrumented).run();
}

}  // namespace l4ptr::minic
