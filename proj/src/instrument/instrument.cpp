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

#include "l4ptr/instrument.hpp"

#include <map>
#include <set>
#include <unordered_set>

#include "l4ptr/error.hpp"
#include "l4ptr/l4core.hpp"
#include "l4ptr/minic/typecheck.hpp"

namespace l4ptr::instrument {

using minic::Function;
using minic::Instruction;
using minic::Opcode;
using minic::Operand;
using minic::OperandKind;
using minic::Program;
using minic::SizeExpr;
using minic::Type;
using minic::TypeKind;
using minic::Variable;

namespace {

Type to_l4(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Ptr: return Type::l4(to_l4(t.elem()));
    case TypeKind::Array: return Type::array(to_l4(t.elem()), t.count());
    default: return t;
  }
}

Type to_ptr(const Type& t) {
  switch (t.kind()) {
    case TypeKind::L4: return Type::ptr(to_ptr(t.elem()));
    case TypeKind::Ptr: return Type::ptr(to_ptr(t.elem()));
    case TypeKind::Array: return Type::array(to_ptr(t.elem()), t.count());
    default: return t;
  }
}

// The same program with every L4 type turned back into a raw pointer; used
// to recover the layout the program had before rewrite_types.
Program demote(const Program& p) {
  Program out;
  out.structs = p.structs;
  for (auto& s : out.structs) {
    for (auto& f : s.fields) f.type = to_ptr(f.type);
  }
  return out;
}

void rewrite_operand_type(Operand& op) {
  if (op.kind == OperandKind::SizeOf) op.type = to_l4(op.type);
}

// Hands out names that do not collide with anything already declared.
class NameSource {
 public:
  NameSource(const Program& p, const Function& fn) {
    for (const auto& g : p.globals) used_.insert(g.name);
    for (const auto& v : fn.params) used_.insert(v.name);
    for (const auto& v : fn.locals) used_.insert(v.name);
  }

  std::string fresh(const std::string& base) {
    std::string name = base;
    for (int i = 1; used_.count(name); ++i) name = base + "." + std::to_string(i);
    used_.insert(name);
    return name;
  }

 private:
  std::unordered_set<std::string> used_;
};

const Type* variable_type(const Function& fn, const std::string& name) {
  const Variable* v = fn.find_variable(name);
  return v ? &v->type : nullptr;
}

bool is_l4_var(const Function& fn, const Operand& op) {
  if (op.kind != OperandKind::Var) return false;
  const Type* t = variable_type(fn, op.name);
  return t && t->is_l4();
}

Instruction make(Opcode op, std::string dst, std::vector<Operand> args, const minic::SourceLoc& loc) {
  Instruction ins;
  ins.op = op;
  ins.dst = std::move(dst);
  ins.args = std::move(args);
  ins.loc = loc;
  return ins;
}

bool mentions_sizeof(const SizeExpr& e) {
  return e.lhs.kind == OperandKind::SizeOf || (e.rhs && e.rhs->kind == OperandKind::SizeOf);
}

bool all_immediate(const SizeExpr& e) {
  return e.lhs.kind == OperandKind::Imm && (!e.rhs || e.rhs->kind == OperandKind::Imm);
}

std::int64_t immediate_value(const SizeExpr& e) { return e.lhs.imm * (e.rhs ? e.rhs->imm : 1); }

bool sizeof_changed(const SizeExpr& e, const minic::Layout& before, const minic::Layout& after) {
  for (const Operand* op : {&e.lhs, e.rhs ? &*e.rhs : nullptr}) {
    if (op && op->kind == OperandKind::SizeOf && before.size_of(to_ptr(op->type)) != after.size_of(op->type)) {
      return true;
    }
  }
  return false;
}

}  // namespace

Program rewrite_types(const Program& program, InstrumentationReport* report) {
  if (program.is_instrumented()) throw InstrumentError("program already contains L4 types");
  Program out = program;
  int decls = 0;
  auto rewrite = [&decls](Type& t) {
    Type n = to_l4(t);
    if (!(n == t)) {
      ++decls;
      t = std::move(n);
    }
  };
  for (auto& s : out.structs) {
    for (auto& f : s.fields) rewrite(f.type);
  }
  for (auto& g : out.globals) rewrite(g.type);
  for (auto& fn : out.functions) {
    rewrite(fn.ret);
    for (auto& v : fn.params) rewrite(v.type);
    for (auto& v : fn.locals) rewrite(v.type);
    for (auto& ins : fn.body) {
      for (auto& a : ins.args) rewrite_operand_type(a);
      rewrite_operand_type(ins.size.lhs);
      if (ins.size.rhs) rewrite_operand_type(*ins.size.rhs);
    }
  }
  if (report) {
    report->pointer_decls += decls;
    const minic::Layout before(program);
    const minic::Layout after(out);
    for (const auto& s : program.structs) {
      if (before.size_of(Type::struct_ref(s.name)) != after.size_of(Type::struct_ref(s.name))) {
        ++report->struct_layouts_changed;
      }
    }
  }
  return out;
}

Program rewrite_allocs(const Program& program, InstrumentationReport* report) {
  Program out = program;
  const Program old_shape = demote(program);
  const minic::Layout before(old_shape);
  const minic::Layout after(program);
  for (auto& fn : out.functions) {
    NameSource names(out, fn);
    std::map<std::string, std::string> raw_names;
    std::vector<Instruction> body;
    for (auto& ins : fn.body) {
      const Type* dt = ins.op == Opcode::Alloc ? variable_type(fn, ins.dst) : nullptr;
      if (dt == nullptr || !dt->is_l4()) {
        body.push_back(std::move(ins));
        continue;
      }
      const Type pointee = dt->elem();
      const std::uint64_t old_size = before.size_of(to_ptr(pointee));
      const std::uint64_t new_size = after.size_of(pointee);
      bool rewritten = false;
      if (mentions_sizeof(ins.size)) {
        rewritten = sizeof_changed(ins.size, before, after);
      } else if (all_immediate(ins.size)) {
        const std::int64_t bytes = immediate_value(ins.size);
        if (old_size != new_size) {
          if (bytes > 0 && static_cast<std::uint64_t>(bytes) % old_size == 0) {
            ins.size = SizeExpr{Operand::immediate(bytes / static_cast<std::int64_t>(old_size)),
                                Operand::size_of(pointee)};
            rewritten = true;
          } else if (report) {
            report->warnings.push_back({"NonScalableSize", fn.name, ins.loc.line,
                                        "constant size " + std::to_string(bytes) + " is not a multiple of sizeof(" +
                                            to_ptr(pointee).str() + ")"});
          }
        }
      } else if (report) {
        report->warnings.push_back({"NonScalableSize", fn.name, ins.loc.line,
                                    "size of alloc into '" + ins.dst + "' cannot be attributed to a type"});
      }
      if (rewritten && report) ++report->alloc_size_rewrites;

      auto [it, inserted] = raw_names.try_emplace(ins.dst);
      if (inserted) {
        it->second = names.fresh(ins.dst + ".raw");
        fn.locals.push_back({it->second, Type::i64(), false, ins.loc});
      }
      Instruction encode = make(Opcode::L4Encode, ins.dst, {Operand::var(it->second)}, ins.loc);
      encode.size = ins.size;
      ins.dst = it->second;
      body.push_back(std::move(ins));
      body.push_back(std::move(encode));
    }
    fn.body = std::move(body);
  }
  return out;
}

Program wrap_stack_arrays(const Program& program, InstrumentationReport* report) {
  Program out = program;
  const minic::Layout layout(program);
  for (auto& fn : out.functions) {
    NameSource names(out, fn);
    std::map<std::string, std::string> companions;
    std::vector<Instruction> prologue;

    auto companion_for = [&](const std::string& array, const Type& type, const minic::SourceLoc& loc) {
      auto [it, inserted] = companions.try_emplace(array);
      if (inserted) {
        it->second = names.fresh(array + ".l4");
        fn.locals.push_back({it->second, Type::l4(type.elem()), false, loc});
        Instruction encode = make(Opcode::L4Encode, it->second, {Operand::addr_of(array)}, loc);
        encode.size = SizeExpr{Operand::immediate(static_cast<std::int64_t>(layout.size_of(type))), std::nullopt};
        prologue.push_back(std::move(encode));
        if (report) ++report->stack_arrays_wrapped;
      }
      return it->second;
    };

    // Every local array gets a companion; globals only where they are used.
    for (const auto& v : std::vector<Variable>(fn.locals)) {
      if (v.type.is_array()) companion_for(v.name, v.type, v.loc);
    }
    for (auto& ins : fn.body) {
      if (ins.op != Opcode::Index) continue;
      const std::string& array = ins.args[0].name;
      Type type;
      if (const Type* local = variable_type(fn, array)) {
        type = *local;
      } else if (const minic::Global* g = out.find_global(array)) {
        type = g->type;
      } else {
        throw InstrumentError("index of unknown array '" + array + "'");
      }
      const std::string companion = companion_for(array, type, ins.loc);
      ins.op = Opcode::PtrAdd;
      ins.size = SizeExpr{ins.args[1], Operand::size_of(type.elem())};
      ins.args = {Operand::var(companion)};
    }
    fn.body.insert(fn.body.begin(), prologue.begin(), prologue.end());
  }
  return out;
}

Program instrument_derefs(const Program& program, const Options& options, InstrumentationReport* report) {
  Program out = program;
  const minic::Layout layout(program);
  for (auto& fn : out.functions) {
    NameSource names(out, fn);
    std::map<std::string, std::string> temps;
    auto temp = [&](const std::string& role) {
      auto [it, inserted] = temps.try_emplace(role);
      if (inserted) {
        it->second = names.fresh("__" + role);
        fn.locals.push_back({it->second, Type::i64(), false, fn.loc});
      }
      return it->second;
    };

    // Emits the flag-mask sequence for `ptr` and returns the masked address variable.
    auto mask = [&](std::vector<Instruction>& body, const std::string& ptr, const Type& ptr_type,
                    const minic::SourceLoc& loc) {
      const std::string tu = temp("tu");
      const std::string tl = temp("tl");
      const std::string tag = temp("tag");
      const std::string addr = temp("addr");
      body.push_back(make(Opcode::L4MsbUpper, tu, {Operand::var(ptr)}, loc));
      body.push_back(make(Opcode::L4MsbLower, tl, {Operand::var(ptr)}, loc));
      body.push_back(make(Opcode::Or, tag, {Operand::var(tu), Operand::var(tl)}, loc));
      const std::uint64_t width = layout.size_of(ptr_type.elem());
      if (options.width_aware && width > 1) {
        const std::string last = names.fresh("__last");
        fn.locals.push_back({last, ptr_type, false, loc});
        Instruction end = make(Opcode::L4Add, last, {Operand::var(ptr)}, loc);
        end.size = SizeExpr{Operand::immediate(static_cast<std::int64_t>(width - 1)), std::nullopt};
        body.push_back(std::move(end));
        body.push_back(make(Opcode::L4MsbUpper, tu, {Operand::var(last)}, loc));
        body.push_back(make(Opcode::L4MsbLower, tl, {Operand::var(last)}, loc));
        body.push_back(make(Opcode::Or, tag, {Operand::var(tag), Operand::var(tu)}, loc));
        body.push_back(make(Opcode::Or, tag, {Operand::var(tag), Operand::var(tl)}, loc));
      }
      body.push_back(make(Opcode::L4Poison, addr, {Operand::var(ptr), Operand::var(tag)}, loc));
      if (report) ++report->derefs_instrumented;
      return addr;
    };

    std::vector<Instruction> body;
    for (auto& ins : fn.body) {
      switch (ins.op) {
        case Opcode::PtrAdd:
          if (is_l4_var(fn, ins.args[0])) {
            ins.op = Opcode::L4Add;
            if (report) ++report->pointer_arith_lowered;
          }
          break;
        case Opcode::FieldAddr:
          if (is_l4_var(fn, ins.args[0])) {
            const Type& st = variable_type(fn, ins.args[0].name)->elem();
            const std::uint64_t off = layout.field_offset(st.name(), ins.symbol);
            ins.op = Opcode::L4Add;
            ins.size = SizeExpr{Operand::immediate(static_cast<std::int64_t>(off)), std::nullopt};
            ins.symbol.clear();
            if (report) ++report->pointer_arith_lowered;
          }
          break;
        case Opcode::Load:
        case Opcode::Store: {
          const std::size_t slot = 0;
          if (is_l4_var(fn, ins.args[slot])) {
            const std::string ptr = ins.args[slot].name;
            const Type ptr_type = *variable_type(fn, ptr);
            ins.args[slot] = Operand::var(mask(body, ptr, ptr_type, ins.loc));
            if (ins.op == Opcode::Store) ins.access_type = ptr_type.elem();
          }
          break;
        }
        case Opcode::Free:
          if (is_l4_var(fn, ins.args[0])) {
            const std::string base = temp("base");
            body.push_back(make(Opcode::L4Strip, base, {ins.args[0]}, ins.loc));
            ins.args[0] = Operand::var(base);
          }
          break;
        default:
          break;
      }
      body.push_back(std::move(ins));
    }
    fn.body = std::move(body);
  }
  return out;
}

Program strip_external_calls(const Program& program, InstrumentationReport* report) {
  Program out = program;
  for (auto& fn : out.functions) {
    NameSource names(out, fn);
    std::vector<Instruction> body;
    for (auto& ins : fn.body) {
      if (ins.op != Opcode::ExtCall) {
        body.push_back(std::move(ins));
        continue;
      }
      const minic::ExternDecl* ext = out.find_extern(ins.symbol);
      if (ext == nullptr) throw InstrumentError("extcall of undeclared '" + ins.symbol + "'");
      bool touched = false;
      const std::vector<Operand> original_args = ins.args;
      for (std::size_t i = 0; i < ins.args.size(); ++i) {
        if (!is_l4_var(fn, ins.args[i])) continue;
        const std::string shim = names.fresh(ins.args[i].name + ".shim");
        fn.locals.push_back({shim, ext->params[i], true, ins.loc});
        body.push_back(make(Opcode::L4Strip, shim, {ins.args[i]}, ins.loc));
        ins.args[i] = Operand::var(shim);
        touched = true;
      }
      const Type* dt = ins.dst.empty() ? nullptr : variable_type(fn, ins.dst);
      if (dt && dt->is_l4()) {
        const std::string result = ins.dst;
        const std::string shim = names.fresh(result + ".shim");
        fn.locals.push_back({shim, ext->ret, true, ins.loc});
        ins.dst = shim;
        Instruction wrap = make(Opcode::L4Encode, result, {Operand::var(shim)}, ins.loc);
        if (ext->contract && ext->contract->from_arg) {
          wrap.size = SizeExpr{original_args[ext->contract->value], std::nullopt};
        } else if (ext->contract) {
          wrap.size = SizeExpr{Operand::immediate(ext->contract->value), std::nullopt};
        } else {
          wrap.size = SizeExpr{Operand::immediate(static_cast<std::int64_t>(kMaxObjectSize)), std::nullopt};
          if (report) {
            report->unbounded_results.push_back({"UnboundedExternalResult", fn.name, ins.loc.line,
                                                 "result of '" + ins.symbol + "' has no size contract"});
          }
        }
        body.push_back(std::move(ins));
        body.push_back(std::move(wrap));
        touched = true;
      } else {
        body.push_back(std::move(ins));
      }
      if (touched && report) ++report->extcalls_stripped;
    }
    fn.body = std::move(body);
  }
  return out;
}

std::pair<Program, InstrumentationReport> instrument(const Program& program, const Options& options) {
  if (program.is_instrumented()) throw InstrumentError("program is already instrumented");
  const Program checked = minic::typecheck(program, minic::CheckMode::Source);
  InstrumentationReport report;
  Program p = rewrite_types(checked, &report);
  p = rewrite_allocs(p, &report);
  p = wrap_stack_arrays(p, &report);
  p = instrument_derefs(p, options, &report);
  p = strip_external_calls(p, &report);
  p = minic::typecheck(p, minic::CheckMode::Instrumented);
  return {std::move(p), std::move(report)};
}

std::vector<std::string> raw_pointer_leaks(const Program& program) {
  std::vector<std::string> leaks;
  for (const auto& s : program.structs) {
    for (const auto& f : s.fields) {
      if (f.type.contains_ptr()) leaks.push_back("field " + s.name + "." + f.name);
    }
  }
  for (const auto& g : program.globals) {
    if (g.type.contains_ptr()) leaks.push_back("global " + g.name);
  }
  for (const auto& fn : program.functions) {
    if (fn.ret.contains_ptr()) leaks.push_back("return of " + fn.name);
    for (const auto& v : fn.params) {
      if (v.type.contains_ptr()) leaks.push_back("parameter " + fn.name + "." + v.name);
    }
    for (const auto& v : fn.locals) {
      if (!v.shim && v.type.contains_ptr()) leaks.push_back("variable " + fn.name + "." + v.name);
    }
    for (const auto& ins : fn.body) {
      for (const auto& a : ins.args) {
        if (a.kind == OperandKind::SizeOf && a.type.contains_ptr()) leaks.push_back("sizeof in " + fn.name);
      }
    }
  }
  return leaks;
}

BranchScan scan_bounds_branches(const Program& program) {
  BranchScan scan;
  for (const auto& fn : program.functions) {
    // Values derived from extracted flags, propagated through integer ops.
    std::set<std::string> tainted;
    const auto& body = fn.body;
    for (std::size_t i = 0; i < body.size(); ++i) {
      const Instruction& ins = body[i];
      const bool flag_source = ins.op == Opcode::L4MsbUpper || ins.op == Opcode::L4MsbLower;
      bool uses_taint = false;
      for (const auto& a : ins.args) {
        if (a.kind == OperandKind::Var && tainted.count(a.name)) uses_taint = true;
      }
      if (ins.op == Opcode::Br && uses_taint) ++scan.flag_dependent_branches;
      if (!ins.dst.empty()) {
        const bool propagates = minic::is_binary(ins.op) || ins.op == Opcode::Mov || ins.op == Opcode::L4Poison;
        if (flag_source || (uses_taint && propagates)) {
          tainted.insert(ins.dst);
        } else {
          tainted.erase(ins.dst);
        }
      }
    }
    // Each lowered sequence runs from the first flag extraction on the
    // pointer to the access that consumes the poisoned address.
    std::size_t previous_end = 0;
    for (std::size_t k = 0; k < body.size(); ++k) {
      if (body[k].op != Opcode::L4Poison) continue;
      ++scan.deref_sequences;
      const std::string& ptr = body[k].args[0].name;
      std::size_t start = k;
      for (std::size_t j = previous_end; j < k; ++j) {
        if (body[j].op == Opcode::L4MsbUpper && body[j].args[0].name == ptr) {
          start = j;
          break;
        }
      }
      bool branched = start == k || k + 1 >= body.size();
      for (std::size_t j = start; j <= k + 1 && j < body.size(); ++j) {
        const Opcode op = body[j].op;
        if (op == Opcode::Br || op == Opcode::Jmp || op == Opcode::Label || op == Opcode::Call ||
            op == Opcode::Ret) {
          branched = true;
        }
      }
      if (k + 1 < body.size()) {
        const Instruction& access = body[k + 1];
        const bool consumes = (access.op == Opcode::Load || access.op == Opcode::Store) &&
                              access.args[0].kind == OperandKind::Var && access.args[0].name == body[k].dst;
        if (!consumes) branched = true;
      }
      if (branched) ++scan.sequences_with_branches;
      previous_end = k + 1;
    }
  }
  return scan;
}

}  // namespace l4ptr::instrument
