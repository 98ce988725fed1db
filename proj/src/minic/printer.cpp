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

#include <string>

#include "l4ptr/minic/parser.hpp"

namespace l4ptr::minic {

namespace {

std::string operand(const Operand& op) {
  switch (op.kind) {
    case OperandKind::None: return "";
    case OperandKind::Var: return op.name;
    case OperandKind::Imm: return std::to_string(op.imm);
    case OperandKind::Null: return "null";
    case OperandKind::SizeOf: return "sizeof(" + op.type.str() + ")";
    case OperandKind::AddrOf: return "&" + op.name;
  }
  return "";
}

std::string size_expr(const SizeExpr& e) {
  std::string s = operand(e.lhs);
  if (e.rhs) s += " * " + operand(*e.rhs);
  return s;
}

std::string join_args(const std::vector<Operand>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ", ";
    s += operand(args[i]);
  }
  return s;
}

}  // namespace

std::string print_type(const Type& type) { return type.str(); }

std::string print_instruction(const Instruction& ins) {
  if (ins.op == Opcode::Label) return ins.symbol + ":";
  std::string s(opcode_name(ins.op));
  switch (ins.op) {
    case Opcode::Alloc:
      return s + " " + ins.dst + ", " + size_expr(ins.size);
    case Opcode::PtrAdd:
    case Opcode::L4Add:
    case Opcode::L4Encode:
      return s + " " + ins.dst + ", " + operand(ins.args[0]) + ", " + size_expr(ins.size);
    case Opcode::FieldAddr:
      return s + " " + ins.dst + ", " + operand(ins.args[0]) + ", " + ins.symbol;
    case Opcode::Call:
    case Opcode::ExtCall:
      return s + " " + (ins.dst.empty() ? "" : ins.dst + ", ") + ins.symbol + "(" + join_args(ins.args) + ")";
    case Opcode::Br:
      return s + " " + operand(ins.args[0]) + ", " + ins.targets[0] + ", " + ins.targets[1];
    case Opcode::Jmp:
      return s + " " + ins.targets[0];
    case Opcode::Ret:
      return ins.args.empty() ? s : s + " " + operand(ins.args[0]);
    case Opcode::Store:
      return s + " " + join_args(ins.args) + (ins.access_type ? " : " + ins.access_type->str() : "");
    case Opcode::Free:
      return s + " " + join_args(ins.args);
    default:
      return s + " " + ins.dst + ", " + join_args(ins.args);
  }
}

std::string print(const Program& program) {
  std::string out;
  auto section_break = [&out] {
    if (!out.empty()) out += "\n";
  };

  for (const auto& st : program.structs) {
    section_break();
    out += "struct " + st.name + " {\n";
    for (const auto& f : st.fields) out += "  " + f.name + ": " + f.type.str() + ",\n";
    out += "}\n";
  }
  if (!program.globals.empty()) {
    section_break();
    for (const auto& g : program.globals) out += "global " + g.name + ": " + g.type.str() + "\n";
  }
  if (!program.externs.empty()) {
    section_break();
    for (const auto& e : program.externs) {
      out += "extern " + e.name + "(";
      for (std::size_t i = 0; i < e.params.size(); ++i) {
        if (i) out += ", ";
        out += e.params[i].str();
      }
      out += ") -> " + e.ret.str();
      if (e.contract) {
        out += " size(" + std::string(e.contract->from_arg ? "arg " : "") + std::to_string(e.contract->value) + ")";
      }
      out += "\n";
    }
  }
  for (const auto& fn : program.functions) {
    section_break();
    out += "fn " + fn.name + "(";
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      if (i) out += ", ";
      out += fn.params[i].name + ": " + fn.params[i].type.str();
    }
    out += ") -> " + fn.ret.str() + " {\n";
    for (const auto& v : fn.locals) {
      out += std::string(v.shim ? "  shim " : "  var ") + v.name + ": " + v.type.str() + "\n";
    }
    for (const auto& ins : fn.body) {
      out += (ins.op == Opcode::Label ? "" : "  ") + print_instruction(ins) + "\n";
    }
    out += "}\n";
  }
  return out;
}

}  // namespace l4ptr::minic
