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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l4ptr/minic/types.hpp"

namespace l4ptr::minic {

// Source position. Locations never take part in AST equality, so a program
// and the reparse of its pretty-printed form compare equal.
struct SourceLoc {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

enum class Opcode {
  Label,
  Alloc,
  Free,
  PtrAdd,
  FieldAddr,
  Index,
  Load,
  Store,
  Mov,
  IsNull,
  Add,
  Sub,
  Mul,
  Div,
  Rem,
  And,
  Or,
  Xor,
  Shl,
  Shr,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Call,
  ExtCall,
  Br,
  Jmp,
  Ret,
  // Produced by the instrumentation pass only.
  L4Encode,
  L4Add,
  L4MsbUpper,
  L4MsbLower,
  L4Poison,
  L4Strip,
};

inline constexpr int kOpcodeCount = static_cast<int>(Opcode::L4Strip) + 1;

std::string_view opcode_name(Opcode op);
std::optional<Opcode> opcode_from_name(std::string_view name);
bool is_binary(Opcode op);
bool is_l4_opcode(Opcode op);

enum class OperandKind { None, Var, Imm, Null, SizeOf, AddrOf };

struct Operand {
  OperandKind kind = OperandKind::None;
  std::string name;        // Var, AddrOf
  std::int64_t imm = 0;    // Imm
  Type type;               // SizeOf

  static Operand var(std::string n) { return {OperandKind::Var, std::move(n), 0, {}}; }
  static Operand immediate(std::int64_t v) { return {OperandKind::Imm, {}, v, {}}; }
  static Operand null() { return {OperandKind::Null, {}, 0, {}}; }
  static Operand size_of(Type t) { return {OperandKind::SizeOf, {}, 0, std::move(t)}; }
  static Operand addr_of(std::string n) { return {OperandKind::AddrOf, std::move(n), 0, {}}; }

  bool present() const { return kind != OperandKind::None; }

  friend bool operator==(const Operand&, const Operand&) = default;
};

// `lhs` or `lhs * rhs`; byte counts for alloc and byte offsets for pointer arithmetic.
struct SizeExpr {
  Operand lhs;
  std::optional<Operand> rhs;

  friend bool operator==(const SizeExpr&, const SizeExpr&) = default;
};

struct Instruction {
  Opcode op = Opcode::Label;
  SourceLoc loc;
  std::string dst;                  // destination variable, empty when absent
  std::vector<Operand> args;        // value operands in source order
  SizeExpr size;                    // alloc, ptradd, l4.encode, l4.add
  std::string symbol;               // label name, callee, or field name
  std::vector<std::string> targets; // br / jmp labels
  std::optional<Type> access_type;  // store through a raw address: the stored type
  std::vector<Type> operand_types;  // filled by typecheck; not part of equality

  friend bool operator==(const Instruction& a, const Instruction& b) {
    return a.op == b.op && a.dst == b.dst && a.args == b.args && a.size == b.size &&
           a.symbol == b.symbol && a.targets == b.targets && a.access_type == b.access_type;
  }
};

struct Field {
  std::string name;
  Type type;

  friend bool operator==(const Field&, const Field&) = default;
};

struct StructDef {
  std::string name;
  std::vector<Field> fields;
  SourceLoc loc;

  friend bool operator==(const StructDef&, const StructDef&) = default;
};

struct Global {
  std::string name;
  Type type;
  SourceLoc loc;

  friend bool operator==(const Global&, const Global&) = default;
};

// Result size contract of an external function: the size in bytes of the
// returned object is either a constant or the value of one argument.
struct SizeContract {
  bool from_arg = false;
  std::int64_t value = 0;

  friend bool operator==(const SizeContract&, const SizeContract&) = default;
};

struct ExternDecl {
  std::string name;
  std::vector<Type> params;
  Type ret = Type::i64();
  std::optional<SizeContract> contract;
  SourceLoc loc;

  friend bool operator==(const ExternDecl&, const ExternDecl&) = default;
};

struct Variable {
  std::string name;
  Type type;
  // Temporaries that hold raw pointers at an external-call boundary.
  bool shim = false;
  SourceLoc loc;

  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Function {
  std::string name;
  std::vector<Variable> params;
  Type ret = Type::i64();
  std::vector<Variable> locals;
  std::vector<Instruction> body;
  SourceLoc loc;

  const Variable* find_variable(std::string_view n) const;

  friend bool operator==(const Function&, const Function&) = default;
};

struct Program {
  std::vector<StructDef> structs;
  std::vector<Global> globals;
  std::vector<ExternDecl> externs;
  std::vector<Function> functions;

  const StructDef* find_struct(std::string_view n) const;
  const Global* find_global(std::string_view n) const;
  const ExternDecl* find_extern(std::string_view n) const;
  const Function* find_function(std::string_view n) const;

  // True when any declaration or instruction uses an L4 type or opcode.
  bool is_instrumented() const;

  friend bool operator==(const Program&, const Program&) = default;
};

}  // namespace l4ptr::minic
