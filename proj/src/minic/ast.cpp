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

#include "l4ptr/minic/ast.hpp"

#include <array>

namespace l4ptr::minic {

namespace {

constexpr std::array<std::string_view, kOpcodeCount> kNames = {
    "<label>", "alloc", "free",  "ptradd", "fieldaddr", "index",    "load",      "store",
    "mov",     "isnull", "add",  "sub",    "mul",       "div",      "rem",       "and",
    "or",      "xor",   "shl",   "shr",    "eq",        "ne",       "lt",        "le",
    "gt",      "ge",    "call",  "extcall", "br",       "jmp",      "ret",       "l4.encode",
    "l4.add",  "l4.msbu", "l4.msbl", "l4.poison", "l4.strip",
};

}  // namespace

std::string_view opcode_name(Opcode op) { return kNames[static_cast<int>(op)]; }

std::optional<Opcode> opcode_from_name(std::string_view name) {
  for (int i = 1; i < kOpcodeCount; ++i) {
    if (kNames[i] == name) return static_cast<Opcode>(i);
  }
  return std::nullopt;
}

bool is_binary(Opcode op) { return op >= Opcode::Add && op <= Opcode::Ge; }

bool is_l4_opcode(Opcode op) { return op >= Opcode::L4Encode; }

const Variable* Function::find_variable(std::string_view n) const {
  for (const auto& p : params) {
    if (p.name == n) return &p;
  }
  for (const auto& l : locals) {
    if (l.name == n) return &l;
  }
  return nullptr;
}

const StructDef* Program::find_struct(std::string_view n) const {
  for (const auto& s : structs) {
    if (s.name == n) return &s;
  }
  return nullptr;
}

const Global* Program::find_global(std::string_view n) const {
  for (const auto& g : globals) {
    if (g.name == n) return &g;
  }
  return nullptr;
}

const ExternDecl* Program::find_extern(std::string_view n) const {
  for (const auto& e : externs) {
    if (e.name == n) return &e;
  }
  return nullptr;
}

const Function* Program::find_function(std::string_view n) const {
  for (const auto& f : functions) {
    if (f.name == n) return &f;
  }
  return nullptr;
}

bool Program::is_instrumented() const {
  for (const auto& s : structs) {
    for (const auto& f : s.fields) {
      if (f.type.contains_l4()) return true;
    }
  }
  for (const auto& g : globals) {
    if (g.type.contains_l4()) return true;
  }
  for (const auto& fn : functions) {
    if (fn.ret.contains_l4()) return true;
    for (const auto& v : fn.params) {
      if (v.type.contains_l4()) return true;
    }
    for (const auto& v : fn.locals) {
      if (v.type.contains_l4() || v.shim) return true;
    }
    for (const auto& ins : fn.body) {
      if (is_l4_opcode(ins.op)) return true;
    }
  }
  return false;
}

}  // namespace l4ptr::minic
