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
#include <map>
#include <set>
#include <string>

#include "l4ptr/minic/ast.hpp"

namespace l4ptr::minic {

/// Byte sizes and field offsets under the IR layout rules.
///
/// i8/i32/i64 are 1/4/8 bytes, ptr is 8, l4 is 16, arrays are densely packed,
/// and every struct field starts at an 8-byte boundary with no tail padding
/// beyond that. A pointer field therefore costs exactly 8 more bytes once it
/// becomes an L4 field.
class Layout {
 public:
  explicit Layout(const Program& program);

  // Throws TypeError for void, unknown structs, or structs containing themselves by value.
  std::uint64_t size_of(const Type& type) const;
  std::uint64_t field_offset(const std::string& struct_name, const std::string& field) const;
  const Field* find_field(const std::string& struct_name, const std::string& field) const;

 private:
  std::uint64_t struct_size(const std::string& name) const;

  const Program* program_;
  mutable std::map<std::string, std::uint64_t> struct_sizes_;
  mutable std::set<std::string> in_progress_;
};

enum class CheckMode {
  Source,        // L4 types and opcodes are rejected
  Instrumented,  // output of the instrumentation pass
  Auto,          // Instrumented iff the program uses L4 anywhere
};

// Returns a copy of `program` with operand types annotated on every
// instruction. Throws TypeError naming the function, line and mismatch.
Program typecheck(const Program& program, CheckMode mode = CheckMode::Auto);

}  // namespace l4ptr::minic
