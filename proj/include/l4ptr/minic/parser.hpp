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

#include <string>
#include <string_view>

#include "l4ptr/minic/ast.hpp"

namespace l4ptr::minic {

// Parses `.mir` text. Throws SyntaxError (with line/column) on malformed
// input and DuplicateSymbol on redefinitions.
Program parse(std::string_view source);

// Canonical text form; parse(print(p)) == p.
std::string print(const Program& program);
std::string print_type(const Type& type);
std::string print_instruction(const Instruction& ins);

}  // namespace l4ptr::minic
