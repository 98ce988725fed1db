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
#include <utility>
#include <vector>

#include "l4ptr/minic/ast.hpp"

namespace l4ptr::instrument {

struct Diagnostic {
  std::string kind;  // "NonScalableSize", "UnboundedExternalResult"
  std::string function;
  int line = 0;
  std::string message;
};

struct InstrumentationReport {
  int pointer_decls = 0;
  int struct_layouts_changed = 0;
  int alloc_size_rewrites = 0;
  int stack_arrays_wrapped = 0;
  int extcalls_stripped = 0;
  int derefs_instrumented = 0;
  int pointer_arith_lowered = 0;
  std::vector<Diagnostic> warnings;
  std::vector<Diagnostic> unbounded_results;

  // JSON lines: one "summary" object followed by one object per diagnostic.
  std::string to_jsonl() const;
};

struct Options {
  // Also check the last byte of each access, not only its first byte.
  bool width_aware = false;
};

// Individual passes. Each takes the output of the previous one; only the
// composition `instrument` is guaranteed to produce a well-typed program.
minic::Program rewrite_types(const minic::Program& program, InstrumentationReport* report = nullptr);
minic::Program rewrite_allocs(const minic::Program& program, InstrumentationReport* report = nullptr);
minic::Program wrap_stack_arrays(const minic::Program& program, InstrumentationReport* report = nullptr);
minic::Program instrument_derefs(const minic::Program& program, const Options& options = {},
                                 InstrumentationReport* report = nullptr);
minic::Program strip_external_calls(const minic::Program& program, InstrumentationReport* report = nullptr);

// Typechecks the input, runs every pass in order and retypechecks the
// result. Throws InstrumentError when the input already uses L4 types.
std::pair<minic::Program, InstrumentationReport> instrument(const minic::Program& program,
                                                           const Options& options = {});

// Declarations that still mention a raw ptr type outside extcall shims and
// extern signatures. Empty for every instrumented program.
std::vector<std::string> raw_pointer_leaks(const minic::Program& program);

struct BranchScan {
  int deref_sequences = 0;
  // Lowered dereference sequences that contain any branch.
  int sequences_with_branches = 0;
  // Branches whose condition depends on an extracted bound flag.
  int flag_dependent_branches = 0;
};

BranchScan scan_bounds_branches(const minic::Program& program);

}  // namespace l4ptr::instrument
