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
#include <random>
#include <string>
#include <vector>

#include "l4ptr/exec.hpp"

namespace l4ptr::fuzz {

enum class Label { InBounds, Overflow, Underflow, Wrap };

const char* to_string(Label label);

enum class Storage { Heap, StackArray, GlobalArray, StructField, StoredPointer, PassedPointer };

const char* to_string(Storage storage);

// A generated program together with the classification of its single
// injected access, known by construction.
struct GeneratedCase {
  std::string source;
  Label label = Label::InBounds;
  Storage storage = Storage::Heap;
  std::string element;  // element type as written in the program
  std::int64_t index = 0;  // element index of the injected access
  int chain_length = 1;
  bool is_store = false;
};

struct GeneratorOptions {
  // Makes one case in four a wrap case (offset 2^32 + e); never produced otherwise.
  bool force_wrap = false;
  bool in_bounds_only = false;
};

class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint64_t seed, GeneratorOptions options = {});

  GeneratedCase next();

 private:
  std::mt19937_64 rng_;
  GeneratorOptions options_;
};

struct FuzzOptions {
  std::uint64_t seed = 0;
  std::uint64_t count = 1000;
  bool force_wrap = false;
  bool width_aware = false;
};

struct CaseResult {
  GeneratedCase generated;
  exec::Verdict verdict = exec::Verdict::Equivalent;
  std::string summary;
  bool as_expected = false;
};

struct FuzzSummary {
  std::uint64_t programs = 0;
  std::uint64_t equivalent = 0;
  std::uint64_t caught = 0;
  std::uint64_t missed_documented = 0;
  std::uint64_t missed_undocumented = 0;
  std::uint64_t spurious = 0;
  std::uint64_t divergent = 0;
  // Injected out-of-bounds cases (|offset| < 2^31) and how many were caught with the right class.
  std::uint64_t injected = 0;
  std::uint64_t injected_caught = 0;
  std::uint64_t wrap_cases = 0;
  // Cases whose verdict disagrees with the generator's label.
  std::uint64_t unexpected = 0;
  std::vector<CaseResult> failures;

  std::string json(int indent = -1) const;
};

// Throws Error when count is zero.
FuzzSummary run_fuzz(const FuzzOptions& options);

}  // namespace l4ptr::fuzz
