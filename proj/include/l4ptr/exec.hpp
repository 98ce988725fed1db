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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "l4ptr/memsim.hpp"
#include "l4ptr/minic/ast.hpp"

namespace l4ptr::exec {

struct RunMetrics {
  std::uint64_t dynamic_instructions = 0;  // labels excluded
  std::uint64_t lane_add_count = 0;
  std::uint64_t deref_count = 0;
  std::uint64_t peak_heap_bytes = 0;
  std::array<std::uint64_t, minic::kOpcodeCount> histogram{};
  double wall_time_ms = 0;  // informational; never compared

  std::uint64_t count(minic::Opcode op) const { return histogram[static_cast<int>(op)]; }
  bool same_counts(const RunMetrics& other) const;
};

enum class Status {
  Ok,
  Fault,          // memsim fault; the program stopped at the faulting access
  Trap,           // runtime error outside the MMU: bad free, division by zero, bad size
  LimitExceeded,  // step budget or call depth exhausted
};

const char* to_string(Status status);

// The first access whose exact classification was out of bounds.
struct OracleViolation {
  OracleKind kind = OracleKind::InBounds;
  AllocId alloc_id = kNoAlloc;
  std::uint64_t addr = 0;  // address before masking
  std::uint64_t width = 0;
  std::int64_t offset = 0;  // addr - base of the provenance allocation
  std::uint64_t alloc_size = 0;
  bool poisoned = false;    // the dereference sequence set the poison bit
  std::string pc;

  friend bool operator==(const OracleViolation&, const OracleViolation&) = default;
};

struct Outcome {
  Status status = Status::Ok;
  std::int64_t exit_code = 0;
  std::optional<Fault> fault;
  std::string message;  // trap or limit description
  std::string output;
  RunMetrics metrics;
  std::vector<std::string> fault_log;
  std::optional<OracleViolation> first_violation;
  std::uint64_t violations = 0;

  // Equality of everything except wall time.
  bool same_as(const Outcome& other) const;
};

struct RunOptions {
  std::vector<std::int64_t> args;
  std::uint64_t seed = 0;
  std::uint64_t step_budget = 100'000'000;
  int max_call_depth = 4096;
  // Classify only the first byte of each access, as a base-address check does.
  bool referee_base_only = false;
};

// Typechecks and executes `main`. Throws TypeError or Error for programs that
// cannot be run at all (no main, unknown external); runtime failures are
// reported in the Outcome.
Outcome run(const minic::Program& program, const RunOptions& options = {});

std::string outcome_json(const Outcome& outcome, int indent = -1);

// Built-in external functions available to programs.
std::vector<std::string> builtin_externs();

enum class Verdict { Equivalent, Caught, Missed, Spurious, Divergent };

const char* to_string(Verdict verdict);

struct DiffReport {
  Verdict verdict = Verdict::Equivalent;
  std::optional<OracleViolation> violation;
  // Missed accesses whose cumulative offset is at least 2^31 in magnitude fall
  // in the documented wrap class.
  bool documented = false;
  Outcome original;
  Outcome instrumented;

  // "equivalent", "caught: Overflow", "missed (documented limit)", ...
  std::string summary() const;
};

struct DiffOptions {
  RunOptions run;
  bool width_aware = false;
};

// Runs both programs and classifies the instrumented run against the exact
// oracle. `instrumented` must come from instrument(original).
DiffReport diff_run(const minic::Program& original, const minic::Program& instrumented,
                    const DiffOptions& options = {});

std::string diff_json(const DiffReport& report, int indent = -1);

struct StressOptions {
  int writers = 2;
  std::uint64_t iterations = 1'000'000;
  std::uint64_t seed = 0;
  // Writes the two 64-bit halves separately, so readers can see a mixture.
  bool broken = false;
};

struct StressReport {
  std::uint64_t swaps = 0;
  std::uint64_t reads = 0;
  std::uint64_t torn_reads = 0;
  std::uint64_t torn_swaps = 0;  // swap returned an inconsistent previous value
  bool lock_free = false;

  std::uint64_t torn() const { return torn_reads + torn_swaps; }
};

StressReport stress_atomicity(const StressOptions& options);

}  // namespace l4ptr::exec
