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

#include <cstdlib>

#include "l4ptr/exec.hpp"

namespace l4ptr::exec {

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Equivalent: return "equivalent";
    case Verdict::Caught: return "caught";
    case Verdict::Missed: return "missed";
    case Verdict::Spurious: return "spurious";
    case Verdict::Divergent: return "divergent";
  }
  return "?";
}

std::string DiffReport::summary() const {
  switch (verdict) {
    case Verdict::Caught: return std::string("caught: ") + to_string(violation->kind);
    case Verdict::Missed: return documented ? "missed (documented limit)" : "missed";
    default: return to_string(verdict);
  }
}

namespace {

constexpr std::int64_t kWrapOffset = std::int64_t{1} << 31;

bool in_wrap_class(std::int64_t offset) { return offset >= kWrapOffset || offset <= -kWrapOffset; }

// The access starts inside the object and runs past its end.
bool straddles(const OracleViolation& v) {
  return v.kind == OracleKind::Overflow && v.offset >= 0 && static_cast<std::uint64_t>(v.offset) < v.alloc_size;
}

bool observably_equal(const Outcome& a, const Outcome& b) {
  if (a.status != b.status || a.output != b.output) return false;
  if (a.status == Status::Ok) return a.exit_code == b.exit_code;
  if (a.status == Status::Fault) return a.fault->kind == b.fault->kind;
  return true;
}

}  // namespace

DiffReport diff_run(const minic::Program& original, const minic::Program& instrumented, const DiffOptions& options) {
  DiffReport r;
  RunOptions plain = options.run;
  plain.referee_base_only = false;
  RunOptions checked = options.run;
  checked.referee_base_only = !options.width_aware;
  r.original = run(original, plain);
  r.instrumented = run(instrumented, checked);

  const Outcome& l4 = r.instrumented;
  const bool poisoned_stop = l4.status == Status::Fault && l4.fault->kind == FaultKind::PoisonedAddress;
  if (l4.first_violation) {
    r.violation = l4.first_violation;
    if (l4.first_violation->poisoned) {
      r.verdict = Verdict::Caught;
    } else {
      r.verdict = Verdict::Missed;
      r.documented = in_wrap_class(l4.first_violation->offset);
    }
  } else if (poisoned_stop) {
    r.verdict = Verdict::Spurious;
  } else if (r.original.first_violation && !options.width_aware && straddles(*r.original.first_violation)) {
    // Only the first byte is checked in base-address mode.
    r.violation = r.original.first_violation;
    r.verdict = Verdict::Missed;
    r.documented = true;
  } else {
    r.verdict = observably_equal(r.original, l4) && !r.original.first_violation ? Verdict::Equivalent
                                                                                  : Verdict::Divergent;
    if (r.original.first_violation) r.violation = r.original.first_violation;
  }
  return r;
}

}  // namespace l4ptr::exec
