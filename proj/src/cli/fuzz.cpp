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

#include "json.hpp"
#include "l4ptr/error.hpp"
#include "l4ptr/fuzz.hpp"
#include "l4ptr/instrument.hpp"
#include "l4ptr/minic/parser.hpp"

namespace l4ptr::fuzz {

namespace {

bool matches(Label label, OracleKind kind) {
  return (label == Label::Overflow && kind == OracleKind::Overflow) ||
         (label == Label::Underflow && kind == OracleKind::Underflow);
}

bool expected(const GeneratedCase& c, const exec::DiffReport& d) {
  switch (c.label) {
    case Label::InBounds: return d.verdict == exec::Verdict::Equivalent;
    case Label::Overflow:
    case Label::Underflow: return d.verdict == exec::Verdict::Caught && matches(c.label, d.violation->kind);
    case Label::Wrap: return d.verdict == exec::Verdict::Missed && d.documented;
  }
  return false;
}

}  // namespace

std::string FuzzSummary::json(int indent) const {
  nlohmann::ordered_json j = {
      {"programs", programs},
      {"equivalent", equivalent},
      {"caught", caught},
      {"missed_documented", missed_documented},
      {"missed_undocumented", missed_undocumented},
      {"spurious", spurious},
      {"divergent", divergent},
      {"injected", injected},
      {"injected_caught", injected_caught},
      {"wrap_cases", wrap_cases},
      {"unexpected", unexpected},
  };
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& f : failures) {
    list.push_back({{"label", to_string(f.generated.label)},
                    {"storage", to_string(f.generated.storage)},
                    {"element", f.generated.element},
                    {"index", f.generated.index},
                    {"verdict", f.summary}});
  }
  j["failures"] = list;
  return j.dump(indent);
}

FuzzSummary run_fuzz(const FuzzOptions& options) {
  if (options.count == 0) throw Error("fuzz needs at least one program");
  ProgramGenerator gen(options.seed, {options.force_wrap, false});
  instrument::Options iopts;
  iopts.width_aware = options.width_aware;
  exec::DiffOptions dopts;
  dopts.width_aware = options.width_aware;
  dopts.run.seed = options.seed;

  FuzzSummary s;
  for (std::uint64_t i = 0; i < options.count; ++i) {
    GeneratedCase c = gen.next();
    const minic::Program original = minic::parse(c.source);
    const minic::Program instrumented = instrument::instrument(original, iopts).first;
    const exec::DiffReport d = exec::diff_run(original, instrumented, dopts);
    ++s.programs;
    switch (d.verdict) {
      case exec::Verdict::Equivalent: ++s.equivalent; break;
      case exec::Verdict::Caught: ++s.caught; break;
      case exec::Verdict::Missed: ++(d.documented ? s.missed_documented : s.missed_undocumented); break;
      case exec::Verdict::Spurious: ++s.spurious; break;
      case exec::Verdict::Divergent: ++s.divergent; break;
    }
    if (c.label == Label::Overflow || c.label == Label::Underflow) {
      ++s.injected;
      if (d.verdict == exec::Verdict::Caught && matches(c.label, d.violation->kind)) ++s.injected_caught;
    }
    if (c.label == Label::Wrap) ++s.wrap_cases;
    if (!expected(c, d)) {
      ++s.unexpected;
      s.failures.push_back({std::move(c), d.verdict, d.summary(), false});
    }
  }
  return s;
}

}  // namespace l4ptr::fuzz
