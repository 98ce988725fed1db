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

#include "l4ptr/instrument.hpp"

namespace l4ptr::instrument {

namespace {

nlohmann::ordered_json diagnostic_json(const char* record, const Diagnostic& d) {
  return {{"record", record}, {"kind", d.kind}, {"function", d.function}, {"line", d.line}, {"message", d.message}};
}

}  // namespace

std::string InstrumentationReport::to_jsonl() const {
  const nlohmann::ordered_json summary = {
      {"record", "summary"},
      {"pointer_decls", pointer_decls},
      {"struct_layouts_changed", struct_layouts_changed},
      {"alloc_size_rewrites", alloc_size_rewrites},
      {"stack_arrays_wrapped", stack_arrays_wrapped},
      {"extcalls_stripped", extcalls_stripped},
      {"derefs_instrumented", derefs_instrumented},
      {"pointer_arith_lowered", pointer_arith_lowered},
      {"warnings", warnings.size()},
      {"unbounded_results", unbounded_results.size()},
  };
  std::string out = summary.dump() + "\n";
  for (const auto& d : warnings) out += diagnostic_json("warning", d).dump() + "\n";
  for (const auto& d : unbounded_results) out += diagnostic_json("unbounded", d).dump() + "\n";
  return out;
}

}  // namespace l4ptr::instrument
