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
#include "l4ptr/exec.hpp"

namespace l4ptr::exec {

namespace {

using nlohmann::ordered_json;

std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
  return buf;
}

ordered_json violation_json(const std::optional<OracleViolation>& v) {
  if (!v) return nullptr;
  return {{"class", to_string(v->kind)}, {"alloc_id", v->alloc_id}, {"addr", hex(v->addr)},
          {"width", v->width},           {"offset", v->offset},     {"alloc_size", v->alloc_size},
          {"poisoned", v->poisoned},     {"pc", v->pc}};
}

ordered_json outcome_object(const Outcome& o) {
  ordered_json j;
  j["status"] = to_string(o.status);
  j["exit_code"] = o.status == Status::Ok ? ordered_json(o.exit_code) : ordered_json(nullptr);
  if (o.fault) {
    j["fault"] = {{"kind", to_string(o.fault->kind)},
                  {"addr", hex(o.fault->addr)},
                  {"alloc_id", o.fault->alloc_id ? ordered_json(*o.fault->alloc_id) : ordered_json(nullptr)},
                  {"pc", o.fault->pc},
                  {"detail", o.fault->detail}};
  } else {
    j["fault"] = nullptr;
  }
  j["message"] = o.message;
  j["output"] = o.output;
  ordered_json histogram = ordered_json::object();
  for (int i = 0; i < minic::kOpcodeCount; ++i) {
    if (o.metrics.histogram[i]) histogram[std::string(minic::opcode_name(static_cast<minic::Opcode>(i)))] = o.metrics.histogram[i];
  }
  j["metrics"] = {{"dynamic_instructions", o.metrics.dynamic_instructions},
                  {"lane_add_count", o.metrics.lane_add_count},
                  {"deref_count", o.metrics.deref_count},
                  {"peak_heap_bytes", o.metrics.peak_heap_bytes},
                  {"histogram", histogram},
                  {"wall_time_ms", o.metrics.wall_time_ms}};
  j["fault_log"] = o.fault_log;
  j["oracle"] = {{"first_violation", violation_json(o.first_violation)}, {"violations", o.violations}};
  return j;
}

}  // namespace

std::string outcome_json(const Outcome& outcome, int indent) { return outcome_object(outcome).dump(indent); }

std::string diff_json(const DiffReport& report, int indent) {
  ordered_json j;
  j["verdict"] = to_string(report.verdict);
  j["summary"] = report.summary();
  j["documented"] = report.documented;
  j["violation"] = violation_json(report.violation);
  j["original"] = outcome_object(report.original);
  j["instrumented"] = outcome_object(report.instrumented);
  return j.dump(indent);
}

}  // namespace l4ptr::exec
