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

#include <algorithm>
#include <charconv>
#include <sstream>

#include "l4ptr/bench.hpp"
#include "l4ptr/error.hpp"

namespace l4ptr::bench {

const char* to_string(Workload workload) {
  switch (workload) {
    case Workload::MstList: return "mst_list";
    case Workload::ArraySweep: return "array_sweep";
    case Workload::StructHeavy: return "struct_heavy";
  }
  return "?";
}

Workload workload_from_string(std::string_view name) {
  for (Workload w : {Workload::MstList, Workload::ArraySweep, Workload::StructHeavy}) {
    if (name == to_string(w)) return w;
  }
  throw Error("unknown workload '" + std::string(name) + "'");
}

void BenchSpec::validate() const {
  if (sizes.empty()) throw Error("bench spec needs at least one size");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw Error("bench sizes must be at least 1");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw Error("bench sizes must be strictly increasing");
  }
  if (pointer_fields_per_node < 0) throw Error("pointer_fields_per_node must not be negative");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_uint(std::string_view s, int line) {
  s = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("line " + std::to_string(line) + ": expected an unsigned integer, found '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

BenchSpec parse_bench_config(std::string_view text) {
  BenchSpec spec;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view l = raw;
    if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) throw Error("line " + std::to_string(line) + ": expected key = value");
    const std::string_view key = trim(l.substr(0, eq));
    std::string_view value = trim(l.substr(eq + 1));
    if (key == "workload") {
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      spec.workload = workload_from_string(value);
    } else if (key == "sizes") {
      if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
        throw Error("line " + std::to_string(line) + ": sizes must be a [list]");
      }
      spec.sizes.clear();
      std::string_view items = value.substr(1, value.size() - 2);
      while (!trim(items).empty()) {
        const auto comma = items.find(',');
        spec.sizes.push_back(parse_uint(items.substr(0, comma), line));
        if (comma == std::string_view::npos) break;
        items = items.substr(comma + 1);
      }
    } else if (key == "pointer_fields_per_node") {
      spec.pointer_fields_per_node = static_cast<int>(parse_uint(value, line));
    } else if (key == "seed") {
      spec.seed = parse_uint(value, line);
    } else {
      throw Error("line " + std::to_string(line) + ": unknown key '" + std::string(key) + "'");
    }
  }
  spec.validate();
  return spec;
}

}  // namespace l4ptr::bench
