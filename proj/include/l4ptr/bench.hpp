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
#include <string>
#include <string_view>
#include <vector>

namespace l4ptr::bench {

enum class Workload { MstList, ArraySweep, StructHeavy };

const char* to_string(Workload workload);
Workload workload_from_string(std::string_view name);

struct BenchSpec {
  Workload workload = Workload::MstList;
  std::vector<std::uint64_t> sizes;
  int pointer_fields_per_node = 2;
  std::uint64_t seed = 0;

  // Throws Error unless sizes are non-empty, at least 1 and strictly increasing.
  void validate() const;
};

// Reads `key = value` lines; `#` starts a comment. Keys: workload, sizes,
// pointer_fields_per_node, seed. Throws Error on malformed input.
BenchSpec parse_bench_config(std::string_view text);

// The plain program for one benchmark size.
std::string workload_source(const BenchSpec& spec, std::uint64_t size);

struct BenchRow {
  std::uint64_t size = 0;
  std::uint64_t plain_instr = 0;
  std::uint64_t l4_instr = 0;
  double runtime_ratio = 0;
  std::uint64_t plain_bytes = 0;
  std::uint64_t l4_bytes = 0;
  double memory_ratio = 0;
};

inline constexpr std::string_view kCsvHeader =
    "size,plain_instr,l4_instr,runtime_ratio,plain_bytes,l4_bytes,memory_ratio";

// Runs the plain and instrumented program for every size. Throws Error if a
// run does not finish normally or the two runs print different output.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

std::string bench_csv(const std::vector<BenchRow>& rows);
std::string bench_manifest(const BenchSpec& spec, const std::string& csv_path, const std::vector<BenchRow>& rows);

}  // namespace l4ptr::bench
