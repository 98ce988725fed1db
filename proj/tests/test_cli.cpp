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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "l4ptr/bench.hpp"
#include "l4ptr/error.hpp"
#include "l4ptr/fuzz.hpp"
#include "l4ptr/minic/parser.hpp"

using namespace l4ptr;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "l4ptr_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int tool(const std::string& args) {
  const std::string cmd = std::string(L4PTR_TOOL) + " " + args + " >" + (scratch() / "stdout").string() + " 2>" +
                          (scratch() / "stderr").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string corpus(const std::string& name) { return (fs::path(L4PTR_CORPUS_DIR) / name).string(); }

bench::BenchSpec mst(int k, std::vector<std::uint64_t> sizes) {
  bench::BenchSpec s;
  s.workload = bench::Workload::MstList;
  s.pointer_fields_per_node = k;
  s.sizes = std::move(sizes);
  return s;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("bench config file") {
  const auto spec = bench::parse_bench_config(
      "# overhead run\nworkload = \"mst_list\"\nsizes = [8, 16, 32]\npointer_fields_per_node = 3\nseed = 7\n");
  CHECK(spec.workload == bench::Workload::MstList);
  CHECK(spec.sizes == std::vector<std::uint64_t>{8, 16, 32});
  CHECK(spec.pointer_fields_per_node == 3);
  CHECK(spec.seed == 7);
  CHECK_THROWS_AS(bench::parse_bench_config("colour = blue\n"), Error);
  CHECK_THROWS_AS(bench::parse_bench_config("sizes = 8, 16\n"), Error);
  CHECK_THROWS_AS(bench::parse_bench_config("workload = heap_sort\n"), Error);
  CHECK_THROWS_AS(bench::parse_bench_config("sizes = [8, x]\n"), Error);
}

TEST_CASE("bench spec validation") {
  CHECK_THROWS_AS(mst(2, {}).validate(), Error);
  CHECK_THROWS_AS(mst(2, {8, 8}).validate(), Error);
  CHECK_THROWS_AS(mst(2, {16, 8}).validate(), Error);
  CHECK_THROWS_AS(mst(2, {0, 8}).validate(), Error);
  CHECK_THROWS_AS(mst(-1, {8}).validate(), Error);
  CHECK_NOTHROW(mst(2, {8, 16}).validate());
}

TEST_CASE("bench csv header and row count") {
  const auto rows = bench::run_bench(mst(2, {8, 16, 32}));
  REQUIRE(rows.size() == 3);
  const std::string csv = bench::bench_csv(rows);
  CHECK(csv.substr(0, csv.find('\n')) == "size,plain_instr,l4_instr,runtime_ratio,plain_bytes,l4_bytes,memory_ratio");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  for (const auto& r : rows) {
    CHECK(r.runtime_ratio >= 0.95);
    CHECK(r.memory_ratio >= 0.95);
    CHECK(r.runtime_ratio == doctest::Approx(static_cast<double>(r.l4_instr) / r.plain_instr));
    CHECK(r.memory_ratio == doctest::Approx(static_cast<double>(r.l4_bytes) / r.plain_bytes));
  }
  const auto manifest = nlohmann::json::parse(bench::bench_manifest(mst(2, {8, 16, 32}), "out.csv", rows));
  CHECK(manifest["csv"] == "out.csv");
  CHECK(manifest["columns"].size() == 7);
}

TEST_CASE("bench output is byte identical for equal seeds") {
  auto spec = mst(2, {8, 64});
  spec.seed = 5;
  CHECK(bench::bench_csv(bench::run_bench(spec)) == bench::bench_csv(bench::run_bench(spec)));
}

TEST_CASE("nodes without pointer fields keep their size") {
  for (const auto& r : bench::run_bench(mst(0, {8, 64, 512}))) {
    CHECK(r.memory_ratio == doctest::Approx(1.0).epsilon(0.05));
  }
  bench::BenchSpec sweep;
  sweep.workload = bench::Workload::ArraySweep;
  sweep.sizes = {10, 100};
  for (const auto& r : bench::run_bench(sweep)) CHECK(r.memory_ratio == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("every workload and field count runs to completion") {
  for (auto w : {bench::Workload::MstList, bench::Workload::ArraySweep, bench::Workload::StructHeavy}) {
    for (int k = 0; k <= 4; ++k) {
      bench::BenchSpec s;
      s.workload = w;
      s.pointer_fields_per_node = k;
      s.sizes = {2, 3, 17};
      CAPTURE(bench::to_string(w));
      CAPTURE(k);
      CHECK_NOTHROW(bench::run_bench(s));
    }
  }
  CHECK_THROWS_AS(bench::workload_source(mst(2, {1}), 1), Error);
}

TEST_CASE("more pointer fields per node cost more memory") {
  double last = 0;
  for (int k = 1; k <= 4; ++k) {
    const double ratio = bench::run_bench(mst(k, {256})).front().memory_ratio;
    CHECK(ratio > last);
    last = ratio;
  }
}

TEST_CASE("fuzz with default offsets has no spurious and no missed cases") {
  fuzz::FuzzOptions o;
  o.seed = 51;
  o.count = 1000;
  const auto s = fuzz::run_fuzz(o);
  CHECK(s.programs == 1000);
  CHECK(s.spurious == 0);
  CHECK(s.missed_documented + s.missed_undocumented == 0);
  CHECK(s.unexpected == 0);
  CHECK(s.divergent == 0);
  CHECK(s.injected > 0);
  CHECK(s.injected_caught == s.injected);
  CHECK(s.equivalent + s.caught == s.programs);
}

TEST_CASE("forced wrap cases are counted as documented misses") {
  fuzz::FuzzOptions o;
  o.seed = 52;
  o.count = 200;
  o.force_wrap = true;
  const auto s = fuzz::run_fuzz(o);
  CHECK(s.wrap_cases > 0);
  CHECK(s.missed_documented == s.wrap_cases);
  CHECK(s.missed_undocumented == 0);
  CHECK(s.spurious == 0);
  CHECK(s.unexpected == 0);
}

TEST_CASE("fuzz needs at least one program") {
  fuzz::FuzzOptions o;
  o.count = 0;
  CHECK_THROWS_AS(fuzz::run_fuzz(o), Error);
}

TEST_CASE("generator is deterministic per seed") {
  fuzz::ProgramGenerator a(53), b(53), c(54);
  bool differs = false;
  for (int i = 0; i < 50; ++i) {
    const auto x = a.next();
    CHECK(x.source == b.next().source);
    differs = differs || x.source != c.next().source;
    CHECK_NOTHROW(minic::parse(x.source));
  }
  CHECK(differs);
}

TEST_CASE("instrument subcommand writes program and report") {
  const fs::path out = scratch() / "cs.l4.mir";
  REQUIRE(tool("instrument " + corpus("callee_store.mir") + " --out " + out.string()) == 0);
  CHECK(slurp(out) == slurp(corpus("callee_store.l4.mir")));
  CHECK(slurp(scratch() / "cs.l4.jsonl") == slurp(corpus("callee_store.l4.jsonl")));
}

TEST_CASE("instrument subcommand rejects instrumented or malformed input") {
  CHECK(tool("instrument " + corpus("callee_store.l4.mir")) == 1);
  const fs::path bad = scratch() / "bad.mir";
  std::ofstream(bad) << "fn main() {\n  ret 0\n";
  CHECK(tool("instrument " + bad.string()) == 1);
  CHECK(tool("instrument " + (scratch() / "missing.mir").string()) == 1);
}

TEST_CASE("width-aware flag changes the lowering") {
  const fs::path a = scratch() / "wa.mir";
  const fs::path b = scratch() / "wb.mir";
  REQUIRE(tool("instrument " + corpus("linked_list.mir") + " --out " + a.string()) == 0);
  REQUIRE(tool("instrument --width-aware " + corpus("linked_list.mir") + " --out " + b.string()) == 0);
  CHECK(slurp(a) != slurp(b));
  CHECK(slurp(b).find("__last") != std::string::npos);
}

TEST_CASE("run subcommand exit codes") {
  CHECK(tool("run " + corpus("linked_list.mir")) == 0);
  CHECK(slurp(scratch() / "stdout") == "10\n");
  CHECK(tool("run --instrument " + corpus("callee_store_overflow.mir")) == 2);
  CHECK(slurp(scratch() / "stderr").find("PoisonedAddress 0x8000000000010064") != std::string::npos);
  CHECK(tool("run " + corpus("missing.mir")) == 1);
  CHECK(tool("run") == 1);
}

TEST_CASE("diff, fuzz, bench and stress subcommands") {
  CHECK(tool("diff " + corpus("callee_store_overflow.mir")) == 0);
  CHECK(slurp(scratch() / "stdout") == "caught: Overflow\n");
  CHECK(tool("fuzz --count 0") == 1);
  CHECK(tool("fuzz --count 20 --seed 3") == 0);
  CHECK(nlohmann::json::parse(slurp(scratch() / "stdout"))["programs"] == 20);
  const fs::path csv = scratch() / "b.csv";
  CHECK(tool("bench --sizes 8,16 --out " + csv.string()) == 0);
  CHECK(slurp(csv).rfind("size,plain_instr", 0) == 0);
  CHECK(fs::exists(scratch() / "b.json"));
  CHECK(tool("bench --sizes 16,8") == 1);
  const fs::path cfg = scratch() / "bench.cfg";
  std::ofstream(cfg) << "workload = array_sweep\nsizes = [4, 8]\n";
  CHECK(tool("bench --config " + cfg.string()) == 0);
  CHECK(tool("stress --writers 2 --iterations 1000") == 0);
  CHECK(tool("nonsense") == 1);
}

}  // TEST_SUITE
