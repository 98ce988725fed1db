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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "l4ptr/bench.hpp"
#include "l4ptr/exec.hpp"
#include "l4ptr/fuzz.hpp"
#include "l4ptr/instrument.hpp"
#include "l4ptr/l4core.hpp"
#include "l4ptr/minic/parser.hpp"
#include "l4ptr/minic/typecheck.hpp"

using namespace l4ptr;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(L4PTR_CORPUS_DIR)) {
    const auto name = e.path().filename().string();
    if (e.path().extension() == ".mir" && name.find(".l4.") == std::string::npos) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Verdict encoding_conformance() {
  const auto start = Clock::now();
  const std::int64_t lim = std::int64_t{1} << 31;
  std::uint64_t checked = 0, upper_bad = 0, upper_bad_alone = 0, lower_bad = 0, detect_bad = 0;
  auto check = [&](std::uint64_t size, std::int64_t d) {
    const FlagPair f = flags(add_offset(encode(0x10000, size), L4Offset{d}));
    const bool over = d >= static_cast<std::int64_t>(size);
    const bool under = d < 0;
    ++checked;
    upper_bad += f.upper_flag != over;
    upper_bad_alone += f.upper_flag != over && !f.lower_flag;
    lower_bad += f.lower_flag != under;
    detect_bad += f.any() != (over || under);
  };
  for (std::uint64_t s : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{100}, static_cast<std::uint64_t>(lim - 1)}) {
    const auto ss = static_cast<std::int64_t>(s);
    for (std::int64_t d : {-lim, std::int64_t{-4097}, std::int64_t{-1}, std::int64_t{0}, ss - 1, ss, ss + 1, lim - 1}) {
      check(s, d);
    }
  }
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint64_t> size(1, static_cast<std::uint64_t>(lim - 1));
  std::uniform_int_distribution<std::int64_t> offset(-lim, lim - 1);
  for (int i = 0; i < 100'000; ++i) check(size(rng), offset(rng));
  const double t = seconds_since(start);
  return {upper_bad == 0 && lower_bad == 0 && t < 10.0,
          fmt("%llu pairs, upper mismatches %llu (with lower flag clear %llu), lower mismatches %llu, "
              "detection mismatches %llu, %.2fs (limit 10s)",
              (unsigned long long)checked, (unsigned long long)upper_bad, (unsigned long long)upper_bad_alone,
              (unsigned long long)lower_bad,
              (unsigned long long)detect_bad, t)};
}

Verdict poisoning_law() {
  std::mt19937_64 rng(2);
  std::uint64_t bad = 0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const L4Pointer p(Vec128{rng() & ~kPoisonBit, rng()});
    const FlagPair f = flags(p);
    const std::uint64_t m = deref_mask(p).addr;
    bad += ((m >> 63) != 0) != f.any() || (m & ~kPoisonBit) != (p.address() & ~kPoisonBit);
  }
  return {bad == 0, fmt("%d random values with canonical addresses, %llu mismatches", n, (unsigned long long)bad)};
}

Verdict differential_detection() {
  fuzz::FuzzOptions o;
  o.seed = 3;
  o.count = 1000;
  const auto plain = fuzz::run_fuzz(o);
  o.force_wrap = true;
  o.seed = 4;
  const auto wrap = fuzz::run_fuzz(o);
  const bool pass = plain.spurious == 0 && wrap.spurious == 0 && plain.injected > 0 &&
                    plain.injected_caught == plain.injected && wrap.injected_caught == wrap.injected &&
                    plain.missed_documented + plain.missed_undocumented == 0 && wrap.missed_undocumented == 0 &&
                    wrap.wrap_cases > 0 && wrap.missed_documented == wrap.wrap_cases && plain.unexpected == 0 &&
                    wrap.unexpected == 0;
  return {pass, fmt("%llu programs: spurious %llu, injected caught %llu/%llu, undocumented misses %llu; "
                    "%llu programs with wrap: wrap cases %llu, documented misses %llu, undocumented %llu",
                    (unsigned long long)plain.programs, (unsigned long long)(plain.spurious + wrap.spurious),
                    (unsigned long long)(plain.injected_caught + wrap.injected_caught),
                    (unsigned long long)(plain.injected + wrap.injected),
                    (unsigned long long)plain.missed_undocumented, (unsigned long long)wrap.programs,
                    (unsigned long long)wrap.wrap_cases, (unsigned long long)wrap.missed_documented,
                    (unsigned long long)wrap.missed_undocumented)};
}

Verdict semantic_preservation() {
  std::vector<minic::Program> programs;
  bool has_callee_store = false;
  for (const auto& path : corpus_files()) {
    minic::Program p = minic::parse(slurp(path));
    const exec::Outcome o = exec::run(p);
    if (o.status != exec::Status::Ok || o.violations != 0) continue;
    has_callee_store = has_callee_store || path.filename() == "callee_store.mir";
    programs.push_back(std::move(p));
  }
  fuzz::ProgramGenerator gen(5, {false, true});
  for (int i = 0; i < 250; ++i) programs.push_back(minic::parse(gen.next().source));

  std::size_t equal = 0;
  for (const auto& p : programs) {
    const auto d = exec::diff_run(p, instrument::instrument(p).first);
    if (d.verdict == exec::Verdict::Equivalent && d.original.status == exec::Status::Ok &&
        d.instrumented.status == d.original.status && d.instrumented.output == d.original.output &&
        d.instrumented.exit_code == d.original.exit_code) {
      ++equal;
    }
  }
  return {has_callee_store && programs.size() >= 200 && equal == programs.size(),
          fmt("%zu/%zu fault-free programs with equal output and exit code (callee_store included: %s)", equal,
              programs.size(), has_callee_store ? "yes" : "no")};
}

Verdict atomicity() {
  exec::StressOptions o;
  o.writers = 2;
  o.iterations = 1'000'000;
  o.seed = 6;
  const auto atomic = exec::stress_atomicity(o);
  o.broken = true;
  o.iterations = 20'000;
  const auto broken = exec::stress_atomicity(o);
  return {atomic.torn() == 0 && atomic.swaps >= 2'000'000 && broken.torn() >= 1,
          fmt("atomic: %llu swaps, %llu reads, %llu torn; two-halves mode: %llu torn", (unsigned long long)atomic.swaps,
              (unsigned long long)atomic.reads, (unsigned long long)atomic.torn(), (unsigned long long)broken.torn())};
}

Verdict overhead_trends() {
  const auto start = Clock::now();
  bench::BenchSpec spec;
  spec.workload = bench::Workload::MstList;
  spec.pointer_fields_per_node = 2;
  for (std::uint64_t n = 8; n <= 4096; n *= 2) spec.sizes.push_back(n);
  const auto rows = bench::run_bench(spec);
  bool runtime_monotone = true, memory_monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    runtime_monotone = runtime_monotone && rows[i].runtime_ratio >= rows[i - 1].runtime_ratio;
    memory_monotone = memory_monotone && rows[i].memory_ratio > rows[i - 1].memory_ratio;
  }
  const double rt = rows.back().runtime_ratio;
  const double mem = rows.back().memory_ratio;

  bool growth = true;
  for (int k = 0; k <= 8; ++k) {
    std::string src = "struct R {\n  key: i64,\n";
    for (int i = 0; i < k; ++i) src += "  p" + std::to_string(i) + ": ptr<R>,\n";
    src += "}\n";
    const minic::Program p = minic::parse(src);
    const minic::Program out = instrument::rewrite_types(p);
    const auto r = minic::Type::struct_ref("R");
    growth = growth && minic::Layout(out).size_of(r) - minic::Layout(p).size_of(r) == 8u * static_cast<unsigned>(k);
  }
  const double t = seconds_since(start);
  const bool pass = runtime_monotone && rt >= 1.5 && rt <= 2.5 && memory_monotone && mem >= 1.8 && mem <= 3.2 &&
                    growth && t < 60.0;
  return {pass, fmt("runtime ratio non-decreasing %s, final %.3f (1.5..2.5); memory ratio increasing %s, final %.3f "
                    "(1.8..3.2); 8 bytes per pointer field %s; %.1fs (limit 60s)",
                    runtime_monotone ? "yes" : "no", rt, memory_monotone ? "yes" : "no", mem, growth ? "yes" : "no", t)};
}

Verdict branch_freedom() {
  std::vector<minic::Program> programs;
  for (const auto& path : corpus_files()) programs.push_back(minic::parse(slurp(path)));
  fuzz::ProgramGenerator gen(7, {true, false});
  for (int i = 0; i < 500; ++i) programs.push_back(minic::parse(gen.next().source));
  long sequences = 0, with_branches = 0, flag_branches = 0, lost = 0;
  for (const auto& p : programs) {
    for (bool wide : {false, true}) {
      instrument::Options o;
      o.width_aware = wide;
      const auto [out, report] = instrument::instrument(p, o);
      const auto scan = instrument::scan_bounds_branches(out);
      sequences += scan.deref_sequences;
      with_branches += scan.sequences_with_branches;
      flag_branches += scan.flag_dependent_branches;
      lost += scan.deref_sequences != report.derefs_instrumented;
    }
  }
  return {sequences > 0 && with_branches == 0 && flag_branches == 0 && lost == 0,
          fmt("%ld lowered dereference sequences, %ld with branches, %ld flag-dependent branches", sequences,
              with_branches, flag_branches)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"encoding conformance", encoding_conformance},
      {"poisoning law", poisoning_law},
      {"differential detection", differential_detection},
      {"semantic preservation", semantic_preservation},
      {"atomicity", atomicity},
      {"overhead trends", overhead_trends},
      {"branch freedom", branch_freedom},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
