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

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "l4ptr/bench.hpp"
#include "l4ptr/error.hpp"
#include "l4ptr/exec.hpp"
#include "l4ptr/fuzz.hpp"
#include "l4ptr/instrument.hpp"
#include "l4ptr/minic/parser.hpp"

namespace {

using namespace l4ptr;

constexpr int kOk = 0;
constexpr int kUserError = 1;
constexpr int kFaultDetected = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

// Writes to `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

std::string sibling(const std::string& path, const std::string& extension) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? path.substr(0, dot) : path) + extension;
}

struct InstrumentArgs {
  std::string input;
  std::string out;
  std::string report;
  bool width_aware = false;
};

int cmd_instrument(const InstrumentArgs& a) {
  const minic::Program program = minic::parse(read_file(a.input));
  instrument::Options options;
  options.width_aware = a.width_aware;
  const auto [result, report] = instrument::instrument(program, options);
  emit(a.out, minic::print(result));
  std::string report_path = a.report;
  if (report_path.empty() && !a.out.empty() && a.out != "-") report_path = sibling(a.out, ".jsonl");
  if (report_path.empty()) {
    std::cerr << report.to_jsonl();
  } else {
    emit(report_path, report.to_jsonl());
  }
  return kOk;
}

struct RunArgs {
  std::string input;
  std::string out;
  std::vector<std::int64_t> args;
  std::uint64_t seed = 0;
  bool instrument_first = false;
  bool width_aware = false;
};

int cmd_run(const RunArgs& a) {
  minic::Program program = minic::parse(read_file(a.input));
  if (a.instrument_first) {
    instrument::Options options;
    options.width_aware = a.width_aware;
    program = instrument::instrument(program, options).first;
  }
  exec::RunOptions options;
  options.args = a.args;
  options.seed = a.seed;
  const exec::Outcome outcome = exec::run(program, options);
  std::cout << outcome.output;
  for (const auto& line : outcome.fault_log) std::cerr << line << "\n";
  if (!outcome.message.empty()) std::cerr << to_string(outcome.status) << ": " << outcome.message << "\n";
  if (!a.out.empty()) emit(a.out, exec::outcome_json(outcome, 2) + "\n");
  switch (outcome.status) {
    case exec::Status::Ok: return kOk;
    case exec::Status::Fault: return kFaultDetected;
    default: return kUserError;
  }
}

struct DiffArgs {
  std::string input;
  std::string out;
  std::vector<std::int64_t> args;
  std::uint64_t seed = 0;
  bool width_aware = false;
};

int cmd_diff(const DiffArgs& a) {
  const minic::Program program = minic::parse(read_file(a.input));
  instrument::Options iopt;
  iopt.width_aware = a.width_aware;
  const minic::Program instrumented = instrument::instrument(program, iopt).first;
  exec::DiffOptions options;
  options.run.args = a.args;
  options.run.seed = a.seed;
  options.width_aware = a.width_aware;
  const exec::DiffReport report = exec::diff_run(program, instrumented, options);
  std::cout << report.summary() << "\n";
  if (!a.out.empty()) emit(a.out, exec::diff_json(report, 2) + "\n");
  return kOk;
}

struct FuzzArgs {
  std::string out;
  std::uint64_t seed = 0;
  std::uint64_t count = 1000;
  bool force_wrap = false;
  bool width_aware = false;
};

int cmd_fuzz(const FuzzArgs& a) {
  fuzz::FuzzOptions options;
  options.seed = a.seed;
  options.count = a.count;
  options.force_wrap = a.force_wrap;
  options.width_aware = a.width_aware;
  const fuzz::FuzzSummary summary = fuzz::run_fuzz(options);
  emit(a.out, summary.json(2) + "\n");
  return summary.spurious == 0 && summary.unexpected == 0 ? kOk : kFaultDetected;
}

struct BenchArgs {
  std::string config;
  std::string workload;
  std::vector<std::uint64_t> sizes;
  int pointer_fields = -1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  std::string manifest;
  std::uint64_t source_size = 0;
};

int cmd_bench(const BenchArgs& a) {
  bench::BenchSpec spec;
  if (!a.config.empty()) spec = bench::parse_bench_config(read_file(a.config));
  if (!a.workload.empty()) spec.workload = bench::workload_from_string(a.workload);
  if (!a.sizes.empty()) spec.sizes = a.sizes;
  if (a.pointer_fields >= 0) spec.pointer_fields_per_node = a.pointer_fields;
  if (a.seed_given) spec.seed = a.seed;
  if (a.source_size > 0) {
    emit(a.out, bench::workload_source(spec, a.source_size));
    return kOk;
  }
  if (spec.sizes.empty()) {
    for (std::uint64_t n = 8; n <= 4096; n *= 2) spec.sizes.push_back(n);
  }
  spec.validate();
  const auto rows = bench::run_bench(spec);
  const std::string csv = bench::bench_csv(rows);
  emit(a.out, csv);
  std::string manifest = a.manifest;
  if (manifest.empty() && !a.out.empty() && a.out != "-") manifest = sibling(a.out, ".json");
  if (!manifest.empty()) write_file(manifest, bench::bench_manifest(spec, a.out.empty() ? "-" : a.out, rows));
  return kOk;
}

struct StressArgs {
  int writers = 2;
  std::uint64_t iterations = 1'000'000;
  std::uint64_t seed = 0;
  bool broken = false;
};

int cmd_stress(const StressArgs& a) {
  exec::StressOptions options;
  options.writers = a.writers;
  options.iterations = a.iterations;
  options.seed = a.seed;
  options.broken = a.broken;
  const exec::StressReport r = exec::stress_atomicity(options);
  std::cout << "swaps " << r.swaps << "\nreads " << r.reads << "\ntorn_reads " << r.torn_reads << "\ntorn_swaps "
            << r.torn_swaps << "\nlock_free " << (r.lock_free ? "yes" : "no") << "\n";
  return r.torn() == 0 ? kOk : kFaultDetected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L4 pointer instrumentation toolkit"};
  app.require_subcommand(1);

  InstrumentArgs ia;
  auto* instrument_cmd = app.add_subcommand("instrument", "Rewrite a .mir program to use L4 pointers");
  instrument_cmd->add_option("input", ia.input, "Input .mir file")->required();
  instrument_cmd->add_option("-o,--out", ia.out, "Output .mir path (default stdout)");
  instrument_cmd->add_option("--report", ia.report, "JSON-lines report path (default <out>.jsonl, or stderr)");
  instrument_cmd->add_flag("--width-aware", ia.width_aware, "Also check the last byte of each access");

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Execute a .mir program");
  run_cmd->add_option("input", ra.input, "Input .mir file")->required();
  run_cmd->add_option("--args", ra.args, "Integer arguments visible through getarg")->delimiter(',');
  run_cmd->add_option("--seed", ra.seed, "Seed for the rand builtin");
  run_cmd->add_option("-o,--out", ra.out, "Write the outcome as JSON");
  run_cmd->add_flag("--instrument", ra.instrument_first, "Instrument before running");
  run_cmd->add_flag("--width-aware", ra.width_aware, "Width-aware instrumentation (with --instrument)");

  DiffArgs da;
  auto* diff_cmd = app.add_subcommand("diff", "Run a program and its instrumented form and compare");
  diff_cmd->add_option("input", da.input, "Input .mir file")->required();
  diff_cmd->add_option("--args", da.args, "Integer arguments")->delimiter(',');
  diff_cmd->add_option("--seed", da.seed, "Seed for the rand builtin");
  diff_cmd->add_option("-o,--out", da.out, "Write both outcomes as JSON");
  diff_cmd->add_flag("--width-aware", da.width_aware, "Width-aware instrumentation");

  FuzzArgs fa;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Differential fuzzing with oracle-labelled programs");
  fuzz_cmd->add_option("--seed", fa.seed, "Generator seed");
  fuzz_cmd->add_option("-n,--count", fa.count, "Number of programs");
  fuzz_cmd->add_flag("--force-wrap", fa.force_wrap, "Also generate offsets beyond 2^31");
  fuzz_cmd->add_flag("--width-aware", fa.width_aware, "Width-aware instrumentation");
  fuzz_cmd->add_option("-o,--out", fa.out, "Summary JSON path (default stdout)");

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "Measure instrumentation overhead");
  bench_cmd->add_option("--config", ba.config, "Bench spec file (key = value)");
  bench_cmd->add_option("--workload", ba.workload, "mst_list, array_sweep or struct_heavy");
  bench_cmd->add_option("--sizes", ba.sizes, "Comma-separated sizes")->delimiter(',');
  bench_cmd->add_option("--pointer-fields", ba.pointer_fields, "Pointer fields per node");
  bench_cmd->add_option("--seed", ba.seed, "Workload seed");
  bench_cmd->add_option("-o,--out", ba.out, "CSV path (default stdout)");
  bench_cmd->add_option("--manifest", ba.manifest, "JSON manifest path (default <out>.json)");
  bench_cmd->add_option("--emit-source", ba.source_size, "Print the plain workload program for one size instead");

  StressArgs sa;
  auto* stress_cmd = app.add_subcommand("stress", "Concurrent swap/read test of the 128-bit cell");
  stress_cmd->add_option("--writers", sa.writers, "Writer threads")->check(CLI::PositiveNumber);
  stress_cmd->add_option("--iterations", sa.iterations, "Swaps per writer");
  stress_cmd->add_option("--seed", sa.seed, "Value seed");
  stress_cmd->add_flag("--broken", sa.broken, "Write the two halves separately");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUserError;
  }
  ba.seed_given = bench_cmd->count("--seed") > 0;

  try {
    if (*instrument_cmd) return cmd_instrument(ia);
    if (*run_cmd) return cmd_run(ra);
    if (*diff_cmd) return cmd_diff(da);
    if (*fuzz_cmd) return cmd_fuzz(fa);
    if (*bench_cmd) return cmd_bench(ba);
    if (*stress_cmd) return cmd_stress(sa);
  } catch (const l4ptr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUserError;
  }
  return kUserError;
}
