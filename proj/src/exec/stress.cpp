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

#include <atomic>
#include <thread>
#include <vector>

#include "l4ptr/exec.hpp"
#include "l4ptr/l4core.hpp"

namespace l4ptr::exec {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

// Both bound lanes are a function of the generation tag held in the address lane.
L4Pointer value_for(std::uint64_t tag) {
  const std::uint64_t m = mix(tag);
  return L4Pointer::from_fields(static_cast<std::uint32_t>(m >> 32), static_cast<std::uint32_t>(m), tag);
}

bool consistent(L4Pointer p) { return value_for(p.address()) == p; }

std::uint64_t tag_for(std::uint64_t seed, int writer, std::uint64_t i) {
  return mix(seed) ^ ((std::uint64_t(writer) + 1) << 48) ^ (i + 1);
}

// Two independently written 64-bit halves; deliberately not atomic as a pair.
class SplitCell {
 public:
  explicit SplitCell(L4Pointer p) : lo_(p.raw().lo), hi_(p.raw().hi) {}

  L4Pointer load() const {
    const std::uint64_t hi = hi_.load();
    const std::uint64_t lo = lo_.load();
    return L4Pointer(Vec128{lo, hi});
  }

  L4Pointer swap(L4Pointer p) {
    const std::uint64_t old_lo = lo_.exchange(p.raw().lo);
    std::this_thread::yield();
    const std::uint64_t old_hi = hi_.exchange(p.raw().hi);
    return L4Pointer(Vec128{old_lo, old_hi});
  }

 private:
  std::atomic<std::uint64_t> lo_;
  std::atomic<std::uint64_t> hi_;
};

template <typename Cell>
StressReport hammer(Cell& cell, const StressOptions& options) {
  StressReport report;
  std::atomic<int> running{options.writers};
  std::atomic<std::uint64_t> torn_swaps{0};
  std::vector<std::thread> writers;
  for (int w = 0; w < options.writers; ++w) {
    writers.emplace_back([&, w] {
      std::uint64_t bad = 0;
      for (std::uint64_t i = 0; i < options.iterations; ++i) {
        if (!consistent(cell.swap(value_for(tag_for(options.seed, w, i))))) ++bad;
        if (i % 64 == 63) std::this_thread::yield();
      }
      torn_swaps += bad;
      --running;
    });
  }
  std::uint64_t reads = 0;
  std::uint64_t torn = 0;
  while (running.load() > 0) {
    if (!consistent(cell.load())) ++torn;
    ++reads;
    std::this_thread::yield();
  }
  for (auto& t : writers) t.join();
  report.swaps = options.iterations * static_cast<std::uint64_t>(options.writers);
  report.reads = reads;
  report.torn_reads = torn;
  report.torn_swaps = torn_swaps.load();
  return report;
}

}  // namespace

StressReport stress_atomicity(const StressOptions& options) {
  const L4Pointer initial = value_for(tag_for(options.seed, -1, 0));
  if (options.broken) {
    SplitCell cell(initial);
    return hammer(cell, options);
  }
  AtomicL4Cell cell(initial);
  StressReport report = hammer(cell, options);
  report.lock_free = cell.is_lock_free();
  return report;
}

}  // namespace l4ptr::exec
