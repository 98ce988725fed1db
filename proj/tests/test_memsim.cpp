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
#include <array>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "l4ptr/error.hpp"
#include "l4ptr/l4core.hpp"
#include "l4ptr/memsim.hpp"

using namespace l4ptr;

namespace {

std::optional<Fault> store_u64(Memory& m, std::uint64_t addr, std::uint64_t v) {
  std::array<std::byte, 8> buf;
  std::memcpy(buf.data(), &v, 8);
  return m.store(addr, buf);
}

std::optional<Fault> probe(Memory& m, std::uint64_t addr, std::size_t width = 1) {
  std::vector<std::byte> buf(width);
  return m.load(addr, buf);
}

AllocId id_of(const Memory& m, std::uint64_t base) { return m.find_live(base)->id; }

}  // namespace

TEST_SUITE("memsim") {

TEST_CASE("allocations are aligned, canonical and disjoint") {
  Memory m;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t size = 1 + rng() % 300;
    const std::uint64_t base = m.alloc(size);
    CHECK(base % 16 == 0);
    CHECK((base >> 63) == 0);
    blocks.emplace_back(base, size);
    if (i % 3 == 2) {
      m.free(blocks[blocks.size() - 2].first);
      blocks.erase(blocks.end() - 2);
    }
  }
  std::sort(blocks.begin(), blocks.end());
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    CHECK(blocks[i - 1].first + blocks[i - 1].second + Memory::kGuardGap <= blocks[i].first);
  }
}

TEST_CASE("allocation size limits") {
  Memory m;
  CHECK_THROWS_AS(m.alloc(std::uint64_t{1} << 31), SizeOutOfRange);
  CHECK_THROWS_AS(m.alloc(0), SizeOutOfRange);
  CHECK_NOTHROW(m.alloc(100));
}

TEST_CASE("arena exhaustion raises OutOfMemory") {
  Memory m;
  CHECK_THROWS_AS(
      {
        for (int i = 0; i < 4; ++i) m.alloc(kMaxObjectSize);
      },
      OutOfMemory);
}

TEST_CASE("fresh memory is zero filled") {
  Memory m;
  const auto base = m.alloc(32);
  std::array<std::byte, 16> buf;
  buf.fill(std::byte{0xFF});
  REQUIRE_FALSE(m.load(base + 8, buf));
  for (auto b : buf) CHECK(b == std::byte{0});
}

TEST_CASE("free bookkeeping") {
  Memory m;
  const auto base = m.alloc(64);
  const AllocId id = id_of(m, base);
  m.free(base);
  CHECK(m.classify(base, 1, id).kind == OracleKind::UseAfterFree);
  CHECK_THROWS_AS(m.free(base), InvalidFree);
  CHECK_THROWS_AS(m.free(0x12340), InvalidFree);
  CHECK_THROWS_AS(m.free(m.alloc(32) + 16), InvalidFree);
}

TEST_CASE("store then load round trips at every width") {
  Memory m;
  const auto base = m.alloc(64);
  for (std::size_t w : {1u, 2u, 4u, 8u, 16u}) {
    std::vector<std::byte> in(w), out(w);
    for (std::size_t i = 0; i < w; ++i) in[i] = std::byte(0x10 + i + w);
    REQUIRE_FALSE(m.store(base + 16, in));
    REQUIRE_FALSE(m.load(base + 16, out));
    CHECK(in == out);
  }
}

TEST_CASE("stores are little endian") {
  Memory m;
  const auto base = m.alloc(8);
  REQUIRE_FALSE(store_u64(m, base, 0x0102030405060708u));
  std::array<std::byte, 1> first;
  REQUIRE_FALSE(m.load(base, first));
  CHECK(first[0] == std::byte{0x08});
}

TEST_CASE("bit 63 faults before the mapping is consulted") {
  Memory m;
  const auto base = m.alloc(0x200);
  for (std::size_t w : {1u, 2u, 4u, 8u, 16u}) {
    const auto f = probe(m, 0x8000000000000100u, w);
    REQUIRE(f);
    CHECK(f->kind == FaultKind::PoisonedAddress);
  }
  // A poisoned address whose low bits point into a live block still faults.
  const auto f = probe(m, base | kPoisonBit);
  REQUIRE(f);
  CHECK(f->kind == FaultKind::PoisonedAddress);
  CHECK(f->addr == (base | kPoisonBit));
}

TEST_CASE("accesses outside live blocks are unmapped") {
  Memory m;
  const auto base = m.alloc(100);
  auto f = probe(m, base + 100);
  REQUIRE(f);
  CHECK(f->kind == FaultKind::Unmapped);
  f = probe(m, base + 96, 8);
  REQUIRE(f);
  CHECK(f->kind == FaultKind::Unmapped);
  CHECK_FALSE(probe(m, base + 99));
  CHECK_FALSE(probe(m, base + 92, 8));
  m.free(base);
  CHECK(probe(m, base));
}

TEST_CASE("oracle classification against the provenance block") {
  Memory m;
  const auto base = m.alloc(0x100);
  const AllocId id = id_of(m, base);
  CHECK(m.classify(base + 0xFF, 1, id).kind == OracleKind::InBounds);
  CHECK(m.classify(base + 0x100, 1, id).kind == OracleKind::Overflow);
  CHECK(m.classify(base - 1, 1, id).kind == OracleKind::Underflow);
  CHECK(m.classify(base + 0xFC, 8, id).kind == OracleKind::Overflow);
  CHECK(m.classify(base, 1, 999).kind == OracleKind::Unmapped);
}

TEST_CASE("oracle agrees with interval arithmetic over random probes") {
  Memory m;
  std::mt19937_64 rng(22);
  std::vector<std::uint64_t> bases;
  for (int i = 0; i < 50; ++i) bases.push_back(m.alloc(1 + rng() % 200));
  for (int i = 0; i < 100'000; ++i) {
    const auto base = bases[rng() % bases.size()];
    const AllocationRecord* rec = m.find_live(base);
    const std::int64_t d = static_cast<std::int64_t>(rng() % 600) - 300;
    const std::uint64_t w = std::uint64_t{1} << (rng() % 5);
    const OracleKind expect = d < 0                                                ? OracleKind::Underflow
                              : static_cast<std::uint64_t>(d) + w <= rec->size ? OracleKind::InBounds
                                                                                   : OracleKind::Overflow;
    REQUIRE(m.classify(base + static_cast<std::uint64_t>(d), w, rec->id).kind == expect);
  }
}

TEST_CASE("poison fault iff the oracle says out of bounds (base-address mode)") {
  Memory m;
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20'000; ++i) {
    const std::uint64_t size = 1 + rng() % 512;
    const auto base = m.alloc(size);
    const AllocId id = id_of(m, base);
    const std::int64_t d = static_cast<std::int64_t>(rng() % (3 * size)) - static_cast<std::int64_t>(size);
    const L4Pointer p = add_offset(encode(base, size), L4Offset{d});
    const auto f = probe(m, deref_mask(p).addr);
    const bool oob = m.classify(strip(p), 1, id).out_of_bounds();
    REQUIRE((f && f->kind == FaultKind::PoisonedAddress) == oob);
    if (!oob) REQUIRE_FALSE(f);
    m.free(base);
  }
}

TEST_CASE("peak heap bytes never fall below live bytes") {
  Memory m;
  std::vector<std::uint64_t> live;
  std::mt19937_64 rng(24);
  std::uint64_t peak_seen = 0;
  for (int i = 0; i < 1000; ++i) {
    if (!live.empty() && rng() % 3 == 0) {
      m.free(live.back());
      live.pop_back();
    } else {
      live.push_back(m.alloc(1 + rng() % 100));
    }
    CHECK(m.peak_heap_bytes() >= m.live_heap_bytes());
    CHECK(m.peak_heap_bytes() >= peak_seen);
    peak_seen = m.peak_heap_bytes();
  }
}

TEST_CASE("fault line format") {
  Fault f;
  f.kind = FaultKind::PoisonedAddress;
  f.addr = 0x8000000000010064u;
  f.alloc_id = 0;
  f.pc = "foo:5";
  CHECK(format_fault_line(f) == "PoisonedAddress 0x8000000000010064 0 foo:5");
  Fault g;
  g.kind = FaultKind::Unmapped;
  g.addr = 0x20;
  CHECK(format_fault_line(g) == "Unmapped 0x20 - -");
}

TEST_CASE("identical operation sequences give identical addresses") {
  auto script = [] {
    Memory m;
    std::vector<std::uint64_t> out;
    std::mt19937_64 rng(25);
    for (int i = 0; i < 200; ++i) {
      out.push_back(m.alloc(1 + rng() % 64));
      if (i % 4 == 3) m.free(out[out.size() - 3]);
    }
    return out;
  };
  CHECK(script() == script());
}

}  // TEST_SUITE
