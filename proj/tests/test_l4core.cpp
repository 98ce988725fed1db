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

#include <random>
#include <vector>

#include "doctest.h"
#include "l4ptr/error.hpp"
#include "l4ptr/l4core.hpp"

using namespace l4ptr;

namespace {

// Scalar reference for the three-lane add, written against the bit layout
// directly rather than through the lane helpers.
Vec128 reference_add(Vec128 x, Vec128 y) {
  const std::uint64_t u = ((x.hi >> 32) + (y.hi >> 32)) & 0xFFFFFFFFu;
  const std::uint64_t l = ((x.hi & 0xFFFFFFFFu) + (y.hi & 0xFFFFFFFFu)) & 0xFFFFFFFFu;
  return Vec128{x.lo + y.lo, (u << 32) | l};
}

L4Pointer walk(std::uint64_t base, std::uint64_t size, std::int64_t d) {
  return add_offset(encode(base, size), L4Offset{d});
}

}  // namespace

TEST_SUITE("l4core") {

TEST_CASE("encode sets the upper lane to 2^31 - size") {
  const L4Pointer p = encode(0xA000, 100);
  CHECK(p.upper() == 0x7FFFFF9Cu);
  CHECK(p.lower() == 0u);
  CHECK(p.address() == 0xA000u);

  const L4Pointer q = encode(0x1000, kMaxObjectSize);
  CHECK(q.upper() == 0x00000001u);
  CHECK(q.lower() == 0u);
  CHECK(q.address() == 0x1000u);
}

TEST_CASE("encode rejects sizes outside (0, 2^31)") {
  CHECK_THROWS_AS(encode(0x0, std::uint64_t{1} << 31), SizeOutOfRange);
  CHECK_THROWS_AS(encode(0x1000, 0), SizeOutOfRange);
}

TEST_CASE("field accessors partition the 128 bits") {
  const L4Pointer p = L4Pointer::from_fields(0x12345678u, 0x9ABCDEF0u, 0x0FEDCBA987654321u);
  CHECK(p.raw().hi == 0x123456789ABCDEF0u);
  CHECK(p.raw().lo == 0x0FEDCBA987654321u);
  CHECK(strip(p) == 0x0FEDCBA987654321u);
}

TEST_CASE("lane add keeps carries inside each lane") {
  const Vec128 x = make_lanes(1, 1, 1);
  const Vec128 y = make_lanes(0xFFFFFFFFu, 0, 0);
  CHECK(lane_add128(x, y) == make_lanes(0, 1, 1));

  const Vec128 z = make_lanes(0, 0xFFFFFFFFu, ~std::uint64_t{0});
  CHECK(lane_add128(z, make_lanes(0, 1, 1)) == make_lanes(0, 0, 0));
  CHECK(lane_add128(x, Vec128{}) == x);
}

TEST_CASE("lane add equals three scalar modular adds") {
  std::mt19937_64 rng(11);
  const std::vector<std::uint64_t> edges = {0, 1, 0x7FFFFFFF, 0x80000000, 0xFFFFFFFF, 0xFFFFFFFF00000000u,
                                            0x8000000000000000u, ~std::uint64_t{0}};
  for (auto a : edges) {
    for (auto b : edges) {
      const Vec128 x{a, b};
      const Vec128 y{b, a};
      REQUIRE(lane_add128(x, y) == reference_add(x, y));
    }
  }
  for (int i = 0; i < 1'000'000; ++i) {
    const Vec128 x{rng(), rng()};
    const Vec128 y{rng(), rng()};
    if (!(lane_add128(x, y) == reference_add(x, y))) {
      FAIL("lane add mismatch at iteration " << i);
    }
  }
}

TEST_CASE("add_offset advances every lane by the same truncated offset") {
  const L4Pointer p = encode(0xA000, 0x100);
  const L4Pointer q = add_offset(p, L4Offset{0x18});
  CHECK(q.upper() == 0x7FFFFF18u);
  CHECK(q.lower() == 0x18u);
  CHECK(q.address() == 0xA018u);
  CHECK(add_offset(p, L4Offset{0}) == p);

  CHECK(add_offset(p, L4Offset{0x100}).upper() == 0x80000000u);
  CHECK(add_offset(p, L4Offset{-1}).lower() == 0xFFFFFFFFu);
}

TEST_CASE("flags follow the interval oracle") {
  CHECK(flags(encode(0x4000, 64)) == FlagPair{false, false});
  CHECK(flags(walk(0x4000, 64, 64)) == FlagPair{true, false});
  CHECK(flags(walk(0x4000, 64, -8)) == FlagPair{false, true});
}

TEST_CASE("dense grid of sizes and offsets matches the interval oracle") {
  const std::int64_t lim = std::int64_t{1} << 31;
  std::vector<std::uint64_t> sizes = {1, 2, 3, 7, 8, 15, 16, 100, 255, 256, 4096, 65535, 1u << 20,
                                      static_cast<std::uint64_t>(lim - 1)};
  std::uint64_t mismatches = 0;
  for (std::uint64_t s : sizes) {
    const auto ss = static_cast<std::int64_t>(s);
    std::vector<std::int64_t> offsets = {-lim, -lim + 1, -4097, -1, 0, ss - 1, ss, ss + 1, lim - 1};
    for (std::int64_t d = -300; d <= 300; ++d) offsets.push_back(d);
    for (std::int64_t d = ss - 300; d <= ss + 300; ++d) {
      if (d > -lim && d < lim) offsets.push_back(d);
    }
    for (std::int64_t d : offsets) {
      if (d >= lim) continue;
      const FlagPair f = flags(walk(0x10000, s, d));
      const bool out = d >= ss || d < 0;
      // Below size - 2^31 the upper lane wraps and raises its flag too.
      const bool upper = d >= ss || d < ss - lim;
      if (f.upper_flag != upper || f.lower_flag != (d < 0) || f.any() != out) ++mismatches;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("upper flag departs from the interval only where the lower flag is set") {
  const std::int64_t lim = std::int64_t{1} << 31;
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::uint64_t> size(1, static_cast<std::uint64_t>(lim - 1));
  std::uniform_int_distribution<std::int64_t> offset(-lim, lim - 1);
  std::uint64_t departures = 0;
  for (int i = 0; i < 100'000; ++i) {
    const std::uint64_t s = size(rng);
    const std::int64_t d = offset(rng);
    const FlagPair f = flags(walk(0x10000, s, d));
    REQUIRE(f.lower_flag == (d < 0));
    REQUIRE(f.any() == (d < 0 || d >= static_cast<std::int64_t>(s)));
    if (f.upper_flag != (d >= static_cast<std::int64_t>(s))) {
      ++departures;
      REQUIRE(f.lower_flag);
    }
  }
  CHECK(departures > 0);
  CHECK(flags(walk(0x10000, 1, -lim)) == FlagPair{true, true});
  CHECK(flags(walk(0x10000, 100, -lim + 99)) == FlagPair{true, true});
  CHECK(flags(walk(0x10000, 100, -lim + 100)) == FlagPair{false, true});
  CHECK(flags(walk(0x10000, static_cast<std::uint64_t>(lim - 1), lim)) == FlagPair{true, true});
}

TEST_CASE("deref mask poisons exactly when a flag is raised") {
  CHECK(deref_mask(walk(0xA000, 0x100, 0x18)).addr == 0xA018u);
  CHECK(deref_mask(walk(0xA000, 0x100, 0x100)).addr == 0x800000000000A100u);
  CHECK(deref_mask(walk(0xA000, 0x100, -1)).poisoned());

  std::mt19937_64 rng(12);
  for (int i = 0; i < 100'000; ++i) {
    const L4Pointer p(Vec128{rng() & ~kPoisonBit, rng()});
    const std::uint64_t m = deref_mask(p).addr;
    const bool any = (p.upper() >> 31) != 0 || (p.lower() >> 31) != 0;
    REQUIRE(((m >> 63) != 0) == any);
    REQUIRE((m << 1) == (p.address() << 1));
  }
}

TEST_CASE("deref mask keeps a poison bit already present in the address") {
  const L4Pointer p = L4Pointer::from_fields(0x7FFFFF00, 0, kPoisonBit | 0xA000);
  CHECK(deref_mask(p).addr == (kPoisonBit | 0xA000));
}

TEST_CASE("deref mask leaves the bound lanes alone") {
  const L4Pointer p = walk(0xA000, 0x100, 0x100);
  const L4Pointer before = p;
  (void)deref_mask(p);
  CHECK(p == before);
}

TEST_CASE("strip returns the address lane regardless of flags") {
  CHECK(strip(encode(0xA000, 4)) == 0xA000u);
  CHECK(strip(walk(0xA000, 4, 3)) == 0xA003u);
  CHECK(strip(walk(0xA000, 4, 4)) == 0xA004u);
  CHECK(strip(walk(0xA000, 4, -4)) == 0x9FFCu);
}

TEST_CASE("offsets round trip and flags clear on return") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::int64_t> off(-(std::int64_t{1} << 31) + 1, (std::int64_t{1} << 31) - 1);
  std::uniform_int_distribution<std::uint64_t> size(1, kMaxObjectSize);
  for (int i = 0; i < 100'000; ++i) {
    const std::uint64_t base = rng() & 0x7FFFFFFFFFFFFFF0u;
    const L4Pointer p = encode(base, size(rng));
    const std::int64_t d = off(rng);
    REQUIRE(strip(p) == base);
    REQUIRE(add_offset(add_offset(p, L4Offset{d}), L4Offset{-d}) == p);
  }
}

TEST_CASE("cumulative offsets of 2^31 or more wrap the bound lanes") {
  // Documented limit: a 2^32 step is invisible to both 32-bit lanes.
  const L4Pointer far = walk(0x10000, 100, std::int64_t{1} << 32);
  CHECK(flags(far) == FlagPair{false, false});
  CHECK_FALSE(deref_mask(far).poisoned());
  CHECK(far.address() == 0x10000u + (std::uint64_t{1} << 32));

  // Just past the window downwards: lower lane wraps to a clear flag.
  const L4Pointer below = walk(0x10000, 100, -(std::int64_t{1} << 31) - 1);
  CHECK_FALSE(flags(below).lower_flag);
}

TEST_CASE("atomic cell swap returns the previous value") {
  const L4Pointer a = encode(0x1000, 10);
  const L4Pointer b = encode(0x2000, 20);
  AtomicL4Cell cell(a);
  CHECK(atomic_cell_swap(cell, b) == a);
  CHECK(cell.load() == b);
  cell.store(a);
  CHECK(cell.swap(b) == a);
}

}  // TEST_SUITE
