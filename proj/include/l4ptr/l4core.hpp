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

#include <atomic>
#include <cstdint>

namespace l4ptr {

// A 128-bit vector viewed as three lanes: the 64-bit address lane occupies
// bits [63:0] (lo), the lower-bound lane bits [95:64] and the upper-bound
// lane bits [127:96] (both in hi).
struct alignas(16) Vec128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  friend constexpr bool operator==(const Vec128&, const Vec128&) = default;
};

constexpr Vec128 make_lanes(std::uint32_t upper, std::uint32_t lower, std::uint64_t address) {
  return {address, (std::uint64_t{upper} << 32) | lower};
}
constexpr std::uint64_t address_lane(Vec128 v) { return v.lo; }
constexpr std::uint32_t lower_lane(Vec128 v) { return static_cast<std::uint32_t>(v.hi); }
constexpr std::uint32_t upper_lane(Vec128 v) { return static_cast<std::uint32_t>(v.hi >> 32); }

// Lane-wise modular addition; no carry crosses a lane boundary.
constexpr Vec128 lane_add128(Vec128 x, Vec128 y) {
  const std::uint32_t upper = upper_lane(x) + upper_lane(y);
  const std::uint32_t lower = lower_lane(x) + lower_lane(y);
  return make_lanes(upper, lower, x.lo + y.lo);
}

inline constexpr std::uint32_t kFlagBit32 = std::uint32_t{1} << 31;
inline constexpr std::uint64_t kPoisonBit = std::uint64_t{1} << 63;
inline constexpr std::uint64_t kMaxObjectSize = (std::uint64_t{1} << 31) - 1;

class L4Pointer {
 public:
  constexpr L4Pointer() = default;
  constexpr explicit L4Pointer(Vec128 raw) : raw_(raw) {}

  static constexpr L4Pointer from_fields(std::uint32_t upper, std::uint32_t lower,
                                         std::uint64_t address) {
    return L4Pointer(make_lanes(upper, lower, address));
  }

  constexpr Vec128 raw() const { return raw_; }
  constexpr std::uint32_t upper() const { return upper_lane(raw_); }
  constexpr std::uint32_t lower() const { return lower_lane(raw_); }
  constexpr std::uint64_t address() const { return address_lane(raw_); }

  friend constexpr bool operator==(const L4Pointer&, const L4Pointer&) = default;

 private:
  Vec128 raw_;
};

// A signed byte offset together with its three-lane broadcast.
struct L4Offset {
  std::int64_t value = 0;

  constexpr Vec128 broadcast() const {
    const auto lane32 = static_cast<std::uint32_t>(static_cast<std::uint64_t>(value));
    return make_lanes(lane32, lane32, static_cast<std::uint64_t>(value));
  }
};

struct FlagPair {
  bool upper_flag = false;
  bool lower_flag = false;

  constexpr bool any() const { return upper_flag || lower_flag; }
  friend constexpr bool operator==(const FlagPair&, const FlagPair&) = default;
};

struct PoisonedAddress {
  std::uint64_t addr = 0;

  constexpr bool poisoned() const { return (addr & kPoisonBit) != 0; }
};

/// Builds a fresh L4 pointer for an object of `size` bytes at `base`.
/// The upper lane starts at 2^31 - size so that its bit 31 becomes set
/// exactly when the cumulative offset reaches `size`; the lower lane starts
/// at zero so a negative offset sets its bit 31.
/// Throws SizeOutOfRange unless 0 < size < 2^31.
L4Pointer encode(std::uint64_t base, std::uint64_t size);

constexpr L4Pointer add_offset(L4Pointer p, L4Offset off) {
  return L4Pointer(lane_add128(p.raw(), off.broadcast()));
}

constexpr FlagPair flags(L4Pointer p) {
  return {(p.upper() & kFlagBit32) != 0, (p.lower() & kFlagBit32) != 0};
}

// The flag bit of each bound lane moved to bit 63; zero when the flag is clear.
constexpr std::uint64_t upper_msb(L4Pointer p) {
  return std::uint64_t{p.upper() & kFlagBit32} << 32;
}
constexpr std::uint64_t lower_msb(L4Pointer p) {
  return std::uint64_t{p.lower() & kFlagBit32} << 32;
}

// Address handed to a load or store: the address lane, with bit 63 set when
// either bound flag is raised. The bounds lanes are left untouched.
constexpr PoisonedAddress deref_mask(L4Pointer p) {
  return {p.address() | upper_msb(p) | lower_msb(p)};
}

constexpr std::uint64_t strip(L4Pointer p) { return p.address(); }

/// Shared storage for one L4 pointer whose 128 bits are always replaced
/// indivisibly. Readers never observe bounds from one write combined with
/// the address from another.
class AtomicL4Cell {
 public:
  explicit AtomicL4Cell(L4Pointer initial = {}) : cell_(initial.raw()) {}

  AtomicL4Cell(const AtomicL4Cell&) = delete;
  AtomicL4Cell& operator=(const AtomicL4Cell&) = delete;

  L4Pointer load() const { return L4Pointer(cell_.load(std::memory_order_acquire)); }
  void store(L4Pointer p) { cell_.store(p.raw(), std::memory_order_release); }

  // Returns the value that was replaced.
  L4Pointer swap(L4Pointer p) {
    return L4Pointer(cell_.exchange(p.raw(), std::memory_order_acq_rel));
  }

  bool is_lock_free() const { return cell_.is_lock_free(); }

 private:
  std::atomic<Vec128> cell_;
};

inline L4Pointer atomic_cell_swap(AtomicL4Cell& cell, L4Pointer value) { return cell.swap(value); }

}  // namespace l4ptr
