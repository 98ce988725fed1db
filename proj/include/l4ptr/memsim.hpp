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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace l4ptr {

using AllocId = std::int32_t;
inline constexpr AllocId kNoAlloc = -1;

enum class RegionKind { Heap, Stack, Global };

struct AllocationRecord {
  AllocId id = kNoAlloc;
  std::uint64_t base = 0;
  std::uint64_t size = 0;
  bool live = false;
  RegionKind region = RegionKind::Heap;
};

enum class FaultKind { PoisonedAddress, Unmapped, OracleOverflow, OracleUnderflow, UseAfterFree };

const char* to_string(FaultKind kind);

struct Fault {
  FaultKind kind = FaultKind::Unmapped;
  std::uint64_t addr = 0;
  std::optional<AllocId> alloc_id;
  std::string detail;
  // Program location of the faulting instruction, "function:index"; filled by the interpreter.
  std::string pc;
};

// One fault-log line: `kind addr alloc_id pc`. The address is 0x-prefixed hex,
// a missing alloc id or pc is written as `-`.
std::string format_fault_line(const Fault& fault);

enum class AccessKind { Load, Store };

enum class OracleKind { InBounds, Overflow, Underflow, Unmapped, UseAfterFree };

const char* to_string(OracleKind kind);

struct OracleVerdict {
  OracleKind kind = OracleKind::Unmapped;
  AllocId alloc_id = kNoAlloc;

  bool out_of_bounds() const { return kind == OracleKind::Overflow || kind == OracleKind::Underflow; }
};

/// Simulated flat address space of 2^32 bytes with a first-fit allocator.
///
/// Every block is 16-byte aligned and followed by a guard gap of at least 16
/// unmapped bytes, so an access just past the end of an object lands in
/// unmapped space. The MMU model treats any address with bit 63 set as
/// non-canonical and faults before consulting the mapping.
class Memory {
 public:
  static constexpr std::uint64_t kArenaBase = 0x10000;
  static constexpr std::uint64_t kArenaLimit = std::uint64_t{1} << 32;
  static constexpr std::uint64_t kAlignment = 16;
  static constexpr std::uint64_t kGuardGap = 16;

  Memory() = default;

  // Throws SizeOutOfRange unless 0 < size < 2^31, OutOfMemory when the arena is exhausted.
  std::uint64_t alloc(std::uint64_t size, RegionKind region = RegionKind::Heap);

  // Throws InvalidFree unless `base` is the base of a live allocation.
  void free(std::uint64_t base);

  // Loads fill `data`, stores read it; the width is data.size() and must be 1, 2, 4, 8 or 16.
  std::optional<Fault> access(std::uint64_t addr, AccessKind kind, std::span<std::byte> data);

  std::optional<Fault> load(std::uint64_t addr, std::span<std::byte> out) {
    return access(addr, AccessKind::Load, out);
  }
  std::optional<Fault> store(std::uint64_t addr, std::span<const std::byte> in);

  // Exact classification of [addr, addr + width) against the provenance allocation.
  OracleVerdict classify(std::uint64_t addr, std::uint64_t width, AllocId provenance) const;

  const AllocationRecord* record(AllocId id) const;
  // Live allocation whose [base, base + size) contains addr.
  const AllocationRecord* find_live(std::uint64_t addr) const;

  std::uint64_t live_heap_bytes() const { return live_heap_bytes_; }
  std::uint64_t peak_heap_bytes() const { return peak_heap_bytes_; }
  std::size_t allocation_count() const { return records_.size(); }

 private:
  struct FreeBlock {
    std::uint64_t base;
    std::uint64_t capacity;
  };

  std::uint64_t reserve(std::uint64_t footprint);

  std::vector<AllocationRecord> records_;
  std::vector<std::vector<std::byte>> contents_;
  std::vector<std::uint64_t> footprints_;
  std::map<std::uint64_t, AllocId> live_;  // base -> id
  std::vector<FreeBlock> free_list_;
  std::uint64_t bump_ = kArenaBase;
  std::uint64_t live_heap_bytes_ = 0;
  std::uint64_t peak_heap_bytes_ = 0;
  mutable AllocId last_hit_ = kNoAlloc;
};

}  // namespace l4ptr
