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

#include "l4ptr/memsim.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>

#include "l4ptr/error.hpp"
#include "l4ptr/l4core.hpp"

namespace l4ptr {

const char* to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::PoisonedAddress: return "PoisonedAddress";
    case FaultKind::Unmapped: return "Unmapped";
    case FaultKind::OracleOverflow: return "OracleOverflow";
    case FaultKind::OracleUnderflow: return "OracleUnderflow";
    case FaultKind::UseAfterFree: return "UseAfterFree";
  }
  return "?";
}

const char* to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::InBounds: return "InBounds";
    case OracleKind::Overflow: return "Overflow";
    case OracleKind::Underflow: return "Underflow";
    case OracleKind::Unmapped: return "Unmapped";
    case OracleKind::UseAfterFree: return "UseAfterFree";
  }
  return "?";
}

std::string format_fault_line(const Fault& fault) {
  char addr[32];
  std::snprintf(addr, sizeof addr, "0x%llx", static_cast<unsigned long long>(fault.addr));
  std::string line = to_string(fault.kind);
  line += ' ';
  line += addr;
  line += ' ';
  line += fault.alloc_id ? std::to_string(*fault.alloc_id) : "-";
  line += ' ';
  line += fault.pc.empty() ? "-" : fault.pc;
  return line;
}

namespace {

constexpr std::uint64_t align_up(std::uint64_t v, std::uint64_t a) { return (v + a - 1) / a * a; }

bool valid_width(std::size_t w) { return w == 1 || w == 2 || w == 4 || w == 8 || w == 16; }

}  // namespace

std::uint64_t Memory::reserve(std::uint64_t footprint) {
  for (auto it = free_list_.begin(); it != free_list_.end(); ++it) {
    if (it->capacity < footprint) continue;
    const std::uint64_t base = it->base;
    if (it->capacity - footprint >= 2 * kAlignment + kGuardGap) {
      it->base += footprint;
      it->capacity -= footprint;
    } else {
      footprint = it->capacity;
      free_list_.erase(it);
    }
    return base;
  }
  if (bump_ + footprint > kArenaLimit) {
    throw OutOfMemory("simulated arena exhausted");
  }
  const std::uint64_t base = bump_;
  bump_ += footprint;
  return base;
}

std::uint64_t Memory::alloc(std::uint64_t size, RegionKind region) {
  if (size == 0 || size > kMaxObjectSize) {
    throw SizeOutOfRange("allocation size " + std::to_string(size) + " outside (0, 2^31)");
  }
  const std::uint64_t footprint = align_up(size, kAlignment) + kGuardGap;
  const std::uint64_t base = reserve(footprint);

  const auto id = static_cast<AllocId>(records_.size());
  records_.push_back({id, base, size, true, region});
  contents_.emplace_back(size, std::byte{0});
  footprints_.push_back(footprint);
  live_.emplace(base, id);

  if (region == RegionKind::Heap) {
    live_heap_bytes_ += size;
    peak_heap_bytes_ = std::max(peak_heap_bytes_, live_heap_bytes_);
  }
  return base;
}

void Memory::free(std::uint64_t base) {
  auto it = live_.find(base);
  if (it == live_.end()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "free of 0x%llx: not a live allocation base",
                  static_cast<unsigned long long>(base));
    throw InvalidFree(buf);
  }
  AllocationRecord& rec = records_[it->second];
  rec.live = false;
  if (rec.region == RegionKind::Heap) live_heap_bytes_ -= rec.size;
  contents_[rec.id].clear();
  contents_[rec.id].shrink_to_fit();
  free_list_.push_back({rec.base, footprints_[rec.id]});
  if (last_hit_ == rec.id) last_hit_ = kNoAlloc;
  live_.erase(it);
}

const AllocationRecord* Memory::record(AllocId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= records_.size()) return nullptr;
  return &records_[id];
}

const AllocationRecord* Memory::find_live(std::uint64_t addr) const {
  if (last_hit_ != kNoAlloc) {
    const AllocationRecord& r = records_[last_hit_];
    if (addr >= r.base && addr - r.base < r.size) return &r;
  }
  auto it = live_.upper_bound(addr);
  if (it == live_.begin()) return nullptr;
  --it;
  const AllocationRecord& r = records_[it->second];
  if (addr - r.base >= r.size) return nullptr;
  last_hit_ = r.id;
  return &r;
}

std::optional<Fault> Memory::access(std::uint64_t addr, AccessKind kind, std::span<std::byte> data) {
  if (!valid_width(data.size())) {
    return Fault{FaultKind::Unmapped, addr, std::nullopt, "invalid access width", {}};
  }
  if (addr & kPoisonBit) {
    return Fault{FaultKind::PoisonedAddress, addr, std::nullopt, "non-canonical address", {}};
  }
  const AllocationRecord* rec = find_live(addr);
  if (rec == nullptr || addr + data.size() - rec->base > rec->size) {
    return Fault{FaultKind::Unmapped, addr, std::nullopt, "access outside any live allocation", {}};
  }
  std::byte* cell = contents_[rec->id].data() + (addr - rec->base);
  if (kind == AccessKind::Load) {
    std::memcpy(data.data(), cell, data.size());
  } else {
    std::memcpy(cell, data.data(), data.size());
  }
  return std::nullopt;
}

std::optional<Fault> Memory::store(std::uint64_t addr, std::span<const std::byte> in) {
  std::byte tmp[16];
  const std::size_t n = std::min<std::size_t>(in.size(), sizeof tmp);
  std::memcpy(tmp, in.data(), n);
  if (n != in.size()) {
    return Fault{FaultKind::Unmapped, addr, std::nullopt, "invalid access width", {}};
  }
  return access(addr, AccessKind::Store, std::span<std::byte>(tmp, n));
}

OracleVerdict Memory::classify(std::uint64_t addr, std::uint64_t width, AllocId provenance) const {
  const AllocationRecord* rec = record(provenance);
  if (rec == nullptr) return {OracleKind::Unmapped, kNoAlloc};
  if (!rec->live) return {OracleKind::UseAfterFree, rec->id};
  // Signed distance from the base keeps wrapped addresses on the correct side.
  const auto delta = static_cast<std::int64_t>(addr - rec->base);
  if (delta < 0) return {OracleKind::Underflow, rec->id};
  const auto end = static_cast<std::uint64_t>(delta) + width;
  if (static_cast<std::uint64_t>(delta) >= rec->size || end > rec->size) {
    return {OracleKind::Overflow, rec->id};
  }
  return {OracleKind::InBounds, rec->id};
}

}  // namespace l4ptr
