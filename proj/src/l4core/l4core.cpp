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

#include "l4ptr/l4core.hpp"

#include <string>

#include "l4ptr/error.hpp"

namespace l4ptr {

L4Pointer encode(std::uint64_t base, std::uint64_t size) {
  if (size == 0 || size > kMaxObjectSize) {
    throw SizeOutOfRange("object size " + std::to_string(size) + " outside (0, 2^31)");
  }
  const auto upper = static_cast<std::uint32_t>(kFlagBit32 - size);
  return L4Pointer::from_fields(upper, 0, base);
}

}  // namespace l4ptr
