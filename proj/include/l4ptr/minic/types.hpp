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

#include <cstdint>
#include <memory>
#include <string>

namespace l4ptr::minic {

enum class TypeKind { Void, Int, Ptr, L4, Array, Struct };

// Immutable type tree with value semantics; element types are shared.
class Type {
 public:
  Type() = default;

  static Type void_type() { return Type(TypeKind::Void); }
  static Type int_type(int bits);
  static Type i8() { return int_type(8); }
  static Type i32() { return int_type(32); }
  static Type i64() { return int_type(64); }
  static Type ptr(Type elem);
  static Type l4(Type elem);
  static Type array(Type elem, std::uint64_t count);
  static Type struct_ref(std::string name);

  TypeKind kind() const { return kind_; }
  int bits() const { return bits_; }
  const Type& elem() const { return *elem_; }
  std::uint64_t count() const { return count_; }
  const std::string& name() const { return name_; }

  bool is_void() const { return kind_ == TypeKind::Void; }
  bool is_int() const { return kind_ == TypeKind::Int; }
  bool is_ptr() const { return kind_ == TypeKind::Ptr; }
  bool is_l4() const { return kind_ == TypeKind::L4; }
  bool is_pointer_like() const { return is_ptr() || is_l4(); }
  bool is_array() const { return kind_ == TypeKind::Array; }
  bool is_struct() const { return kind_ == TypeKind::Struct; }
  // Fits in a register: integers, pointers, L4 pointers.
  bool is_scalar() const { return is_int() || is_pointer_like(); }

  // True if an L4 type occurs anywhere in the tree (struct references are not followed).
  bool contains_l4() const;
  bool contains_ptr() const;

  std::string str() const;

  friend bool operator==(const Type& a, const Type& b);

 private:
  explicit Type(TypeKind kind) : kind_(kind) {}

  TypeKind kind_ = TypeKind::Void;
  int bits_ = 0;
  std::shared_ptr<const Type> elem_;
  std::uint64_t count_ = 0;
  std::string name_;
};

}  // namespace l4ptr::minic
