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

#include "l4ptr/minic/types.hpp"

#include <utility>

namespace l4ptr::minic {

Type Type::int_type(int bits) {
  Type t(TypeKind::Int);
  t.bits_ = bits;
  return t;
}

Type Type::ptr(Type elem) {
  Type t(TypeKind::Ptr);
  t.elem_ = std::make_shared<const Type>(std::move(elem));
  return t;
}

Type Type::l4(Type elem) {
  Type t(TypeKind::L4);
  t.elem_ = std::make_shared<const Type>(std::move(elem));
  return t;
}

Type Type::array(Type elem, std::uint64_t count) {
  Type t(TypeKind::Array);
  t.elem_ = std::make_shared<const Type>(std::move(elem));
  t.count_ = count;
  return t;
}

Type Type::struct_ref(std::string name) {
  Type t(TypeKind::Struct);
  t.name_ = std::move(name);
  return t;
}

bool Type::contains_l4() const {
  switch (kind_) {
    case TypeKind::L4: return true;
    case TypeKind::Ptr:
    case TypeKind::Array: return elem_->contains_l4();
    default: return false;
  }
}

bool Type::contains_ptr() const {
  switch (kind_) {
    case TypeKind::Ptr: return true;
    case TypeKind::L4:
    case TypeKind::Array: return elem_->contains_ptr();
    default: return false;
  }
}

std::string Type::str() const {
  switch (kind_) {
    case TypeKind::Void: return "void";
    case TypeKind::Int: return "i" + std::to_string(bits_);
    case TypeKind::Ptr: return "ptr<" + elem_->str() + ">";
    case TypeKind::L4: return "l4<" + elem_->str() + ">";
    case TypeKind::Array: return "[" + elem_->str() + "; " + std::to_string(count_) + "]";
    case TypeKind::Struct: return name_;
  }
  return "?";
}

bool operator==(const Type& a, const Type& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case TypeKind::Void: return true;
    case TypeKind::Int: return a.bits_ == b.bits_;
    case TypeKind::Ptr:
    case TypeKind::L4: return *a.elem_ == *b.elem_;
    case TypeKind::Array: return a.count_ == b.count_ && *a.elem_ == *b.elem_;
    case TypeKind::Struct: return a.name_ == b.name_;
  }
  return false;
}

}  // namespace l4ptr::minic
