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

#include <array>
#include <sstream>

#include "l4ptr/fuzz.hpp"

namespace l4ptr::fuzz {

const char* to_string(Label label) {
  switch (label) {
    case Label::InBounds: return "inbounds";
    case Label::Overflow: return "overflow";
    case Label::Underflow: return "underflow";
    case Label::Wrap: return "wrap";
  }
  return "?";
}

const char* to_string(Storage storage) {
  switch (storage) {
    case Storage::Heap: return "heap";
    case Storage::StackArray: return "stack_array";
    case Storage::GlobalArray: return "global_array";
    case Storage::StructField: return "struct_field";
    case Storage::StoredPointer: return "stored_pointer";
    case Storage::PassedPointer: return "passed_pointer";
  }
  return "?";
}

namespace {

constexpr std::array<const char*, 4> kElements = {"i8", "i32", "i64", "ptr<i64>"};
constexpr std::int64_t kFar = std::int64_t{1} << 24;
constexpr std::int64_t kWrapBytes = std::int64_t{1} << 32;

class Emitter {
 public:
  void line(const std::string& s) { out_ << "  " << s << "\n"; }
  void label(const std::string& s) { out_ << s << ":\n"; }
  void raw(const std::string& s) { out_ << s << "\n"; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

struct Plan {
  Storage storage;
  std::string elem;
  bool elem_is_ptr;
  std::int64_t count;
  Label label;
  std::int64_t index;
  std::vector<std::int64_t> parts;  // element steps of the pointer arithmetic chain
  bool is_store;
};

std::string unit(const Plan& p) { return p.storage == Storage::StructField ? "Rec" : p.elem; }

// Declarations used by the access sequence, emitted at the top of a function.
void access_locals(Emitter& e, const Plan& p) {
  const std::string u = unit(p);
  for (std::size_t k = 0; k < p.parts.size() + (p.label == Label::Wrap ? 1 : 0); ++k) {
    e.line("var q" + std::to_string(k) + ": ptr<" + u + ">");
  }
  if (p.storage == Storage::StructField) e.line("var fa: ptr<" + p.elem + ">");
  e.line("var v: " + p.elem);
  e.line("var back: " + p.elem);
  e.line("var w: i64");
  if (p.elem_is_ptr) e.line("var z: i64");
}

// Pointer arithmetic chain from `from`, then one load or store and a print of the
// value read back. `cell` is the pointer stored into pointer elements.
void access_sequence(Emitter& e, const Plan& p, const std::string& from) {
  const std::string u = unit(p);
  std::string cur = from;
  int k = 0;
  auto step = [&](const std::string& amount) {
    const std::string next = "q" + std::to_string(k++);
    e.line("ptradd " + next + ", " + cur + ", " + amount);
    cur = next;
  };
  if (p.label == Label::Wrap) step(std::to_string(kWrapBytes));
  for (std::int64_t part : p.parts) step(std::to_string(part) + " * sizeof(" + u + ")");
  std::string target = cur;
  if (p.storage == Storage::StructField) {
    e.line("fieldaddr fa, " + cur + ", val");
    target = "fa";
  }
  if (p.is_store) {
    e.line("store " + target + ", " + std::string(p.elem_is_ptr ? "cell" : "5"));
  } else {
    e.line("load v, " + target);
  }
  e.line("load back, " + target);
  if (p.elem_is_ptr) {
    e.line("isnull z, back");
    e.line("br z, was_null, deref");
    e.label("deref");
    e.line("load w, back");
    e.line("jmp report");
    e.label("was_null");
    e.line("mov w, -1");
    e.label("report");
  } else {
    e.line("mov w, back");
  }
  e.line("extcall print(w)");
}

std::string render(const Plan& p) {
  Emitter e;
  const std::string n = std::to_string(p.count);
  const std::string u = unit(p);
  e.raw("# storage " + std::string(to_string(p.storage)) + ", element " + p.elem + ", label " +
        to_string(p.label) + ", index " + std::to_string(p.index));
  e.raw("");
  if (p.storage == Storage::StructField) {
    e.raw("struct Rec {");
    e.raw("  key: i64,");
    e.raw("  link: ptr<i64>,");
    e.raw("  val: " + p.elem + ",");
    e.raw("}");
    e.raw("");
  }
  if (p.storage == Storage::GlobalArray) {
    e.raw("global garr: [" + p.elem + "; " + n + "]");
    e.raw("");
  }
  e.raw("extern print(i64)");
  e.raw("");

  if (p.storage == Storage::PassedPointer) {
    e.raw("fn touch(p: ptr<" + p.elem + ">, cell: ptr<i64>) -> i64 {");
    access_locals(e, p);
    access_sequence(e, p, "p");
    e.line("ret 0");
    e.raw("}");
    e.raw("");
  }

  e.raw("fn main() -> i64 {");
  e.line("var base: ptr<" + u + ">");
  e.line("var cell: ptr<i64>");
  e.line("var slot: ptr<" + u + ">");
  if (p.storage == Storage::StructField) e.line("var field: ptr<" + p.elem + ">");
  if (p.storage == Storage::StackArray) e.line("var arr: [" + p.elem + "; " + n + "]");
  if (p.storage == Storage::StoredPointer) e.line("var holder: ptr<ptr<" + p.elem + ">>");
  e.line("var i: i64");
  e.line("var c: i64");
  e.line("var x: i64");
  e.line("var narrow: " + p.elem);
  if (p.storage != Storage::PassedPointer) access_locals(e, p);

  e.line("alloc cell, sizeof(i64)");
  e.line("store cell, 7");
  switch (p.storage) {
    case Storage::Heap:
    case Storage::PassedPointer:
      e.line("alloc base, " + n + " * sizeof(" + u + ")");
      break;
    case Storage::StructField:
      e.line("alloc base, " + n + " * sizeof(Rec)");
      break;
    case Storage::StackArray:
      e.line("index base, arr, 0");
      break;
    case Storage::GlobalArray:
      e.line("index base, garr, 0");
      break;
    case Storage::StoredPointer:
      e.line("alloc holder, sizeof(ptr<" + p.elem + ">)");
      e.line("alloc slot, " + n + " * sizeof(" + u + ")");
      e.line("store holder, slot");
      e.line("load base, holder");
      break;
  }

  e.line("mov i, 0");
  e.label("fill");
  e.line("lt c, i, " + n);
  e.line("br c, fill_body, filled");
  e.label("fill_body");
  e.line("ptradd slot, base, i * sizeof(" + u + ")");
  std::string elem_slot = "slot";
  if (p.storage == Storage::StructField) {
    e.line("fieldaddr field, slot, val");
    elem_slot = "field";
  }
  if (p.elem_is_ptr) {
    e.line("store " + elem_slot + ", cell");
  } else {
    e.line("mul x, i, 3");
    e.line("mov narrow, x");
    e.line("store " + elem_slot + ", narrow");
  }
  e.line("add i, i, 1");
  e.line("jmp fill");
  e.label("filled");

  if (p.storage == Storage::PassedPointer) {
    e.line("call x, touch(base, cell)");
  } else {
    access_sequence(e, p, "base");
  }
  if (p.storage == Storage::Heap || p.storage == Storage::StructField || p.storage == Storage::PassedPointer) {
    e.line("free base");
  }
  e.line("free cell");
  e.line("ret 0");
  e.raw("}");
  return e.str();
}

}  // namespace

ProgramGenerator::ProgramGenerator(std::uint64_t seed, GeneratorOptions options) : rng_(seed), options_(options) {}

GeneratedCase ProgramGenerator::next() {
  auto uniform = [this](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  };
  Plan p;
  p.storage = static_cast<Storage>(uniform(0, 5));
  p.elem = kElements[static_cast<std::size_t>(uniform(0, 3))];
  p.elem_is_ptr = p.elem == "ptr<i64>";
  p.count = uniform(1, 48);
  p.is_store = uniform(0, 1) == 1;

  if (options_.force_wrap && uniform(0, 3) == 0) {
    p.label = Label::Wrap;
  } else if (options_.in_bounds_only) {
    p.label = Label::InBounds;
  } else {
    const std::int64_t r = uniform(0, 9);
    p.label = r < 4 ? Label::InBounds : r < 7 ? Label::Overflow : Label::Underflow;
  }

  const std::int64_t n = p.count;
  switch (p.label) {
    case Label::InBounds:
    case Label::Wrap:
      p.index = uniform(0, n - 1);
      break;
    case Label::Overflow: {
      const std::int64_t r = uniform(0, 3);
      p.index = r < 2 ? n : r == 2 ? n + uniform(1, 2 * n) : uniform(n, kFar);
      break;
    }
    case Label::Underflow: {
      const std::int64_t r = uniform(0, 3);
      p.index = r < 2 ? -1 : r == 2 ? -uniform(1, 2 * n) : -uniform(1, kFar);
      break;
    }
  }

  // Split the index into a chain of steps; intermediate positions may leave
  // the object as long as the final one is the labelled index.
  const int chain = static_cast<int>(uniform(1, 3));
  std::int64_t sum = 0;
  for (int k = 0; k + 1 < chain; ++k) {
    const std::int64_t part = uniform(-n - 3, n + 3);
    p.parts.push_back(part);
    sum += part;
  }
  p.parts.push_back(p.index - sum);

  GeneratedCase out;
  out.source = render(p);
  out.label = p.label;
  out.storage = p.storage;
  out.element = p.elem;
  out.index = p.index;
  out.chain_length = chain;
  out.is_store = p.is_store;
  return out;
}

}  // namespace l4ptr::fuzz
