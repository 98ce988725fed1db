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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "l4ptr/bench.hpp"
#include "l4ptr/error.hpp"
#include "l4ptr/fuzz.hpp"
#include "l4ptr/minic/parser.hpp"
#include "l4ptr/minic/typecheck.hpp"

using namespace l4ptr;
using namespace l4ptr::minic;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(L4PTR_CORPUS_DIR)) {
    const auto name = e.path().filename().string();
    if (e.path().extension() == ".mir" && name.find(".l4.") == std::string::npos) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void check_round_trip(const std::string& source) {
  const Program a = parse(source);
  const std::string printed = print(a);
  const Program b = parse(printed);
  REQUIRE(a == b);
  REQUIRE(print(b) == printed);
}

// Random type trees, with their sizes computed by a separate recursion over
// the test's own description rather than through Layout.
struct TypeGen {
  std::mt19937_64 rng;
  std::vector<std::string> struct_text;
  std::vector<std::uint64_t> struct_sizes;

  std::pair<std::string, std::uint64_t> type(int depth) {
    const int pick = static_cast<int>(rng() % (depth > 2 ? 4 : 7));
    switch (pick) {
      case 0: return {"i8", 1};
      case 1: return {"i32", 4};
      case 2: return {"i64", 8};
      case 3: {
        auto inner = type(depth + 1);
        return {"ptr<" + inner.first + ">", 8};
      }
      case 4: {
        auto inner = type(depth + 1);
        const std::uint64_t n = 1 + rng() % 6;
        return {"[" + inner.first + "; " + std::to_string(n) + "]", n * inner.second};
      }
      default: {
        const std::size_t idx = struct_text.size();
        struct_text.emplace_back();
        struct_sizes.push_back(0);
        std::string body;
        std::uint64_t total = 0;
        const int fields = 1 + static_cast<int>(rng() % 4);
        for (int f = 0; f < fields; ++f) {
          auto ft = type(depth + 1);
          body += "  f" + std::to_string(f) + ": " + ft.first + ",\n";
          total += (ft.second + 7) / 8 * 8;
        }
        struct_text[idx] = "struct S" + std::to_string(idx) + " {\n" + body + "}\n";
        struct_sizes[idx] = total;
        return {"S" + std::to_string(idx), total};
      }
    }
  }
};

}  // namespace

TEST_SUITE("minic") {

TEST_CASE("minimal program") {
  const Program p = parse("fn main(){ ret 0 }");
  REQUIRE(p.functions.size() == 1);
  CHECK(p.functions[0].name == "main");
  CHECK(p.functions[0].body.size() == 1);
}

TEST_CASE("byte buffer program parses into two functions") {
  const Program p = parse(slurp(std::filesystem::path(L4PTR_CORPUS_DIR) / "callee_store.mir"));
  CHECK(p.functions.size() == 2);
  CHECK(p.find_function("foo") != nullptr);
  CHECK(p.find_function("main") != nullptr);
  CHECK_NOTHROW(typecheck(p, CheckMode::Source));
}

TEST_CASE("unbalanced brace reports its line") {
  const std::string src = "fn main() -> i64 {\n  var x: i64\n  mov x, 1\n  ret x\n";
  try {
    parse(src);
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 18);
  }
  try {
    parse("fn f() -> i64 {\n  ret 0\n}\n\nfn main() -> i64 {\n  ret 0\n");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 5);
  }
  try {
    parse("fn main() -> i64 {\n  mov x, 1,\n  ret 0\n}\n");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("duplicate symbols") {
  CHECK_THROWS_AS(parse("fn f() { ret 0 }\nfn f() { ret 0 }\n"), DuplicateSymbol);
  CHECK_THROWS_AS(parse("struct A {\n  x: i64,\n}\nstruct A {\n  y: i64,\n}\n"), DuplicateSymbol);
  CHECK_THROWS_AS(parse("fn f() {\n  var a: i64\n  var a: i64\n  ret 0\n}\n"), DuplicateSymbol);
}

TEST_CASE("instructions carry line and column") {
  const Program p = parse("fn main() -> i64 {\n  var x: i64\n    mov x, 1\n  ret x\n}\n");
  const auto& body = p.functions[0].body;
  CHECK(body[0].loc.line == 3);
  CHECK(body[0].loc.column == 5);
  CHECK(body[1].loc.line == 4);
}

TEST_CASE("type errors") {
  CHECK_THROWS_AS(typecheck(parse("fn main() -> i64 {\n  var p: ptr<i8>\n  var v: i64\n  alloc p, 4\n  mov v, 7\n"
                                  "  store p, v\n  ret 0\n}\n")),
                  TypeError);
  CHECK_THROWS_AS(typecheck(parse("struct N {\n  val: i64,\n}\nfn main() -> i64 {\n  var n: ptr<N>\n"
                                  "  var f: ptr<i64>\n  alloc n, sizeof(N)\n  fieldaddr f, n, missing\n  ret 0\n}\n")),
                  TypeError);
  CHECK_THROWS_AS(typecheck(parse("fn main() -> i64 {\n  var q: l4<i8>\n  ret 0\n}\n"), CheckMode::Source),
                  TypeError);
  CHECK_THROWS_AS(typecheck(parse("fn main() -> i64 {\n  extcall nothing()\n  ret 0\n}\n")), Error);
}

TEST_CASE("linked list struct layout") {
  const Program p = parse("struct Node {\n  next: ptr<Node>,\n  val: i64,\n}\n");
  CHECK_NOTHROW(typecheck(p));
  const Layout layout(p);
  CHECK(layout.size_of(Type::struct_ref("Node")) == 16);
  CHECK(layout.field_offset("Node", "val") == 8);
}

TEST_CASE("sizeof matches the layout rules over random type trees") {
  TypeGen gen{std::mt19937_64(31), {}, {}};
  for (int round = 0; round < 300; ++round) {
    gen.struct_text.clear();
    gen.struct_sizes.clear();
    const auto top = gen.type(0);
    std::string src;
    for (const auto& s : gen.struct_text) src += s;
    src += "fn main() -> i64 {\n  var probe: ptr<" + top.first + ">\n  ret 0\n}\n";
    const Program p = parse(src);
    const Layout layout(p);
    for (std::size_t i = 0; i < gen.struct_sizes.size(); ++i) {
      REQUIRE(layout.size_of(Type::struct_ref("S" + std::to_string(i))) == gen.struct_sizes[i]);
    }
    const Type t = p.functions[0].locals[0].type.elem();
    REQUIRE(layout.size_of(t) == top.second);
    check_round_trip(src);
  }
}

TEST_CASE("corpus files round trip through the printer") {
  const auto files = corpus_files();
  REQUIRE(files.size() >= 9);
  for (const auto& f : files) {
    CAPTURE(f.string());
    check_round_trip(slurp(f));
    CHECK_NOTHROW(typecheck(parse(slurp(f)), CheckMode::Source));
  }
}

TEST_CASE("generated and benchmark programs round trip") {
  fuzz::ProgramGenerator gen(32, {true, false});
  for (int i = 0; i < 200; ++i) check_round_trip(gen.next().source);
  bench::BenchSpec spec;
  for (int k = 0; k <= 3; ++k) {
    spec.pointer_fields_per_node = k;
    check_round_trip(bench::workload_source(spec, 16));
  }
}

TEST_CASE("raw address stores carry their width") {
  const std::string src = "fn main() -> i64 {\n  var a: i64\n  store a, 97 : i8\n  ret 0\n}\n";
  const Program p = parse(src);
  REQUIRE(p.functions[0].body[0].access_type.has_value());
  CHECK(*p.functions[0].body[0].access_type == Type::i8());
  check_round_trip(src);
}

}  // TEST_SUITE
