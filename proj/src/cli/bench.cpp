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
#include <bit>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "l4ptr/bench.hpp"
#include "l4ptr/error.hpp"
#include "l4ptr/exec.hpp"
#include "l4ptr/instrument.hpp"
#include "l4ptr/minic/parser.hpp"

namespace l4ptr::bench {

namespace {

constexpr int kRingDegree = 2;
constexpr const char* kInf = "1000000";
constexpr const char* kBig = "1000000000";

class Source {
 public:
  Source& operator<<(const std::string& s) {
    out_ << s << "\n";
    return *this;
  }
  // Instruction line, indented.
  Source& i(const std::string& s) {
    out_ << "  " << s << "\n";
    return *this;
  }
  Source& label(const std::string& s) {
    out_ << s << ":\n";
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string num(std::uint64_t v) { return std::to_string(v); }

// Rounds of the truncated spanning-tree search: 2 log2(n), at most n - 1.
std::uint64_t prim_rounds(std::uint64_t n) {
  return std::min<std::uint64_t>(n - 1, 2 * (std::bit_width(n) - 1));
}

// Four-digit split multiply modulo 10^8, as in a classic portable generator.
void split_mult(Source& s, const std::string& dst, const std::string& p, const std::string& q) {
  s.i("div p1, " + p + ", 10000").i("rem p0, " + p + ", 10000");
  s.i("div q1, " + q + ", 10000").i("rem q0, " + q + ", 10000");
  s.i("mul t, p0, q1").i("mul u, p1, q0").i("add t, t, u").i("rem t, t, 10000").i("mul t, t, 10000");
  s.i("mul u, p0, q0").i("add t, t, u").i("rem " + dst + ", t, 100000000");
}

void weight_function(Source& s, std::uint64_t seed) {
  s << "fn weight(a: i64, b: i64) -> i64 {";
  for (const char* v : {"c", "lo", "hi", "t", "u", "p1", "p0", "q1", "q0", "m", "r"}) {
    s.i(std::string("var ") + v + ": i64");
  }
  s.i("lt c, a, b").i("br c, ordered, swapped");
  s.label("ordered").i("mov lo, a").i("mov hi, b").i("jmp mixed");
  s.label("swapped").i("mov lo, b").i("mov hi, a");
  s.label("mixed");
  s.i("mul r, lo, 65536").i("add r, r, hi").i("add r, r, " + num(seed % 1000003));
  s.i("mov m, 31415821");
  split_mult(s, "r", "r", "m");
  s.i("add r, r, 1");
  split_mult(s, "r", "r", "m");
  s.i("rem r, r, 997").i("add r, r, 1").i("ret r");
  s << "}" << "";
}

// Linked list of vertices, each with a bucket array of edge entries; a
// truncated Prim's algorithm walks the list once per round.
std::string mst_hashed(std::uint64_t n, int k, std::uint64_t seed) {
  const std::uint64_t buckets = std::max<std::uint64_t>(1, n / 4);
  const std::uint64_t rounds = prim_rounds(n);
  const int aux = k - 2;
  const std::string nb = num(buckets);
  Source s;
  s << "# mst-like list workload: " + num(n) + " vertices, " + std::to_string(k) + " pointer fields per vertex" << "";
  s << "struct Entry {" << "  key: i64," << "  dist: i64," << "  next: ptr<Entry>," << "}" << "";
  s << "struct Table {" << "  count: i64," << "  buckets: ptr<ptr<Entry>>," << "}" << "";
  s << "struct Vertex {" << "  mindist: i64," << "  id: i64," << "  next: ptr<Vertex>," << "  edges: ptr<Table>,";
  for (int a = 0; a < aux; ++a) s << "  aux" + std::to_string(a) + ": ptr<Vertex>,";
  s << "}" << "";
  s << "extern print(i64)" << "";
  weight_function(s, seed);

  // Shared prologue of insert and lookup: find the bucket slot for `key`.
  auto bucket_slot = [&s]() {
    s.i("var tf: ptr<ptr<Table>>").i("var table: ptr<Table>").i("var sf: ptr<i64>").i("var bf: ptr<ptr<ptr<Entry>>>");
    s.i("var arr: ptr<ptr<Entry>>").i("var slot: ptr<ptr<Entry>>").i("var nb: i64").i("var b: i64");
    s.i("var e: ptr<Entry>").i("var kf: ptr<i64>").i("var df: ptr<i64>").i("var nf: ptr<ptr<Entry>>");
    s.i("fieldaddr tf, v, edges").i("load table, tf");
    s.i("fieldaddr sf, table, count").i("load nb, sf").i("rem b, key, nb");
    s.i("fieldaddr bf, table, buckets").i("load arr, bf");
    s.i("ptradd slot, arr, b * sizeof(ptr<Entry>)");
  };

  s << "fn insert(v: ptr<Vertex>, key: i64, dist: i64) -> i64 {";
  s.i("var head: ptr<Entry>");
  bucket_slot();
  s.i("load head, slot");
  s.i("alloc e, sizeof(Entry)");
  s.i("fieldaddr kf, e, key").i("store kf, key");
  s.i("fieldaddr df, e, dist").i("store df, dist");
  s.i("fieldaddr nf, e, next").i("store nf, head");
  s.i("store slot, e").i("ret 0");
  s << "}" << "";

  s << "fn lookup(v: ptr<Vertex>, key: i64) -> i64 {";
  s.i("var k: i64").i("var c: i64").i("var d: i64");
  bucket_slot();
  s.i("load e, slot");
  s.label("walk").i("isnull c, e").i("br c, absent, probe");
  s.label("probe").i("fieldaddr kf, e, key").i("load k, kf").i("eq c, k, key").i("br c, found, advance");
  s.label("advance").i("fieldaddr nf, e, next").i("load e, nf").i("jmp walk");
  s.label("found").i("fieldaddr df, e, dist").i("load d, df").i("ret d");
  s.label("absent").i(std::string("ret ") + kInf);
  s << "}" << "";

  const std::string N = num(n);
  s << "fn main() -> i64 {";
  s.i("var verts: ptr<ptr<Vertex>>").i("var vslot: ptr<ptr<Vertex>>");
  for (const char* v : {"v", "u", "head", "tmp", "prev", "best", "bestprev"}) s.i(std::string("var ") + v + ": ptr<Vertex>");
  s.i("var table: ptr<Table>").i("var arr: ptr<ptr<Entry>>").i("var sf: ptr<i64>").i("var bf: ptr<ptr<ptr<Entry>>>");
  s.i("var pf: ptr<ptr<Vertex>>").i("var ef: ptr<ptr<Table>>");
  s.i("var af: ptr<ptr<Vertex>>").i("var mf: ptr<i64>").i("var idf: ptr<i64>");
  for (const char* v : {"i", "j", "d", "w", "c", "md", "bestd", "cost", "r", "inserted", "acc", "x"}) {
    s.i(std::string("var ") + v + ": i64");
  }
  s.i("alloc verts, " + N + " * sizeof(ptr<Vertex>)");
  s.i("mov head, null").i("mov acc, 0").i("mov i, 0");
  s.label("make").i("lt c, i, " + N).i("br c, make_body, made");
  s.label("make_body");
  s.i("alloc v, sizeof(Vertex)");
  s.i("fieldaddr mf, v, mindist").i(std::string("store mf, ") + kInf);
  s.i("fieldaddr idf, v, id").i("store idf, i");
  s.i("alloc table, sizeof(Table)").i("fieldaddr sf, table, count").i("store sf, " + nb);
  s.i("alloc arr, " + nb + " * sizeof(ptr<Entry>)").i("fieldaddr bf, table, buckets").i("store bf, arr");
  s.i("fieldaddr ef, v, edges").i("store ef, table");
  s.i("fieldaddr pf, v, next").i("store pf, head").i("mov head, v");
  s.i("ptradd vslot, verts, i * sizeof(ptr<Vertex>)").i("store vslot, v");
  s.i("add i, i, 1").i("jmp make");
  s.label("made").i("mov i, 0");
  s.label("link").i("lt c, i, " + N).i("br c, link_body, linked");
  s.label("link_body");
  s.i("ptradd vslot, verts, i * sizeof(ptr<Vertex>)").i("load v, vslot");
  for (int d = 1; d <= kRingDegree; ++d) {
    const std::string ds = std::to_string(d);
    s.i("add j, i, " + ds).i("rem j, j, " + N).i("eq c, j, i").i("br c, skip" + ds + ", edge" + ds);
    s.label("edge" + ds);
    s.i("ptradd vslot, verts, j * sizeof(ptr<Vertex>)").i("load u, vslot");
    s.i("call w, weight(i, j)").i("call x, insert(v, j, w)").i("call x, insert(u, i, w)");
    s.label("skip" + ds);
  }
  for (int a = 0; a < aux; ++a) {
    s.i("add j, i, " + std::to_string(a + 1)).i("rem j, j, " + N);
    s.i("ptradd vslot, verts, j * sizeof(ptr<Vertex>)").i("load u, vslot");
    s.i("fieldaddr af, v, aux" + std::to_string(a)).i("store af, u");
  }
  s.i("add i, i, 1").i("jmp link");
  s.label("linked").i("free verts");

  s.i("fieldaddr idf, head, id").i("load inserted, idf");
  s.i("fieldaddr pf, head, next").i("load head, pf");
  s.i("mov cost, 0").i("mov r, 0");
  s.label("round").i("lt c, r, " + num(rounds)).i("br c, round_body, finish");
  s.label("round_body").i("mov best, null").i("mov bestprev, null").i("mov prev, null");
  s.i(std::string("mov bestd, ") + kBig).i("mov tmp, head");
  s.label("scan").i("isnull c, tmp").i("br c, scanned, visit");
  s.label("visit");
  s.i("call d, lookup(tmp, inserted)");
  s.i("fieldaddr mf, tmp, mindist").i("load md, mf");
  s.i("lt c, d, md").i("br c, closer, kept");
  s.label("closer").i("store mf, d").i("mov md, d");
  s.label("kept");
  for (int a = 0; a < aux; ++a) {
    s.i("fieldaddr af, tmp, aux" + std::to_string(a)).i("load u, af");
    s.i("fieldaddr idf, u, id").i("load x, idf").i("add acc, acc, x");
  }
  s.i("lt c, md, bestd").i("br c, better, next_vertex");
  s.label("better").i("mov bestd, md").i("mov best, tmp").i("mov bestprev, prev");
  s.label("next_vertex").i("mov prev, tmp").i("fieldaddr pf, tmp, next").i("load tmp, pf").i("jmp scan");
  s.label("scanned");
  s.i("add cost, cost, bestd");
  s.i("fieldaddr idf, best, id").i("load inserted, idf");
  s.i("isnull c, bestprev").i("br c, drop_head, splice");
  s.label("drop_head").i("fieldaddr pf, best, next").i("load head, pf").i("jmp unlinked");
  s.label("splice").i("fieldaddr pf, best, next").i("load tmp, pf").i("fieldaddr pf, bestprev, next").i("store pf, tmp");
  s.label("unlinked").i("add r, r, 1").i("jmp round");
  s.label("finish").i("extcall print(cost)").i("extcall print(acc)").i("ret 0");
  s << "}";
  return s.str();
}

// One pointer field: the list link. Distances come from the weight function.
std::string mst_plain_list(std::uint64_t n, std::uint64_t seed) {
  const std::uint64_t rounds = prim_rounds(n);
  Source s;
  s << "# mst-like list workload: " + num(n) + " vertices, 1 pointer field per vertex" << "";
  s << "struct Vertex {" << "  mindist: i64," << "  id: i64," << "  next: ptr<Vertex>," << "}" << "";
  s << "extern print(i64)" << "";
  weight_function(s, seed);
  s << "fn main() -> i64 {";
  for (const char* v : {"v", "head", "tmp", "prev", "best", "bestprev"}) s.i(std::string("var ") + v + ": ptr<Vertex>");
  s.i("var pf: ptr<ptr<Vertex>>").i("var mf: ptr<i64>").i("var idf: ptr<i64>");
  for (const char* v : {"i", "d", "c", "md", "bestd", "cost", "r", "inserted", "id"}) s.i(std::string("var ") + v + ": i64");
  s.i("mov head, null").i("mov i, 0");
  s.label("make").i("lt c, i, " + num(n)).i("br c, make_body, made");
  s.label("make_body").i("alloc v, sizeof(Vertex)");
  s.i("fieldaddr mf, v, mindist").i(std::string("store mf, ") + kInf);
  s.i("fieldaddr idf, v, id").i("store idf, i");
  s.i("fieldaddr pf, v, next").i("store pf, head").i("mov head, v");
  s.i("add i, i, 1").i("jmp make");
  s.label("made");
  s.i("fieldaddr idf, head, id").i("load inserted, idf").i("fieldaddr pf, head, next").i("load head, pf");
  s.i("mov cost, 0").i("mov r, 0");
  s.label("round").i("lt c, r, " + num(rounds)).i("br c, round_body, finish");
  s.label("round_body").i("mov best, null").i("mov bestprev, null").i("mov prev, null");
  s.i(std::string("mov bestd, ") + kBig).i("mov tmp, head");
  s.label("scan").i("isnull c, tmp").i("br c, scanned, visit");
  s.label("visit");
  s.i("fieldaddr idf, tmp, id").i("load id, idf").i("call d, weight(inserted, id)");
  s.i("fieldaddr mf, tmp, mindist").i("load md, mf");
  s.i("lt c, d, md").i("br c, closer, kept");
  s.label("closer").i("store mf, d").i("mov md, d");
  s.label("kept").i("lt c, md, bestd").i("br c, better, next_vertex");
  s.label("better").i("mov bestd, md").i("mov best, tmp").i("mov bestprev, prev");
  s.label("next_vertex").i("mov prev, tmp").i("fieldaddr pf, tmp, next").i("load tmp, pf").i("jmp scan");
  s.label("scanned").i("add cost, cost, bestd");
  s.i("fieldaddr idf, best, id").i("load inserted, idf");
  s.i("isnull c, bestprev").i("br c, drop_head, splice");
  s.label("drop_head").i("fieldaddr pf, best, next").i("load head, pf").i("jmp unlinked");
  s.label("splice").i("fieldaddr pf, best, next").i("load tmp, pf").i("fieldaddr pf, bestprev, next").i("store pf, tmp");
  s.label("unlinked").i("add r, r, 1").i("jmp round");
  s.label("finish").i("extcall print(cost)").i("ret 0");
  s << "}";
  return s.str();
}

// No pointer fields: vertices live in one array and are marked when taken.
std::string mst_array(std::uint64_t n, std::uint64_t seed) {
  const std::uint64_t rounds = prim_rounds(n);
  Source s;
  s << "# mst-like array workload: " + num(n) + " vertices, no pointer fields" << "";
  s << "struct Vertex {" << "  mindist: i64," << "  id: i64," << "  taken: i64," << "}" << "";
  s << "extern print(i64)" << "";
  weight_function(s, seed);
  s << "fn main() -> i64 {";
  s.i("var verts: ptr<Vertex>").i("var v: ptr<Vertex>").i("var mf: ptr<i64>").i("var idf: ptr<i64>").i("var tf: ptr<i64>");
  for (const char* v : {"i", "d", "c", "md", "bestd", "best", "cost", "r", "inserted", "t"}) s.i(std::string("var ") + v + ": i64");
  s.i("alloc verts, " + num(n) + " * sizeof(Vertex)").i("mov i, 0");
  s.label("make").i("lt c, i, " + num(n)).i("br c, make_body, made");
  s.label("make_body").i("ptradd v, verts, i * sizeof(Vertex)");
  s.i("fieldaddr mf, v, mindist").i(std::string("store mf, ") + kInf);
  s.i("fieldaddr idf, v, id").i("store idf, i");
  s.i("add i, i, 1").i("jmp make");
  s.label("made").i("fieldaddr tf, verts, taken").i("store tf, 1").i("mov inserted, 0");
  s.i("mov cost, 0").i("mov r, 0");
  s.label("round").i("lt c, r, " + num(rounds)).i("br c, round_body, finish");
  s.label("round_body").i("mov best, -1").i(std::string("mov bestd, ") + kBig).i("mov i, 0");
  s.label("scan").i("lt c, i, " + num(n)).i("br c, visit, scanned");
  s.label("visit").i("ptradd v, verts, i * sizeof(Vertex)");
  s.i("fieldaddr tf, v, taken").i("load t, tf").i("br t, next_vertex, open");
  s.label("open").i("call d, weight(inserted, i)");
  s.i("fieldaddr mf, v, mindist").i("load md, mf");
  s.i("lt c, d, md").i("br c, closer, kept");
  s.label("closer").i("store mf, d").i("mov md, d");
  s.label("kept").i("lt c, md, bestd").i("br c, better, next_vertex");
  s.label("better").i("mov bestd, md").i("mov best, i");
  s.label("next_vertex").i("add i, i, 1").i("jmp scan");
  s.label("scanned").i("add cost, cost, bestd");
  s.i("ptradd v, verts, best * sizeof(Vertex)").i("fieldaddr tf, v, taken").i("store tf, 1");
  s.i("mov inserted, best").i("add r, r, 1").i("jmp round");
  s.label("finish").i("free verts").i("extcall print(cost)").i("ret 0");
  s << "}";
  return s.str();
}

// A heap array of integers summed over several passes.
std::string array_sweep(std::uint64_t n) {
  Source s;
  s << "# array sweep: " + num(n) + " elements" << "";
  s << "extern print(i64)" << "";
  s << "fn main() -> i64 {";
  s.i("var a: ptr<i64>").i("var p: ptr<i64>");
  for (const char* v : {"i", "c", "v", "sum", "pass"}) s.i(std::string("var ") + v + ": i64");
  s.i("alloc a, " + num(n) + " * sizeof(i64)").i("mov i, 0");
  s.label("fill").i("lt c, i, " + num(n)).i("br c, fill_body, filled");
  s.label("fill_body").i("ptradd p, a, i * sizeof(i64)").i("store p, i").i("add i, i, 1").i("jmp fill");
  s.label("filled").i("mov sum, 0").i("mov pass, 0");
  s.label("outer").i("lt c, pass, 4").i("br c, pass_body, done");
  s.label("pass_body").i("mov i, 0");
  s.label("inner").i("lt c, i, " + num(n)).i("br c, inner_body, inner_done");
  s.label("inner_body").i("ptradd p, a, i * sizeof(i64)").i("load v, p").i("add sum, sum, v").i("add i, i, 1").i("jmp inner");
  s.label("inner_done").i("add pass, pass, 1").i("jmp outer");
  s.label("done").i("free a").i("extcall print(sum)").i("ret 0");
  s << "}";
  return s.str();
}

// An array of pointers to records that each carry k pointer fields.
std::string struct_heavy(std::uint64_t n, int k) {
  Source s;
  s << "# struct-heavy workload: " + num(n) + " records, " + std::to_string(k) + " pointer fields each" << "";
  s << "struct Rec {" << "  val: i64,";
  for (int f = 0; f < k; ++f) s << "  p" + std::to_string(f) + ": ptr<Rec>,";
  s << "}" << "";
  s << "extern print(i64)" << "";
  s << "fn main() -> i64 {";
  s.i("var recs: ptr<ptr<Rec>>").i("var slot: ptr<ptr<Rec>>").i("var r: ptr<Rec>").i("var q: ptr<Rec>");
  s.i("var vf: ptr<i64>").i("var pf: ptr<ptr<Rec>>");
  for (const char* v : {"i", "c", "v", "sum"}) s.i(std::string("var ") + v + ": i64");
  s.i("alloc recs, " + num(n) + " * sizeof(ptr<Rec>)").i("mov q, null").i("mov i, 0");
  s.label("make").i("lt c, i, " + num(n)).i("br c, make_body, made");
  s.label("make_body").i("alloc r, sizeof(Rec)").i("fieldaddr vf, r, val").i("store vf, i");
  for (int f = 0; f < k; ++f) s.i("fieldaddr pf, r, p" + std::to_string(f)).i("store pf, q");
  s.i("ptradd slot, recs, i * sizeof(ptr<Rec>)").i("store slot, r").i("mov q, r").i("add i, i, 1").i("jmp make");
  s.label("made").i("mov sum, 0").i("mov i, 0");
  s.label("walk").i("lt c, i, " + num(n)).i("br c, walk_body, done");
  s.label("walk_body").i("ptradd slot, recs, i * sizeof(ptr<Rec>)").i("load r, slot");
  s.i("fieldaddr vf, r, val").i("load v, vf").i("add sum, sum, v");
  for (int f = 0; f < k; ++f) {
    const std::string skip = "skip" + std::to_string(f);
    const std::string use = "use" + std::to_string(f);
    s.i("fieldaddr pf, r, p" + std::to_string(f)).i("load q, pf").i("isnull c, q").i("br c, " + skip + ", " + use);
    s.label(use).i("fieldaddr vf, q, val").i("load v, vf").i("add sum, sum, v");
    s.label(skip);
  }
  s.i("add i, i, 1").i("jmp walk");
  s.label("done").i("extcall print(sum)").i("ret 0");
  s << "}";
  return s.str();
}

double ratio(std::uint64_t a, std::uint64_t b) { return b == 0 ? 1.0 : static_cast<double>(a) / static_cast<double>(b); }

}  // namespace

std::string workload_source(const BenchSpec& spec, std::uint64_t size) {
  if (size < 1) throw Error("workload size must be at least 1");
  switch (spec.workload) {
    case Workload::MstList:
      if (size < 2) throw Error("mst_list needs at least 2 vertices");
      if (spec.pointer_fields_per_node == 0) return mst_array(size, spec.seed);
      if (spec.pointer_fields_per_node == 1) return mst_plain_list(size, spec.seed);
      return mst_hashed(size, spec.pointer_fields_per_node, spec.seed);
    case Workload::ArraySweep: return array_sweep(size);
    case Workload::StructHeavy: return struct_heavy(size, spec.pointer_fields_per_node);
  }
  throw Error("unknown workload");
}

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  spec.validate();
  std::vector<BenchRow> rows;
  exec::RunOptions options;
  options.seed = spec.seed;
  for (std::uint64_t size : spec.sizes) {
    const minic::Program plain = minic::parse(workload_source(spec, size));
    const minic::Program l4 = instrument::instrument(plain).first;
    const exec::Outcome a = exec::run(plain, options);
    const exec::Outcome b = exec::run(l4, options);
    for (const exec::Outcome* o : {&a, &b}) {
      if (o->status != exec::Status::Ok) {
        throw Error("bench program of size " + std::to_string(size) + " did not finish: " + to_string(o->status) +
                    (o->fault ? " " + format_fault_line(*o->fault) : " " + o->message));
      }
    }
    if (a.output != b.output) throw Error("bench program of size " + std::to_string(size) + " changed its output");
    BenchRow row;
    row.size = size;
    row.plain_instr = a.metrics.dynamic_instructions;
    row.l4_instr = b.metrics.dynamic_instructions;
    row.runtime_ratio = ratio(row.l4_instr, row.plain_instr);
    row.plain_bytes = a.metrics.peak_heap_bytes;
    row.l4_bytes = b.metrics.peak_heap_bytes;
    row.memory_ratio = ratio(row.l4_bytes, row.plain_bytes);
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out(kCsvHeader);
  out += "\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%.6f,%llu,%llu,%.6f\n", static_cast<unsigned long long>(r.size),
                  static_cast<unsigned long long>(r.plain_instr), static_cast<unsigned long long>(r.l4_instr),
                  r.runtime_ratio, static_cast<unsigned long long>(r.plain_bytes),
                  static_cast<unsigned long long>(r.l4_bytes), r.memory_ratio);
    out += buf;
  }
  return out;
}

std::string bench_manifest(const BenchSpec& spec, const std::string& csv_path, const std::vector<BenchRow>& rows) {
  nlohmann::ordered_json j;
  j["workload"] = to_string(spec.workload);
  j["sizes"] = spec.sizes;
  j["pointer_fields_per_node"] = spec.pointer_fields_per_node;
  j["seed"] = spec.seed;
  j["csv"] = csv_path;
  nlohmann::ordered_json columns = nlohmann::ordered_json::array();
  std::string_view header = kCsvHeader;
  while (!header.empty()) {
    const auto comma = header.find(',');
    columns.push_back(std::string(header.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    header.remove_prefix(comma + 1);
  }
  j["columns"] = columns;
  j["x"] = "size";
  j["series"] = {"runtime_ratio", "memory_ratio"};
  j["rows"] = rows.size();
  return j.dump(2) + "\n";
}

}  // namespace l4ptr::bench
