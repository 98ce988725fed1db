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

#include <chrono>
#include <cstring>
#include <map>
#include <random>
#include <unordered_map>

#include "l4ptr/error.hpp"
#include "l4ptr/exec.hpp"
#include "l4ptr/l4core.hpp"
#include "l4ptr/minic/typecheck.hpp"

namespace l4ptr::exec {

using minic::Opcode;
using minic::Operand;
using minic::OperandKind;
using minic::Type;

const char* to_string(Status status) {
  switch (status) {
    case Status::Ok: return "ok";
    case Status::Fault: return "fault";
    case Status::Trap: return "trap";
    case Status::LimitExceeded: return "limit";
  }
  return "?";
}

bool RunMetrics::same_counts(const RunMetrics& o) const {
  return dynamic_instructions == o.dynamic_instructions && lane_add_count == o.lane_add_count &&
         deref_count == o.deref_count && peak_heap_bytes == o.peak_heap_bytes && histogram == o.histogram;
}

bool Outcome::same_as(const Outcome& o) const {
  auto fault_key = [](const std::optional<Fault>& f) {
    return f ? format_fault_line(*f) + "|" + f->detail : std::string();
  };
  return status == o.status && exit_code == o.exit_code && fault_key(fault) == fault_key(o.fault) &&
         message == o.message && output == o.output && metrics.same_counts(o.metrics) &&
         fault_log == o.fault_log && first_violation == o.first_violation && violations == o.violations;
}

std::vector<std::string> builtin_externs() {
  return {"print", "puts", "dup", "identity", "rand", "getarg", "argc"};
}

namespace {

enum class Builtin { Print, Puts, Dup, Identity, Rand, GetArg, ArgCount };

struct BuiltinSig {
  const char* name;
  Builtin id;
  std::size_t arity;
};

constexpr BuiltinSig kBuiltins[] = {
    {"print", Builtin::Print, 1}, {"puts", Builtin::Puts, 1},     {"dup", Builtin::Dup, 2},
    {"identity", Builtin::Identity, 1}, {"rand", Builtin::Rand, 1}, {"getarg", Builtin::GetArg, 1},
    {"argc", Builtin::ArgCount, 0},
};

enum MaskBits : std::uint8_t { kMasked = 1, kTagged = 2 };

struct Value {
  std::uint64_t lo = 0;  // integer value, raw address, or L4 address lane
  std::uint64_t hi = 0;  // L4 bound lanes; for a masked address, the address lane before masking
  AllocId prov = kNoAlloc;
  std::uint8_t mask = 0;  // MaskBits of an address produced by l4.poison
};

// How a value occupies memory.
enum class Repr : std::uint8_t { Int, Ptr, L4 };

struct Shape {
  Repr repr = Repr::Int;
  int bits = 64;
  std::uint32_t width = 8;
};

std::int64_t sext(std::uint64_t v, int bits) {
  if (bits >= 64) return static_cast<std::int64_t>(v);
  const int shift = 64 - bits;
  return static_cast<std::int64_t>(v << shift) >> shift;
}

struct COperand {
  enum class K : std::uint8_t { None, Local, Global, Imm };
  K k = K::None;
  std::int32_t index = 0;
  std::int64_t imm = 0;
};

struct CSize {
  COperand lhs;
  COperand rhs;
  bool has_rhs = false;
};

struct CInstr {
  Opcode op = Opcode::Label;
  std::int32_t src_index = 0;
  std::int32_t dst = -1;
  int dst_bits = 0;  // non-zero when the destination is an integer
  COperand a;
  COperand b;
  std::vector<COperand> call_args;
  CSize size;
  Shape shape;  // load/store value shape
  std::int64_t offset = 0;  // field offset or element size
  std::int32_t t0 = 0;
  std::int32_t t1 = 0;
  std::int32_t callee = -1;
  Builtin builtin = Builtin::Print;
};

struct CFunction {
  std::string name;
  std::size_t nparams = 0;
  std::size_t nslots = 0;
  std::vector<int> param_bits;
  int ret_bits = 0;
  std::vector<std::pair<std::int32_t, std::uint64_t>> arrays;  // slot, byte size
  std::vector<CInstr> code;
};

struct CProgram {
  std::vector<CFunction> functions;
  std::vector<std::uint64_t> global_sizes;
  std::int32_t main_index = -1;
};

class Compiler {
 public:
  explicit Compiler(const minic::Program& p) : prog_(p), layout_(p) {}

  CProgram compile() {
    CProgram out;
    for (const auto& g : prog_.globals) {
      global_index_.emplace(g.name, static_cast<std::int32_t>(global_index_.size()));
      out.global_sizes.push_back(layout_.size_of(g.type));
    }
    for (std::size_t i = 0; i < prog_.functions.size(); ++i) {
      function_index_.emplace(prog_.functions[i].name, static_cast<std::int32_t>(i));
    }
    for (const auto& e : prog_.externs) {
      const BuiltinSig* sig = nullptr;
      for (const auto& b : kBuiltins) {
        if (e.name == b.name) sig = &b;
      }
      if (sig == nullptr) throw Error("external function '" + e.name + "' is not provided by the interpreter");
      if (sig->arity != e.params.size()) {
        throw Error("external function '" + e.name + "' takes " + std::to_string(sig->arity) + " arguments");
      }
    }
    for (const auto& fn : prog_.functions) out.functions.push_back(compile_function(fn));
    auto it = function_index_.find("main");
    if (it == function_index_.end()) throw Error("program has no 'main' function");
    if (!prog_.functions[it->second].params.empty()) throw Error("'main' must not take parameters");
    out.main_index = it->second;
    return out;
  }

 private:
  static int int_bits(const Type& t) { return t.is_int() ? t.bits() : 0; }

  Shape shape_of(const Type& t) const {
    if (t.is_int()) return {Repr::Int, t.bits(), static_cast<std::uint32_t>(t.bits() / 8)};
    if (t.is_ptr()) return {Repr::Ptr, 64, 8};
    if (t.is_l4()) return {Repr::L4, 64, 16};
    throw TypeError("value of type " + t.str() + " cannot be loaded or stored");
  }

  const Type& type_of(const std::string& name) const {
    auto it = slot_types_.find(name);
    if (it != slot_types_.end()) return it->second;
    const minic::Global* g = prog_.find_global(name);
    if (g == nullptr) throw TypeError("unknown variable '" + name + "'");
    return g->type;
  }

  COperand operand(const Operand& op) const {
    COperand c;
    switch (op.kind) {
      case OperandKind::None: break;
      case OperandKind::Imm:
        c.k = COperand::K::Imm;
        c.imm = op.imm;
        break;
      case OperandKind::Null: c.k = COperand::K::Imm; break;
      case OperandKind::SizeOf:
        c.k = COperand::K::Imm;
        c.imm = static_cast<std::int64_t>(layout_.size_of(op.type));
        break;
      case OperandKind::Var:
      case OperandKind::AddrOf: {
        auto it = slots_.find(op.name);
        if (it != slots_.end()) {
          c.k = COperand::K::Local;
          c.index = it->second;
        } else {
          auto g = global_index_.find(op.name);
          if (g == global_index_.end()) throw TypeError("unknown variable '" + op.name + "'");
          c.k = COperand::K::Global;
          c.index = g->second;
        }
        break;
      }
    }
    return c;
  }

  CSize size(const minic::SizeExpr& e) const {
    CSize s;
    s.lhs = operand(e.lhs);
    if (e.rhs) {
      s.rhs = operand(*e.rhs);
      s.has_rhs = true;
    }
    return s;
  }

  CFunction compile_function(const minic::Function& fn) {
    slots_.clear();
    slot_types_.clear();
    CFunction cf;
    cf.name = fn.name;
    cf.nparams = fn.params.size();
    cf.ret_bits = int_bits(fn.ret);
    auto add_slot = [&](const minic::Variable& v) {
      const auto slot = static_cast<std::int32_t>(slots_.size());
      slots_.emplace(v.name, slot);
      slot_types_.emplace(v.name, v.type);
      if (v.type.is_array()) cf.arrays.emplace_back(slot, layout_.size_of(v.type));
    };
    for (const auto& v : fn.params) {
      add_slot(v);
      cf.param_bits.push_back(int_bits(v.type));
    }
    for (const auto& v : fn.locals) add_slot(v);
    cf.nslots = slots_.size();

    std::map<std::string, std::int32_t> labels;
    std::int32_t n = 0;
    for (const auto& ins : fn.body) {
      if (ins.op == Opcode::Label) {
        labels.emplace(ins.symbol, n);
      } else {
        ++n;
      }
    }
    for (std::size_t i = 0; i < fn.body.size(); ++i) {
      const minic::Instruction& ins = fn.body[i];
      if (ins.op == Opcode::Label) continue;
      CInstr c;
      c.op = ins.op;
      c.src_index = static_cast<std::int32_t>(i);
      if (!ins.dst.empty()) {
        c.dst = slots_.at(ins.dst);
        c.dst_bits = int_bits(slot_types_.at(ins.dst));
      }
      if (!ins.args.empty()) c.a = operand(ins.args[0]);
      if (ins.args.size() > 1) c.b = operand(ins.args[1]);
      c.size = size(ins.size);
      switch (ins.op) {
        case Opcode::Load:
          c.shape = shape_of(slot_types_.at(ins.dst));
          break;
        case Opcode::Store: {
          const Type& target = type_of(ins.args[0].name);
          c.shape = shape_of(target.is_ptr() ? target.elem() : *ins.access_type);
          break;
        }
        case Opcode::FieldAddr: {
          const Type& base = type_of(ins.args[0].name);
          c.offset = static_cast<std::int64_t>(layout_.field_offset(base.elem().name(), ins.symbol));
          break;
        }
        case Opcode::Index:
          c.offset = static_cast<std::int64_t>(layout_.size_of(type_of(ins.args[0].name).elem()));
          break;
        case Opcode::Br:
          c.t0 = labels.at(ins.targets[0]);
          c.t1 = labels.at(ins.targets[1]);
          break;
        case Opcode::Jmp:
          c.t0 = labels.at(ins.targets[0]);
          break;
        case Opcode::Call:
          c.callee = function_index_.at(ins.symbol);
          for (const auto& a : ins.args) c.call_args.push_back(operand(a));
          break;
        case Opcode::ExtCall:
          for (const auto& b : kBuiltins) {
            if (ins.symbol == b.name) c.builtin = b.id;
          }
          for (const auto& a : ins.args) c.call_args.push_back(operand(a));
          break;
        default:
          break;
      }
      cf.code.push_back(std::move(c));
    }
    return cf;
  }

  const minic::Program& prog_;
  minic::Layout layout_;
  std::map<std::string, std::int32_t> global_index_;
  std::map<std::string, std::int32_t> function_index_;
  std::map<std::string, std::int32_t> slots_;
  std::map<std::string, Type> slot_types_;
};

// Unwinds the interpreter once the outcome has been decided.
struct Stop {};

class Machine {
 public:
  Machine(const CProgram& prog, const RunOptions& options)
      : prog_(prog), options_(options), rng_(options.seed) {}

  Outcome run() {
    const auto start = std::chrono::steady_clock::now();
    try {
      for (std::uint64_t bytes : prog_.global_sizes) {
        const std::uint64_t base = mem_.alloc(bytes, RegionKind::Global);
        globals_.push_back({base, 0, mem_.find_live(base)->id});
      }
      const Value v = call(prog_.main_index, {});
      out_.exit_code = static_cast<std::int64_t>(v.lo);
    } catch (const Stop&) {
    }
    out_.metrics.peak_heap_bytes = mem_.peak_heap_bytes();
    out_.metrics.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return std::move(out_);
  }

 private:
  struct Frame {
    const CFunction* fn;
    std::vector<Value> slots;
  };

  [[noreturn]] void stop(Status status, std::string message) {
    out_.status = status;
    out_.message = std::move(message);
    throw Stop{};
  }

  std::string pc_of(const Frame& f, const CInstr& in) const {
    return f.fn->name + ":" + std::to_string(in.src_index);
  }

  [[noreturn]] void fault(Fault f, AllocId prov, const Frame& frame, const CInstr& in) {
    if (!f.alloc_id && prov != kNoAlloc) f.alloc_id = prov;
    f.pc = pc_of(frame, in);
    out_.fault_log.push_back(format_fault_line(f));
    out_.fault = std::move(f);
    stop(Status::Fault, {});
  }

  Value get(const Frame& f, const COperand& o) const {
    switch (o.k) {
      case COperand::K::Local: return f.slots[o.index];
      case COperand::K::Global: return globals_[o.index];
      case COperand::K::Imm: return {static_cast<std::uint64_t>(o.imm), 0, kNoAlloc, 0};
      case COperand::K::None: break;
    }
    return {};
  }

  std::int64_t eval(const Frame& f, const CSize& s) const {
    const auto lhs = static_cast<std::int64_t>(get(f, s.lhs).lo);
    if (!s.has_rhs) return lhs;
    const auto rhs = static_cast<std::int64_t>(get(f, s.rhs).lo);
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lhs) * static_cast<std::uint64_t>(rhs));
  }

  void set(Frame& f, const CInstr& in, Value v) {
    if (in.dst_bits && in.dst_bits < 64) {
      v = {static_cast<std::uint64_t>(sext(v.lo, in.dst_bits)), 0, kNoAlloc, 0};
    } else if (in.dst_bits) {
      v.hi = v.mask ? v.hi : 0;
    }
    f.slots[in.dst] = v;
  }

  void set_int(Frame& f, const CInstr& in, std::uint64_t v) { set(f, in, {v, 0, kNoAlloc}); }

  // Exact classification of the access; diagnostic only.
  void referee(const Frame& f, const CInstr& in, const Value& addr, std::uint64_t width) {
    if (addr.prov == kNoAlloc) return;
    const std::uint64_t plain = addr.mask ? addr.hi : addr.lo;
    const OracleVerdict v = mem_.classify(plain, options_.referee_base_only ? 1 : width, addr.prov);
    if (!v.out_of_bounds()) return;
    ++out_.violations;
    if (out_.first_violation) return;
    const AllocationRecord* rec = mem_.record(v.alloc_id);
    out_.first_violation = OracleViolation{v.kind, v.alloc_id, plain, width,
                                           static_cast<std::int64_t>(plain - rec->base), rec->size,
                                           (addr.mask & kTagged) != 0, pc_of(f, in)};
  }

  Value load(const Frame& f, const CInstr& in, const Value& addr) {
    ++out_.metrics.deref_count;
    const Shape& s = in.shape;
    referee(f, in, addr, s.width);
    std::byte buf[16] = {};
    if (auto flt = mem_.load(addr.lo, std::span<std::byte>(buf, s.width))) fault(*flt, addr.prov, f, in);
    Value v;
    std::memcpy(&v.lo, buf, std::min<std::uint32_t>(s.width, 8));
    if (s.repr == Repr::L4) std::memcpy(&v.hi, buf + 8, 8);
    if (s.repr == Repr::Int) {
      v.lo = static_cast<std::uint64_t>(sext(v.lo, s.bits));
      return v;
    }
    auto it = shadow_.find(addr.lo);
    if (it != shadow_.end() && it->second.lo == v.lo && it->second.hi == v.hi) {
      v.prov = it->second.prov;
    } else if (const AllocationRecord* rec = mem_.find_live(v.lo)) {
      v.prov = rec->id;
    }
    return v;
  }

  void store(const Frame& f, const CInstr& in, const Value& addr, const Value& v) {
    ++out_.metrics.deref_count;
    const Shape& s = in.shape;
    referee(f, in, addr, s.width);
    std::byte buf[16];
    std::memcpy(buf, &v.lo, 8);
    std::memcpy(buf + 8, &v.hi, 8);
    if (auto flt = mem_.store(addr.lo, std::span<const std::byte>(buf, s.width))) fault(*flt, addr.prov, f, in);
    if (s.repr != Repr::Int) shadow_[addr.lo] = v;
  }

  void free_block(const Frame& f, const CInstr& in, std::uint64_t base) {
    const AllocationRecord* rec = mem_.find_live(base);
    try {
      mem_.free(base);
    } catch (const InvalidFree& e) {
      stop(Status::Trap, pc_of(f, in) + ": " + e.what());
    }
    if (rec) shadow_.erase(shadow_.lower_bound(rec->base), shadow_.lower_bound(rec->base + rec->size));
  }

  Value allocate(const Frame& f, const CInstr& in, std::int64_t size, RegionKind region) {
    try {
      const std::uint64_t base = mem_.alloc(static_cast<std::uint64_t>(size), region);
      return {base, 0, mem_.find_live(base)->id};
    } catch (const Error& e) {
      stop(Status::Trap, pc_of(f, in) + ": " + e.what());
    }
  }

  Value builtin(Frame& f, const CInstr& in, const std::vector<Value>& args) {
    switch (in.builtin) {
      case Builtin::Print:
        out_.output += std::to_string(static_cast<std::int64_t>(args[0].lo)) + "\n";
        return {};
      case Builtin::Puts: {
        std::string s;
        for (std::uint64_t a = args[0].lo;; ++a) {
          std::byte b{};
          if (auto flt = mem_.load(a, std::span<std::byte>(&b, 1))) fault(*flt, args[0].prov, f, in);
          if (b == std::byte{0}) break;
          s.push_back(static_cast<char>(b));
        }
        out_.output += s + "\n";
        return {};
      }
      case Builtin::Dup: {
        const auto n = static_cast<std::int64_t>(args[1].lo);
        Value copy = allocate(f, in, n, RegionKind::Heap);
        for (std::int64_t i = 0; i < n; ++i) {
          std::byte b{};
          if (auto flt = mem_.load(args[0].lo + i, std::span<std::byte>(&b, 1))) fault(*flt, args[0].prov, f, in);
          mem_.store(copy.lo + i, std::span<const std::byte>(&b, 1));
        }
        return copy;
      }
      case Builtin::Identity:
        return args[0];
      case Builtin::Rand: {
        const auto n = static_cast<std::int64_t>(args[0].lo);
        return {n > 0 ? rng_() % static_cast<std::uint64_t>(n) : 0, 0, kNoAlloc};
      }
      case Builtin::GetArg: {
        const auto i = static_cast<std::int64_t>(args[0].lo);
        if (i < 0 || static_cast<std::size_t>(i) >= options_.args.size()) {
          stop(Status::Trap, pc_of(f, in) + ": getarg(" + std::to_string(i) + ") out of range");
        }
        return {static_cast<std::uint64_t>(options_.args[i]), 0, kNoAlloc};
      }
      case Builtin::ArgCount:
        return {options_.args.size(), 0, kNoAlloc};
    }
    return {};
  }

  Value call(std::int32_t index, std::vector<Value> args) {
    const CFunction& fn = prog_.functions[index];
    if (++depth_ > options_.max_call_depth) stop(Status::LimitExceeded, "call depth limit exceeded");
    Frame f{&fn, std::vector<Value>(fn.nslots)};
    for (std::size_t i = 0; i < fn.nparams; ++i) {
      Value v = args[i];
      if (fn.param_bits[i]) v.lo = static_cast<std::uint64_t>(sext(v.lo, fn.param_bits[i]));
      f.slots[i] = v;
    }
    for (const auto& [slot, bytes] : fn.arrays) {
      const std::uint64_t base = mem_.alloc(bytes, RegionKind::Stack);
      f.slots[slot] = {base, 0, mem_.find_live(base)->id};
    }
    Value result = execute(f);
    for (const auto& [slot, bytes] : fn.arrays) mem_.free(f.slots[slot].lo);
    if (fn.ret_bits) result = {static_cast<std::uint64_t>(sext(result.lo, fn.ret_bits)), 0, kNoAlloc};
    --depth_;
    return result;
  }

  Value execute(Frame& f) {
    const std::vector<CInstr>& code = f.fn->code;
    RunMetrics& m = out_.metrics;
    std::size_t pc = 0;
    while (pc < code.size()) {
      const CInstr& in = code[pc];
      if (++m.dynamic_instructions > options_.step_budget) {
        --m.dynamic_instructions;
        stop(Status::LimitExceeded, "step budget of " + std::to_string(options_.step_budget) + " exhausted");
      }
      ++m.histogram[static_cast<int>(in.op)];
      ++pc;
      switch (in.op) {
        case Opcode::Label:
          break;
        case Opcode::Alloc: {
          const std::int64_t n = eval(f, in.size);
          if (n <= 0 || static_cast<std::uint64_t>(n) > kMaxObjectSize) {
            stop(Status::Trap, pc_of(f, in) + ": allocation size " + std::to_string(n) + " outside (0, 2^31)");
          }
          f.slots[in.dst] = allocate(f, in, n, RegionKind::Heap);
          break;
        }
        case Opcode::Free: {
          const Value p = get(f, in.a);
          if (p.lo != 0) free_block(f, in, p.lo);
          break;
        }
        case Opcode::PtrAdd: {
          Value p = get(f, in.a);
          p.lo += static_cast<std::uint64_t>(eval(f, in.size));
          f.slots[in.dst] = p;
          break;
        }
        case Opcode::FieldAddr: {
          Value p = get(f, in.a);
          p.lo += static_cast<std::uint64_t>(in.offset);
          f.slots[in.dst] = p;
          break;
        }
        case Opcode::Index: {
          Value p = get(f, in.a);
          p.lo += static_cast<std::uint64_t>(get(f, in.b).lo * static_cast<std::uint64_t>(in.offset));
          f.slots[in.dst] = p;
          break;
        }
        case Opcode::Load:
          f.slots[in.dst] = load(f, in, get(f, in.a));
          break;
        case Opcode::Store:
          store(f, in, get(f, in.a), get(f, in.b));
          break;
        case Opcode::Mov: {
          Value v = get(f, in.a);
          if (in.dst_bits && in.dst_bits < 64) v.prov = kNoAlloc;
          set(f, in, v);
          break;
        }
        case Opcode::IsNull:
          set_int(f, in, get(f, in.a).lo == 0);
          break;
        case Opcode::Add:
        case Opcode::Sub:
        case Opcode::Mul:
        case Opcode::Div:
        case Opcode::Rem:
        case Opcode::And:
        case Opcode::Or:
        case Opcode::Xor:
        case Opcode::Shl:
        case Opcode::Shr:
        case Opcode::Eq:
        case Opcode::Ne:
        case Opcode::Lt:
        case Opcode::Le:
        case Opcode::Gt:
        case Opcode::Ge:
          set_int(f, in, binary(f, in));
          break;
        case Opcode::Call: {
          std::vector<Value> args;
          args.reserve(in.call_args.size());
          for (const auto& a : in.call_args) args.push_back(get(f, a));
          const Value r = call(in.callee, std::move(args));
          if (in.dst >= 0) set(f, in, r);
          break;
        }
        case Opcode::ExtCall: {
          std::vector<Value> args;
          for (const auto& a : in.call_args) args.push_back(get(f, a));
          const Value r = builtin(f, in, args);
          if (in.dst >= 0) set(f, in, r);
          break;
        }
        case Opcode::Br:
          pc = static_cast<std::size_t>(get(f, in.a).lo != 0 ? in.t0 : in.t1);
          break;
        case Opcode::Jmp:
          pc = static_cast<std::size_t>(in.t0);
          break;
        case Opcode::Ret:
          return get(f, in.a);
        case Opcode::L4Encode: {
          const Value base = get(f, in.a);
          const std::int64_t n = eval(f, in.size);
          if (n <= 0 || static_cast<std::uint64_t>(n) > kMaxObjectSize) {
            stop(Status::Trap, pc_of(f, in) + ": l4.encode size " + std::to_string(n) + " outside (0, 2^31)");
          }
          const L4Pointer p = encode(base.lo, static_cast<std::uint64_t>(n));
          f.slots[in.dst] = {p.raw().lo, p.raw().hi, base.prov};
          break;
        }
        case Opcode::L4Add: {
          ++m.lane_add_count;
          const Value v = get(f, in.a);
          const L4Pointer p = add_offset(L4Pointer(Vec128{v.lo, v.hi}), L4Offset{eval(f, in.size)});
          f.slots[in.dst] = {p.raw().lo, p.raw().hi, v.prov};
          break;
        }
        case Opcode::L4MsbUpper: {
          const Value v = get(f, in.a);
          set_int(f, in, upper_msb(L4Pointer(Vec128{v.lo, v.hi})));
          break;
        }
        case Opcode::L4MsbLower: {
          const Value v = get(f, in.a);
          set_int(f, in, lower_msb(L4Pointer(Vec128{v.lo, v.hi})));
          break;
        }
        case Opcode::L4Poison: {
          const Value v = get(f, in.a);
          const std::uint64_t tag = get(f, in.b).lo;
          const auto bits = static_cast<std::uint8_t>(kMasked | ((tag & kPoisonBit) ? kTagged : 0));
          f.slots[in.dst] = {v.lo | tag, v.lo, v.prov, bits};
          break;
        }
        case Opcode::L4Strip: {
          const Value v = get(f, in.a);
          f.slots[in.dst] = {strip(L4Pointer(Vec128{v.lo, v.hi})), 0, v.prov};
          break;
        }
      }
    }
    stop(Status::Trap, "control reached the end of '" + f.fn->name + "' without ret");
  }

  std::uint64_t binary(const Frame& f, const CInstr& in) {
    const Value va = get(f, in.a);
    const Value vb = get(f, in.b);
    const auto a = static_cast<std::int64_t>(va.lo);
    const auto b = static_cast<std::int64_t>(vb.lo);
    const std::uint64_t ua = va.lo;
    const std::uint64_t ub = vb.lo;
    switch (in.op) {
      case Opcode::Add: return ua + ub;
      case Opcode::Sub: return ua - ub;
      case Opcode::Mul: return ua * ub;
      case Opcode::Div:
      case Opcode::Rem:
        if (b == 0) stop(Status::Trap, pc_of(f, in) + ": division by zero");
        if (a == INT64_MIN && b == -1) return in.op == Opcode::Div ? ua : 0;
        return static_cast<std::uint64_t>(in.op == Opcode::Div ? a / b : a % b);
      case Opcode::And: return ua & ub;
      case Opcode::Or: return ua | ub;
      case Opcode::Xor: return ua ^ ub;
      case Opcode::Shl: return ua << (ub & 63);
      case Opcode::Shr: return static_cast<std::uint64_t>(a >> (ub & 63));
      case Opcode::Eq: return ua == ub;
      case Opcode::Ne: return ua != ub;
      case Opcode::Lt: return a < b;
      case Opcode::Le: return a <= b;
      case Opcode::Gt: return a > b;
      case Opcode::Ge: return a >= b;
      default: return 0;
    }
  }

  const CProgram& prog_;
  const RunOptions& options_;
  Memory mem_;
  Outcome out_;
  std::vector<Value> globals_;
  std::map<std::uint64_t, Value> shadow_;  // pointer values stored in memory, by address
  std::mt19937_64 rng_;
  int depth_ = 0;
};

}  // namespace

Outcome run(const minic::Program& program, const RunOptions& options) {
  const minic::Program checked = minic::typecheck(program, minic::CheckMode::Auto);
  const CProgram compiled = Compiler(checked).compile();
  return Machine(compiled, options).run();
}

}  // namespace l4ptr::exec
