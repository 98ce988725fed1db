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

#include "l4ptr/minic/parser.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <unordered_set>
#include <vector>

#include "l4ptr/error.hpp"

namespace l4ptr::minic {

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::uint64_t value = 0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_' || src_[pos_] == '.')) {
          t.text += advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Int;
        lex_int(t);
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        t.kind = Tok::Punct;
        t.text = "->";
        advance();
        advance();
      } else if (std::string_view("{}()[]<>,:;*&=-").find(c) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text = std::string(1, advance());
      } else {
        throw SyntaxError(line_, col_, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#' || (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/')) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  void lex_int(Token& t) {
    const int line = line_;
    const int col = col_;
    int base = 10;
    if (src_[pos_] == '0' && pos_ + 1 < src_.size() && (src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X')) {
      base = 16;
      advance();
      advance();
    }
    std::string digits;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      const char c = advance();
      if (c != '_') digits += c;
    }
    t.text = digits;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t.value, base);
    if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size()) {
      throw SyntaxError(line, col, "malformed integer literal '" + digits + "'");
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::unordered_set<std::string>& reserved() {
  static const std::unordered_set<std::string> words = [] {
    std::unordered_set<std::string> w = {"fn",  "struct", "global", "extern", "var", "shim", "null",
                                         "sizeof", "i8", "i32",   "i64",    "void", "ptr", "l4", "size",
                                         "arg"};
    for (int i = 1; i < kOpcodeCount; ++i) w.emplace(opcode_name(static_cast<Opcode>(i)));
    return w;
  }();
  return words;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program run() {
    Program prog;
    std::set<std::string> callables;
    std::set<std::string> structs;
    std::set<std::string> globals;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (is_word("struct")) {
        StructDef s = parse_struct();
        if (!structs.insert(s.name).second) dup(s.loc, "struct", s.name);
        prog.structs.push_back(std::move(s));
      } else if (is_word("global")) {
        Global g = parse_global();
        if (!globals.insert(g.name).second) dup(g.loc, "global", g.name);
        prog.globals.push_back(std::move(g));
      } else if (is_word("extern")) {
        ExternDecl e = parse_extern();
        if (!callables.insert(e.name).second) dup(e.loc, "function", e.name);
        prog.externs.push_back(std::move(e));
      } else if (is_word("fn")) {
        Function f = parse_function();
        if (!callables.insert(f.name).second) dup(f.loc, "function", f.name);
        prog.functions.push_back(std::move(f));
      } else if (t.kind == Tok::Punct && t.text == "}") {
        fail(t, "unbalanced '}'");
      } else {
        fail(t, "expected 'struct', 'global', 'extern' or 'fn'");
      }
    }
    // Locals may not shadow globals declared later in the file either.
    for (const auto& f : prog.functions) {
      for (const auto* list : {&f.params, &f.locals}) {
        for (const auto& v : *list) {
          if (globals.count(v.name)) dup(v.loc, "variable", v.name);
        }
      }
    }
    return prog;
  }

 private:
  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw SyntaxError(t.line, t.column, msg);
  }
  [[noreturn]] static void dup(const SourceLoc& loc, const std::string& what, const std::string& name) {
    throw DuplicateSymbol(loc.line, loc.column, "duplicate " + what + " '" + name + "'");
  }

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Punct && t.text == p;
  }
  bool is_word(std::string_view w) const {
    const Token& t = peek();
    return t.kind == Tok::Ident && t.text == w;
  }
  const Token& expect_punct(std::string_view p) {
    if (!is_punct(p)) fail(peek(), "expected '" + std::string(p) + "'" + found());
    return next();
  }
  void expect_word(std::string_view w) {
    if (!is_word(w)) fail(peek(), "expected '" + std::string(w) + "'" + found());
    next();
  }
  std::string found() const {
    const Token& t = peek();
    if (t.kind == Tok::End) return ", found end of input";
    return ", found '" + t.text + "'";
  }
  static SourceLoc loc_of(const Token& t) { return {t.line, t.column}; }

  std::string expect_ident(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || reserved().count(t.text)) {
      fail(t, std::string("expected ") + what + found());
    }
    return next().text;
  }

  std::uint64_t expect_uint() {
    const Token& t = peek();
    if (t.kind != Tok::Int) fail(t, "expected integer" + found());
    return next().value;
  }

  Type parse_type() {
    const Token& t = peek();
    if (t.kind == Tok::Punct && t.text == "[") {
      next();
      Type elem = parse_type();
      expect_punct(";");
      const std::uint64_t n = expect_uint();
      expect_punct("]");
      if (n == 0) fail(t, "array length must be positive");
      return Type::array(std::move(elem), n);
    }
    if (t.kind != Tok::Ident) fail(t, "expected type" + found());
    const std::string word = next().text;
    if (word == "i8") return Type::i8();
    if (word == "i32") return Type::i32();
    if (word == "i64") return Type::i64();
    if (word == "void") return Type::void_type();
    if (word == "ptr" || word == "l4") {
      expect_punct("<");
      Type elem = parse_type();
      expect_punct(">");
      return word == "ptr" ? Type::ptr(std::move(elem)) : Type::l4(std::move(elem));
    }
    if (reserved().count(word)) fail(t, "expected type, found '" + word + "'");
    return Type::struct_ref(word);
  }

  StructDef parse_struct() {
    StructDef s;
    s.loc = loc_of(peek());
    expect_word("struct");
    s.name = expect_ident("struct name");
    const Token& open = expect_punct("{");
    std::set<std::string> names;
    while (!is_punct("}")) {
      if (peek().kind == Tok::End) fail(open, "unbalanced '{'");
      const Token& ft = peek();
      Field f;
      f.name = expect_ident("field name");
      if (!names.insert(f.name).second) dup(loc_of(ft), "field", f.name);
      expect_punct(":");
      f.type = parse_type();
      s.fields.push_back(std::move(f));
      if (!is_punct(",")) break;
      next();
    }
    if (peek().kind == Tok::End) fail(open, "unbalanced '{'");
    expect_punct("}");
    if (s.fields.empty()) fail(open, "struct '" + s.name + "' has no fields");
    return s;
  }

  Global parse_global() {
    Global g;
    g.loc = loc_of(peek());
    expect_word("global");
    g.name = expect_ident("global name");
    expect_punct(":");
    g.type = parse_type();
    return g;
  }

  ExternDecl parse_extern() {
    ExternDecl e;
    e.loc = loc_of(peek());
    expect_word("extern");
    e.name = expect_ident("function name");
    expect_punct("(");
    while (!is_punct(")")) {
      e.params.push_back(parse_type());
      if (!is_punct(",")) break;
      next();
    }
    expect_punct(")");
    if (is_punct("->")) {
      next();
      e.ret = parse_type();
    }
    if (is_word("size")) {
      next();
      expect_punct("(");
      SizeContract c;
      if (is_word("arg")) {
        next();
        c.from_arg = true;
      }
      c.value = static_cast<std::int64_t>(expect_uint());
      expect_punct(")");
      e.contract = c;
    }
    return e;
  }

  Function parse_function() {
    Function f;
    f.loc = loc_of(peek());
    expect_word("fn");
    f.name = expect_ident("function name");
    std::set<std::string> vars;
    expect_punct("(");
    while (!is_punct(")")) {
      const Token& pt = peek();
      Variable v;
      v.loc = loc_of(pt);
      v.name = expect_ident("parameter name");
      if (!vars.insert(v.name).second) dup(v.loc, "variable", v.name);
      expect_punct(":");
      v.type = parse_type();
      f.params.push_back(std::move(v));
      if (!is_punct(",")) break;
      next();
    }
    expect_punct(")");
    if (is_punct("->")) {
      next();
      f.ret = parse_type();
    }
    const Token& open = expect_punct("{");
    std::set<std::string> labels;
    for (;;) {
      const Token& t = peek();
      if (t.kind == Tok::End || is_word("fn") || is_word("struct") || is_word("extern") ||
          is_word("global")) {
        fail(open, "unbalanced '{' opened here");
      }
      if (t.kind == Tok::Punct && t.text == "}") {
        next();
        break;
      }
      if (is_word("var") || is_word("shim")) {
        Variable v;
        v.loc = loc_of(t);
        v.shim = next().text == "shim";
        v.name = expect_ident("variable name");
        if (!vars.insert(v.name).second) dup(v.loc, "variable", v.name);
        expect_punct(":");
        v.type = parse_type();
        f.locals.push_back(std::move(v));
        continue;
      }
      if (t.kind == Tok::Ident && is_punct(":", 1) && !reserved().count(t.text)) {
        Instruction ins;
        ins.loc = loc_of(t);
        ins.op = Opcode::Label;
        ins.symbol = next().text;
        next();
        if (!labels.insert(ins.symbol).second) dup(ins.loc, "label", ins.symbol);
        f.body.push_back(std::move(ins));
        continue;
      }
      f.body.push_back(parse_instruction());
    }
    return f;
  }

  bool operand_follows() const {
    const Token& t = peek();
    if (t.kind == Tok::Int) return true;
    if (t.kind == Tok::Punct) return t.text == "-" || t.text == "&";
    if (t.kind != Tok::Ident) return false;
    if (t.text == "null" || t.text == "sizeof") return true;
    if (reserved().count(t.text)) return false;
    return !is_punct(":", 1);
  }

  Operand parse_operand() {
    const Token& t = peek();
    if (t.kind == Tok::Int) return Operand::immediate(static_cast<std::int64_t>(next().value));
    if (t.kind == Tok::Punct && t.text == "-") {
      next();
      const std::uint64_t mag = expect_uint();
      return Operand::immediate(static_cast<std::int64_t>(0 - mag));
    }
    if (t.kind == Tok::Punct && t.text == "&") {
      next();
      return Operand::addr_of(expect_ident("variable name"));
    }
    if (is_word("null")) {
      next();
      return Operand::null();
    }
    if (is_word("sizeof")) {
      next();
      expect_punct("(");
      Type ty = parse_type();
      expect_punct(")");
      return Operand::size_of(std::move(ty));
    }
    return Operand::var(expect_ident("operand"));
  }

  SizeExpr parse_size_expr() {
    SizeExpr e;
    e.lhs = parse_operand();
    if (is_punct("*")) {
      next();
      e.rhs = parse_operand();
    }
    return e;
  }

  void comma() { expect_punct(","); }

  void parse_call(Instruction& ins) {
    // call [dst,] callee(args)
    std::string first = expect_ident("callee");
    if (is_punct(",")) {
      next();
      ins.dst = std::move(first);
      ins.symbol = expect_ident("callee");
    } else {
      ins.symbol = std::move(first);
    }
    expect_punct("(");
    while (!is_punct(")")) {
      ins.args.push_back(parse_operand());
      if (!is_punct(",")) break;
      next();
    }
    expect_punct(")");
  }

  Instruction parse_instruction() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail(t, "expected instruction" + found());
    const auto op = opcode_from_name(t.text);
    if (!op) fail(t, "unknown instruction '" + t.text + "'");
    Instruction ins;
    ins.op = *op;
    ins.loc = loc_of(t);
    next();
    switch (*op) {
      case Opcode::Alloc:
        ins.dst = expect_ident("destination");
        comma();
        ins.size = parse_size_expr();
        break;
      case Opcode::Free:
        ins.args.push_back(parse_operand());
        break;
      case Opcode::PtrAdd:
      case Opcode::L4Add:
      case Opcode::L4Encode:
        ins.dst = expect_ident("destination");
        comma();
        ins.args.push_back(parse_operand());
        comma();
        ins.size = parse_size_expr();
        break;
      case Opcode::FieldAddr:
        ins.dst = expect_ident("destination");
        comma();
        ins.args.push_back(parse_operand());
        comma();
        ins.symbol = expect_ident("field name");
        break;
      case Opcode::Load:
      case Opcode::Mov:
      case Opcode::IsNull:
      case Opcode::L4MsbUpper:
      case Opcode::L4MsbLower:
      case Opcode::L4Strip:
        ins.dst = expect_ident("destination");
        comma();
        ins.args.push_back(parse_operand());
        break;
      case Opcode::Store:
        ins.args.push_back(parse_operand());
        comma();
        ins.args.push_back(parse_operand());
        if (is_punct(":")) {
          next();
          ins.access_type = parse_type();
        }
        break;
      case Opcode::Index:
      case Opcode::L4Poison:
        ins.dst = expect_ident("destination");
        comma();
        ins.args.push_back(parse_operand());
        comma();
        ins.args.push_back(parse_operand());
        break;
      case Opcode::Call:
      case Opcode::ExtCall:
        parse_call(ins);
        break;
      case Opcode::Br:
        ins.args.push_back(parse_operand());
        comma();
        ins.targets.push_back(expect_ident("label"));
        comma();
        ins.targets.push_back(expect_ident("label"));
        break;
      case Opcode::Jmp:
        ins.targets.push_back(expect_ident("label"));
        break;
      case Opcode::Ret:
        if (operand_follows()) ins.args.push_back(parse_operand());
        break;
      default:
        if (!is_binary(*op)) fail(t, "unknown instruction '" + t.text + "'");
        ins.dst = expect_ident("destination");
        comma();
        ins.args.push_back(parse_operand());
        comma();
        ins.args.push_back(parse_operand());
        break;
    }
    if (is_punct(";")) next();
    return ins;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse(std::string_view source) { return Parser(Lexer(source).run()).run(); }

}  // namespace l4ptr::minic
