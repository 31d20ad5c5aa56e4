#pragma once
// Recursive-descent parser and canonical printer for the expression language.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          (right associative)
//   primary := number | identifier | call | '(' expr ')'
//
// Precedence: ^  >  unary minus  >  * /  >  + -.

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <system_error>

#include "dunkl/dsl/expr.hpp"
#include "dunkl/error.hpp"

namespace dunkl::dsl {

namespace detail {

struct FunctionInfo {
  std::string_view name;
  Op op;
  int arity;
};

inline constexpr FunctionInfo kFunctions[] = {
    {"exp", Op::Exp, 1},
    {"ln", Op::Ln, 1},
    {"abs", Op::Abs, 1},
    {"sqrt", Op::Sqrt, 1},
    {"sign", Op::Sign, 1},
    {"step", Op::Step, 1},
    {"clampzero", Op::ClampZero, 1},
    {"pow", Op::Pow, 2},
    {"min", Op::Min, 2},
    {"max", Op::Max, 2},
    {"smoothstep", Op::Smoothstep, 3},
    {"dsmoothstep", Op::DSmoothstep, 3},
    {"d2smoothstep", Op::D2Smoothstep, 3},
};

inline const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return &f;
  return nullptr;
}

inline std::string_view function_name(Op op) {
  for (const auto& f : kFunctions)
    if (f.op == op && f.name != "pow") return f.name;
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip_ws();
    if (pos_ < src_.size())
      throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size())
        throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) lhs = Expr::make(Op::Add, {lhs, term()});
      else if (accept('-')) lhs = Expr::make(Op::Sub, {lhs, term()});
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = Expr::make(Op::Mul, {lhs, unary()});
      else if (accept('/')) lhs = Expr::make(Op::Div, {lhs, unary()});
      else return lhs;
    }
  }

  Expr unary() {
    if (accept('-')) {
      Expr a = unary();
      // A negated literal is itself a literal.
      if (a.is_num()) return num(-a.num());
      return Expr::make(Op::Neg, {a});
    }
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return Expr::make(Op::Pow, {base, unary()});
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
      throw ParseError("malformed number", start);
    return num(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view id = src_.substr(start, pos_ - start);

    if (id == "s") return var(kProfileVar);
    if (id == "x") return var(1);
    if (id == "r") return radius();
    if (id == "pi") return num(std::numbers::pi);
    if (id.size() == 2 && id[0] == 'x' && id[1] >= '1' && id[1] <= '9') return var(id[1] - '0');

    skip_ws();
    const bool has_call = pos_ < src_.size() && src_[pos_] == '(';
    if (id == "xhat") {
      if (!has_call) throw ParseError("xhat requires an index argument", start);
      ++pos_;
      Expr idx = expr();
      expect(')');
      if (!idx.is_num() || idx.num() < 1 || idx.num() > 9 || idx.num() != std::floor(idx.num()))
        throw ParseError("xhat index must be an integer literal in 1..9", start);
      return xhat(static_cast<int>(idx.num()));
    }
    const FunctionInfo* f = find_function(id);
    if (f == nullptr) throw ParseError("unknown identifier '" + std::string(id) + "'", start);
    if (!has_call) throw ParseError("function '" + std::string(id) + "' requires arguments", start);
    ++pos_;
    std::vector<Expr> args;
    skip_ws();
    if (!accept(')')) {
      args.push_back(expr());
      while (accept(',')) args.push_back(expr());
      expect(')');
    }
    if (static_cast<int>(args.size()) != f->arity)
      throw ParseError("function '" + std::string(id) + "' expects " + std::to_string(f->arity) +
                           " argument(s), got " + std::to_string(args.size()),
                       start);
    if (f->arity == 3 && (!args[0].is_num() || !args[1].is_num() || !(args[0].num() < args[1].num())))
      throw ParseError("'" + std::string(id) + "' requires numeric bounds a < b", start);
    return Expr::make(f->op, std::move(args));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline Expr parse(std::string_view source) { return detail::Parser(source).parse(); }

/// Canonical text form. Every compound subexpression is parenthesized, so
/// parse(print(e)) reproduces e exactly.
inline std::string print(const Expr& e) {
  const Node& n = e.node();
  auto bin = [&](const char* op) {
    return "(" + print(n.args[0]) + " " + op + " " + print(n.args[1]) + ")";
  };
  switch (n.op) {
    case Op::Num: {
      const std::string s = detail::format_number(std::abs(n.value));
      return std::signbit(n.value) ? "(-" + s + ")" : s;
    }
    case Op::Var: return n.index == kProfileVar ? "s" : "x" + std::to_string(n.index);
    case Op::Radius: return "r";
    case Op::Xhat: return "xhat(" + std::to_string(n.index) + ")";
    case Op::Neg: return "(-" + print(n.args[0]) + ")";
    case Op::Add: return bin("+");
    case Op::Sub: return bin("-");
    case Op::Mul: return bin("*");
    case Op::Div: return bin("/");
    case Op::Pow: return bin("^");
    default: break;
  }
  std::string out(detail::function_name(n.op));
  out += "(";
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    if (i) out += ", ";
    out += print(n.args[i]);
  }
  return out + ")";
}

}  // namespace dunkl::dsl
