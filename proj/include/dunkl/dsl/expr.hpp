#pragma once
// Immutable expression trees for scalar fields and one-dimensional profiles.
//
// Variables: index 0 is the profile variable `s`, indices 1..9 are the
// coordinates x1..x9. `r` is |x| and `xhat(j)` is x_j / |x| (0 at the origin).

#include <cmath>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace dunkl::dsl {

enum class Op : std::uint8_t {
  Num,
  Var,
  Radius,
  Xhat,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Exp,
  Ln,
  Abs,
  Sqrt,
  Sign,
  Step,
  ClampZero,
  Min,
  Max,
  Smoothstep,
  DSmoothstep,
  D2Smoothstep,
};

inline constexpr int kProfileVar = 0;

class Expr;

struct Node {
  Op op = Op::Num;
  double value = 0.0;
  int index = 0;
  std::vector<Expr> args;
};

class Expr {
 public:
  Expr() : Expr(num_node(0.0)) {}

  const Node& node() const { return *node_; }
  Op op() const { return node_->op; }
  const std::vector<Expr>& args() const { return node_->args; }
  const Expr& arg(std::size_t i) const { return node_->args[i]; }

  bool is_num() const { return op() == Op::Num; }
  bool is_num(double v) const { return is_num() && node_->value == v; }
  double num() const { return node_->value; }

  static Expr make(Op op, std::vector<Expr> args, double value = 0.0, int index = 0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    n->index = index;
    n->args = std::move(args);
    return Expr(std::move(n));
  }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.op != y.op || x.index != y.index || x.args.size() != y.args.size()) return false;
    if (x.op == Op::Num && !(x.value == y.value)) return false;
    for (std::size_t i = 0; i < x.args.size(); ++i)
      if (!(x.args[i] == y.args[i])) return false;
    return true;
  }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static std::shared_ptr<const Node> num_node(double v) {
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
  }

  std::shared_ptr<const Node> node_;
};

inline int arity(Op op) {
  switch (op) {
    case Op::Num:
    case Op::Var:
    case Op::Radius:
    case Op::Xhat:
      return 0;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
    case Op::Min:
    case Op::Max:
      return 2;
    case Op::Smoothstep:
    case Op::DSmoothstep:
    case Op::D2Smoothstep:
      return 3;
    default:
      return 1;
  }
}

// Builders. They fold constants and drop neutral elements; nothing else.

inline Expr num(double v) { return Expr::make(Op::Num, {}, v); }
inline Expr var(int i) { return Expr::make(Op::Var, {}, 0.0, i); }
inline Expr radius() { return Expr::make(Op::Radius, {}); }
inline Expr xhat(int j) { return Expr::make(Op::Xhat, {}, 0.0, j); }

inline Expr neg(const Expr& a) {
  if (a.is_num()) return num(-a.num());
  if (a.op() == Op::Neg) return a.arg(0);
  return Expr::make(Op::Neg, {a});
}

inline Expr add(const Expr& a, const Expr& b) {
  if (a.is_num() && b.is_num()) return num(a.num() + b.num());
  if (a.is_num(0.0)) return b;
  if (b.is_num(0.0)) return a;
  return Expr::make(Op::Add, {a, b});
}

inline Expr sub(const Expr& a, const Expr& b) {
  if (a.is_num() && b.is_num()) return num(a.num() - b.num());
  if (b.is_num(0.0)) return a;
  if (a.is_num(0.0)) return neg(b);
  return Expr::make(Op::Sub, {a, b});
}

inline Expr mul(const Expr& a, const Expr& b) {
  if (a.is_num() && b.is_num()) return num(a.num() * b.num());
  if (a.is_num(0.0) || b.is_num(0.0)) return num(0.0);
  if (a.is_num(1.0)) return b;
  if (b.is_num(1.0)) return a;
  if (a.is_num(-1.0)) return neg(b);
  if (b.is_num(-1.0)) return neg(a);
  return Expr::make(Op::Mul, {a, b});
}

inline Expr div(const Expr& a, const Expr& b) {
  if (a.is_num() && b.is_num() && b.num() != 0.0) return num(a.num() / b.num());
  if (a.is_num(0.0)) return num(0.0);
  if (b.is_num(1.0)) return a;
  return Expr::make(Op::Div, {a, b});
}

inline Expr pow(const Expr& a, const Expr& b) {
  if (a.is_num() && b.is_num()) return num(std::pow(a.num(), b.num()));
  if (b.is_num(0.0)) return num(1.0);
  if (b.is_num(1.0)) return a;
  return Expr::make(Op::Pow, {a, b});
}

inline Expr call(Op op, const Expr& a) {
  if (a.is_num()) {
    const double v = a.num();
    switch (op) {
      case Op::Exp: return num(std::exp(v));
      case Op::Abs: return num(std::abs(v));
      case Op::Sign: return num(v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0));
      case Op::Step: return num(v > 0.0 ? 1.0 : 0.0);
      case Op::ClampZero: return num(v > 0.0 ? v : 0.0);
      default: break;
    }
  }
  return Expr::make(op, {a});
}

inline Expr call(Op op, const Expr& a, const Expr& b) { return Expr::make(op, {a, b}); }

inline Expr call(Op op, const Expr& a, const Expr& b, const Expr& c) {
  return Expr::make(op, {a, b, c});
}

/// Largest coordinate index used (0 when only `s` or constants appear).
inline int max_coordinate(const Expr& e) {
  int m = 0;
  if (e.op() == Op::Var || e.op() == Op::Xhat) m = e.node().index;
  for (const auto& a : e.args()) m = std::max(m, max_coordinate(a));
  return m;
}

inline bool uses_profile_var(const Expr& e) {
  if (e.op() == Op::Var && e.node().index == kProfileVar) return true;
  for (const auto& a : e.args())
    if (uses_profile_var(a)) return true;
  return false;
}

inline bool uses_radius(const Expr& e) {
  if (e.op() == Op::Radius || e.op() == Op::Xhat) return true;
  for (const auto& a : e.args())
    if (uses_radius(a)) return true;
  return false;
}

}  // namespace dunkl::dsl
