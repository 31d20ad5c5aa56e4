#pragma once
// Symbolic differentiation, profile substitution, and power-law recognition.

#include <cmath>
#include <optional>

#include "dunkl/dsl/expr.hpp"

namespace dunkl::dsl {

/// Partial derivative of `e` with respect to variable `v` (0 = s, 1..9 = x_v).
/// Kinks follow the sign convention: abs'(0) = 0, clampzero'(0) = 0.
inline Expr differentiate(const Expr& e, int v) {
  const Node& n = e.node();
  auto d = [&](std::size_t i) { return differentiate(n.args[i], v); };
  switch (n.op) {
    case Op::Num: return num(0.0);
    case Op::Var: return num(n.index == v ? 1.0 : 0.0);
    case Op::Radius: return v >= 1 ? xhat(v) : num(0.0);
    case Op::Xhat: {
      if (v < 1) return num(0.0);
      const Expr delta = num(n.index == v ? 1.0 : 0.0);
      return div(sub(delta, mul(xhat(n.index), xhat(v))), radius());
    }
    case Op::Neg: return neg(d(0));
    case Op::Add: return add(d(0), d(1));
    case Op::Sub: return sub(d(0), d(1));
    case Op::Mul: {
      const Expr& a = n.args[0];
      const Expr& b = n.args[1];
      return add(mul(d(0), b), mul(a, d(1)));
    }
    case Op::Div: {
      const Expr& a = n.args[0];
      const Expr& b = n.args[1];
      const Expr da = d(0);
      const Expr db = d(1);
      if (db.is_num(0.0)) return div(da, b);
      return div(sub(mul(da, b), mul(a, db)), pow(b, num(2.0)));
    }
    case Op::Pow: {
      const Expr& a = n.args[0];
      const Expr& b = n.args[1];
      if (b.is_num()) {
        const double c = b.num();
        if (a.op() == Op::Radius) {
          if (v < 1) return num(0.0);
          // Keep r^c smooth at the origin when possible.
          if (c >= 2.0) return mul(num(c), mul(pow(radius(), num(c - 2.0)), var(v)));
          return mul(num(c), mul(pow(radius(), num(c - 1.0)), xhat(v)));
        }
        const Expr da = d(0);
        if (da.is_num(0.0)) return num(0.0);
        return mul(mul(num(c), pow(a, num(c - 1.0))), da);
      }
      const Expr da = d(0);
      const Expr db = d(1);
      if (da.is_num(0.0) && db.is_num(0.0)) return num(0.0);
      return mul(e, add(mul(db, call(Op::Ln, a)), div(mul(b, da), a)));
    }
    case Op::Exp: return mul(e, d(0));
    case Op::Ln: return div(d(0), n.args[0]);
    case Op::Abs: return mul(call(Op::Sign, n.args[0]), d(0));
    case Op::Sqrt: return div(d(0), mul(num(2.0), e));
    case Op::Sign:
    case Op::Step: return num(0.0);
    case Op::ClampZero: return mul(call(Op::Step, n.args[0]), d(0));
    case Op::Min:
    case Op::Max: {
      const Expr& a = n.args[0];
      const Expr& b = n.args[1];
      const Expr sel = n.op == Op::Min ? call(Op::Step, sub(b, a)) : call(Op::Step, sub(a, b));
      return add(mul(sel, d(0)), mul(sub(num(1.0), sel), d(1)));
    }
    case Op::Smoothstep:
      return mul(call(Op::DSmoothstep, n.args[0], n.args[1], n.args[2]), d(2));
    case Op::DSmoothstep:
      return mul(call(Op::D2Smoothstep, n.args[0], n.args[1], n.args[2]), d(2));
    case Op::D2Smoothstep: {
      const double a = n.args[0].num();
      const double b = n.args[1].num();
      const Expr& x = n.args[2];
      const Expr inside = mul(call(Op::Step, sub(x, num(a))), call(Op::Step, sub(num(b), x)));
      return mul(mul(num(-12.0 / ((b - a) * (b - a) * (b - a))), inside), d(2));
    }
  }
  return num(0.0);
}

/// Replaces the profile variable `s` by `inner`.
inline Expr substitute(const Expr& profile, const Expr& inner) {
  const Node& n = profile.node();
  if (n.op == Op::Var && n.index == kProfileVar) return inner;
  if (n.args.empty()) return profile;
  std::vector<Expr> args;
  args.reserve(n.args.size());
  for (const auto& a : n.args) args.push_back(substitute(a, inner));
  switch (n.op) {
    case Op::Neg: return neg(args[0]);
    case Op::Add: return add(args[0], args[1]);
    case Op::Sub: return sub(args[0], args[1]);
    case Op::Mul: return mul(args[0], args[1]);
    case Op::Div: return div(args[0], args[1]);
    case Op::Pow: return pow(args[0], args[1]);
    default: return Expr::make(n.op, std::move(args), n.value, n.index);
  }
}

/// c * s^e.
struct PowerLaw {
  double coef = 1.0;
  double exponent = 1.0;

  double operator()(double s) const { return coef * std::pow(s, exponent); }
};

/// Recognizes profiles of the form c * s^e built from literals, `s`, products,
/// quotients, powers with literal exponents, and sqrt.
inline std::optional<PowerLaw> as_power(const Expr& e) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::Num: return PowerLaw{n.value, 0.0};
    case Op::Var:
      if (n.index == kProfileVar) return PowerLaw{1.0, 1.0};
      return std::nullopt;
    case Op::Neg: {
      auto a = as_power(n.args[0]);
      if (!a) return std::nullopt;
      return PowerLaw{-a->coef, a->exponent};
    }
    case Op::Mul:
    case Op::Div: {
      auto a = as_power(n.args[0]);
      auto b = as_power(n.args[1]);
      if (!a || !b) return std::nullopt;
      if (n.op == Op::Mul) return PowerLaw{a->coef * b->coef, a->exponent + b->exponent};
      if (b->coef == 0.0) return std::nullopt;
      return PowerLaw{a->coef / b->coef, a->exponent - b->exponent};
    }
    case Op::Pow: {
      if (!n.args[1].is_num()) return std::nullopt;
      auto a = as_power(n.args[0]);
      if (!a || a->coef <= 0.0) return std::nullopt;
      const double c = n.args[1].num();
      return PowerLaw{std::pow(a->coef, c), a->exponent * c};
    }
    case Op::Sqrt: {
      auto a = as_power(n.args[0]);
      if (!a || a->coef <= 0.0) return std::nullopt;
      return PowerLaw{std::sqrt(a->coef), a->exponent / 2.0};
    }
    default: return std::nullopt;
  }
}

}  // namespace dunkl::dsl
