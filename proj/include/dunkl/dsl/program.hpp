#pragma once
// Flat postfix programs compiled from expression trees. Evaluation walks the
// instruction list once over a small fixed stack, so repeated evaluation inside
// quadrature loops does no allocation and no pointer chasing.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "dunkl/dsl/expr.hpp"

namespace dunkl::dsl {

class Program {
 public:
  Program() = default;

  explicit Program(const Expr& e) {
    int depth = 0;
    emit(e, depth);
    uses_radius_ = dsl::uses_radius(e);
  }

  /// Evaluates with coordinates `x` (x[0] is x1) and profile variable `s`.
  double operator()(std::span<const double> x, double s = 0.0) const {
    constexpr int kStack = 256;
    std::array<double, kStack> st;
    int sp = 0;
    double r = 0.0;
    if (uses_radius_) {
      for (double xi : x) r += xi * xi;
      r = std::sqrt(r);
    }
    auto coord = [&](int i) { return i >= 1 && i <= static_cast<int>(x.size()) ? x[i - 1] : 0.0; };
    for (const Instr& in : code_) {
      switch (in.op) {
        case Op::Num: st[sp++] = in.value; break;
        case Op::Var: st[sp++] = in.index == kProfileVar ? s : coord(in.index); break;
        case Op::Radius: st[sp++] = r; break;
        case Op::Xhat: st[sp++] = r > 0.0 ? coord(in.index) / r : 0.0; break;
        case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
        case Op::Add: --sp; st[sp - 1] += st[sp]; break;
        case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
        case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
        case Op::Div: --sp; st[sp - 1] /= st[sp]; break;
        case Op::Pow: --sp; st[sp - 1] = power(st[sp - 1], st[sp]); break;
        case Op::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
        case Op::Ln: st[sp - 1] = std::log(st[sp - 1]); break;
        case Op::Abs: st[sp - 1] = std::abs(st[sp - 1]); break;
        case Op::Sqrt: st[sp - 1] = std::sqrt(st[sp - 1]); break;
        case Op::Sign: {
          const double v = st[sp - 1];
          st[sp - 1] = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
          break;
        }
        case Op::Step: st[sp - 1] = st[sp - 1] > 0.0 ? 1.0 : 0.0; break;
        case Op::ClampZero: st[sp - 1] = st[sp - 1] > 0.0 ? st[sp - 1] : 0.0; break;
        case Op::Min: --sp; st[sp - 1] = std::min(st[sp - 1], st[sp]); break;
        case Op::Max: --sp; st[sp - 1] = std::max(st[sp - 1], st[sp]); break;
        case Op::Smoothstep:
        case Op::DSmoothstep:
        case Op::D2Smoothstep: {
          sp -= 2;
          st[sp - 1] = ramp(in.op, st[sp - 1], st[sp], st[sp + 1]);
          break;
        }
      }
    }
    return st[0];
  }

  std::size_t size() const { return code_.size(); }

 private:
  struct Instr {
    Op op;
    int index;
    double value;
  };

  // Integer exponents go through repeated multiplication so that negative
  // bases stay real and results are reproducible.
  static double power(double a, double b) {
    if (b == 2.0) return a * a;
    if (b == 1.0) return a;
    if (b == 3.0) return a * a * a;
    return std::pow(a, b);
  }

  static double ramp(Op op, double lo, double hi, double e) {
    const double w = hi - lo;
    const double s = (e - lo) / w;
    if (op == Op::Smoothstep) {
      if (s <= 0.0) return 0.0;
      if (s >= 1.0) return 1.0;
      return s * s * (3.0 - 2.0 * s);
    }
    if (s <= 0.0 || s >= 1.0) return 0.0;
    if (op == Op::DSmoothstep) return 6.0 * s * (1.0 - s) / w;
    return (6.0 - 12.0 * s) / (w * w);
  }

  void emit(const Expr& e, int& depth) {
    const Node& n = e.node();
    for (const auto& a : n.args) emit(a, depth);
    code_.push_back({n.op, n.index, n.value});
    depth += 1 - static_cast<int>(n.args.size());
    max_depth_ = std::max(max_depth_, depth);
    if (max_depth_ > 256) throw std::length_error("expression too deeply nested");
  }

  std::vector<Instr> code_;
  int max_depth_ = 0;
  bool uses_radius_ = false;
};

}  // namespace dunkl::dsl
