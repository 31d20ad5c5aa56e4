#pragma once
// Scalar fields on R^n and one-variable profiles, both carried by expressions
// with exact symbolic derivatives.

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dunkl/dsl/diff.hpp"
#include "dunkl/dsl/parser.hpp"
#include "dunkl/dsl/program.hpp"
#include "dunkl/error.hpp"
#include "dunkl/random.hpp"
#include "dunkl/rootsys.hpp"

namespace dunkl {

class Field {
 public:
  Field(const dsl::Expr& expr, int dim, std::string label = {}) : impl_(std::make_shared<Impl>()) {
    if (dim < 1 || dim > kMaxDim) throw DomainError("field dimension must be in [1, 3]");
    if (dsl::max_coordinate(expr) > dim)
      throw DomainError("field '" + label + "' uses a coordinate beyond dimension " + std::to_string(dim));
    if (dsl::uses_profile_var(expr)) throw DomainError("field '" + label + "' uses the profile variable s");
    impl_->dim = dim;
    impl_->label = std::move(label);
    impl_->expr = expr;
    impl_->value = dsl::Program(expr);
    for (int j = 1; j <= dim; ++j) {
      impl_->grad_expr.push_back(dsl::differentiate(expr, j));
      impl_->grad.emplace_back(impl_->grad_expr.back());
    }
    impl_->hess.resize(static_cast<std::size_t>(dim * dim));
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j)
        impl_->hess[i * dim + j] = dsl::Program(dsl::differentiate(impl_->grad_expr[i], j + 1));
  }

  static Field parse(std::string_view source, int dim, std::string label = {}) {
    return Field(dsl::parse(source), dim, std::move(label));
  }

  int dimension() const { return impl_->dim; }
  const std::string& label() const { return impl_->label; }
  const dsl::Expr& expr() const { return impl_->expr; }
  const dsl::Expr& gradient_expr(int j) const { return impl_->grad_expr[j]; }

  double value(std::span<const double> x) const { return impl_->value(x); }
  double operator()(std::span<const double> x) const { return value(x); }

  void gradient(std::span<const double> x, std::span<double> out) const {
    for (int j = 0; j < impl_->dim; ++j) out[j] = impl_->grad[j](x);
  }

  double partial(int j, std::span<const double> x) const { return impl_->grad[j](x); }

  /// Row-major n x n Hessian.
  void hessian(std::span<const double> x, std::span<double> out) const {
    const int n = impl_->dim;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) out[i * n + j] = out[j * n + i] = impl_->hess[i * n + j](x);
  }

 private:
  struct Impl {
    int dim = 1;
    std::string label;
    dsl::Expr expr;
    dsl::Program value;
    std::vector<dsl::Expr> grad_expr;
    std::vector<dsl::Program> grad;
    std::vector<dsl::Program> hess;
  };

  std::shared_ptr<Impl> impl_;
};

/// A function of one variable s >= 0.
class Profile {
 public:
  Profile() : Profile(dsl::var(dsl::kProfileVar)) {}

  explicit Profile(const dsl::Expr& expr, std::string label = {}) : impl_(std::make_shared<Impl>()) {
    if (dsl::max_coordinate(expr) > 0 || dsl::uses_radius(expr))
      throw DomainError("profile '" + label + "' may only depend on s");
    impl_->label = std::move(label);
    impl_->expr = expr;
    impl_->d1_expr = dsl::differentiate(expr, dsl::kProfileVar);
    impl_->d2_expr = dsl::differentiate(impl_->d1_expr, dsl::kProfileVar);
    impl_->f = dsl::Program(expr);
    impl_->d1 = dsl::Program(impl_->d1_expr);
    impl_->d2 = dsl::Program(impl_->d2_expr);
    impl_->power = dsl::as_power(expr);
  }

  static Profile parse(std::string_view source, std::string label = {}) {
    return Profile(dsl::parse(source), std::move(label));
  }

  const std::string& label() const { return impl_->label; }
  const dsl::Expr& expr() const { return impl_->expr; }
  const dsl::Expr& derivative_expr() const { return impl_->d1_expr; }

  double operator()(double s) const { return impl_->f({}, s); }
  double derivative(double s) const { return impl_->d1({}, s); }
  double second_derivative(double s) const { return impl_->d2({}, s); }

  /// Set when the profile is literally c * s^e.
  const std::optional<dsl::PowerLaw>& power() const { return impl_->power; }

  /// this(inner(s)).
  Profile compose(const Profile& inner, std::string label = {}) const {
    return Profile(dsl::substitute(impl_->expr, inner.expr()), std::move(label));
  }

  /// this(u(x)) as a field.
  Field compose(const Field& u, std::string label = {}) const {
    return Field(dsl::substitute(impl_->expr, u.expr()), u.dimension(), std::move(label));
  }

 private:
  struct Impl {
    std::string label;
    dsl::Expr expr;
    dsl::Expr d1_expr;
    dsl::Expr d2_expr;
    dsl::Program f;
    dsl::Program d1;
    dsl::Program d2;
    std::optional<dsl::PowerLaw> power;
  };
  std::shared_ptr<Impl> impl_;
};

inline Point random_point(Rng& rng, int dim, double half_width) {
  Point x{};
  for (int i = 0; i < dim; ++i) x[i] = uniform(rng, -half_width, half_width);
  return x;
}

struct InvarianceReport {
  bool invariant = true;
  double worst = 0.0;
  Point worst_x{};
  int worst_root = -1;
};

/// Samples x in [-2, 2]^n and every root alpha; invariant iff every
/// |f(sigma_alpha x) - f(x)| <= 1e-9 (1 + |f(x)|).
template <class F>
InvarianceReport check_G_invariance(const RootSystem& rs, const F& f, int samples, Rng& rng) {
  if (samples < 1) throw DomainError("check_G_invariance: samples must be >= 1");
  const int n = rs.dimension();
  InvarianceReport rep;
  double worst_scaled = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Point x = random_point(rng, n, 2.0);
    const std::span<const double> xs(x.data(), n);
    const double fx = f.value(xs);
    for (std::size_t a = 0; a < rs.root_count(); ++a) {
      Point y{};
      Reflection(rs.root(a)).apply(xs, {y.data(), std::size_t(n)});
      const double dev = std::abs(f.value({y.data(), std::size_t(n)}) - fx);
      const double scaled = dev / (1.0 + std::abs(fx));
      if (scaled > worst_scaled || rep.worst_root < 0) {
        worst_scaled = scaled;
        rep.worst = dev;
        rep.worst_x = x;
        rep.worst_root = static_cast<int>(a);
      }
      if (dev > 1e-9 * (1.0 + std::abs(fx))) rep.invariant = false;
    }
  }
  return rep;
}

template <class F>
InvarianceReport check_G_invariance(const RootSystem& rs, const F& f, int samples) {
  Rng rng = make_rng(0x51);
  return check_G_invariance(rs, f, samples, rng);
}

struct GradientCheck {
  double worst_relative = 0.0;
  int checked = 0;
  int skipped = 0;
};

/// Symbolic gradient against central differences with step h. Points where the
/// difference quotients at h and h/2 disagree are treated as lying on a kink
/// and skipped.
inline GradientCheck gradient_fd_check(const Field& f, int samples, Rng& rng, double half_width = 2.0,
                                       double h = 1e-5) {
  GradientCheck out;
  const int n = f.dimension();
  for (int s = 0; s < samples; ++s) {
    Point x = random_point(rng, n, half_width);
    Point g{};
    f.gradient({x.data(), std::size_t(n)}, {g.data(), std::size_t(n)});
    for (int j = 0; j < n; ++j) {
      auto fd = [&](double step) {
        Point a = x, b = x;
        a[j] += step;
        b[j] -= step;
        return (f.value({a.data(), std::size_t(n)}) - f.value({b.data(), std::size_t(n)})) / (2.0 * step);
      };
      const double d1 = fd(h);
      const double d2 = fd(h / 2.0);
      const double scale = std::max({std::abs(g[j]), std::abs(d1), 1.0});
      if (!std::isfinite(d1) || std::abs(d1 - d2) > 1e-4 * scale) {
        ++out.skipped;
        continue;
      }
      ++out.checked;
      out.worst_relative = std::max(out.worst_relative, std::abs(g[j] - d1) / scale);
    }
  }
  return out;
}

}  // namespace dunkl
