#pragma once
// Test functions: a type-erased field wrapper and the radial cutoff
// eta^r_{l,x0}(x) = eta(|x - x0|/l)^r with eta = 1 on [0,1], 2 - s on [1,2].

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>

#include "dunkl/error.hpp"
#include "dunkl/field.hpp"
#include "dunkl/rootsys.hpp"

namespace dunkl {

/// Anything with value(x), gradient(x, out) and dimension().
class AnyField {
 public:
  AnyField() = default;

  template <class F>
    requires(!std::is_same_v<std::decay_t<F>, AnyField>)
  AnyField(F f)  // NOLINT(google-explicit-constructor)
      : dim_(f.dimension()), label_(label_of(f)) {
    auto p = std::make_shared<F>(std::move(f));
    value_ = [p](std::span<const double> x) { return p->value(x); };
    grad_ = [p](std::span<const double> x, std::span<double> out) { p->gradient(x, out); };
  }

  int dimension() const { return dim_; }
  const std::string& label() const { return label_; }
  double value(std::span<const double> x) const { return value_(x); }
  double operator()(std::span<const double> x) const { return value_(x); }
  void gradient(std::span<const double> x, std::span<double> out) const { grad_(x, out); }

 private:
  template <class F>
  static std::string label_of(const F& f) {
    if constexpr (requires { f.label(); }) return std::string(f.label());
    else return {};
  }

  int dim_ = 1;
  std::string label_;
  std::function<double(std::span<const double>)> value_;
  std::function<void(std::span<const double>, std::span<double>)> grad_;
};

class Cutoff {
 public:
  Cutoff(int dim, const Point& x0, double l, double r) : dim_(dim), x0_(x0), l_(l), r_(r) {
    if (dim < 1 || dim > kMaxDim) throw DomainError("cutoff dimension must be in [1, 3]");
    if (!(l > 0.0)) throw DomainError("cutoff radius l must be > 0");
    if (!(r >= 1.0)) throw DomainError("cutoff exponent r must be >= 1");
  }

  int dimension() const { return dim_; }
  const Point& center() const { return x0_; }
  double l() const { return l_; }
  double r() const { return r_; }
  std::string label() const { return "eta"; }

  double distance(std::span<const double> x) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += (x[i] - x0_[i]) * (x[i] - x0_[i]);
    return std::sqrt(s);
  }

  static double eta(double s) { return s <= 1.0 ? 1.0 : (s >= 2.0 ? 0.0 : 2.0 - s); }

  double value(std::span<const double> x) const {
    const double e = eta(distance(x) / l_);
    return e == 1.0 ? 1.0 : std::pow(e, r_);
  }

  /// Classical gradient; zero off the open annulus l < |x - x0| < 2l.
  void gradient(std::span<const double> x, std::span<double> out) const {
    const double rho = distance(x);
    const double s = rho / l_;
    for (int i = 0; i < dim_; ++i) out[i] = 0.0;
    if (s <= 1.0 || s >= 2.0) return;
    const double c = -r_ * std::pow(2.0 - s, r_ - 1.0) / l_ / rho;
    for (int i = 0; i < dim_; ++i) out[i] = c * (x[i] - x0_[i]);
  }

  /// (r/l)(2 - |x - x0|/l)^{r-1} on the annulus, 0 elsewhere.
  double gradient_bound(std::span<const double> x) const {
    const double s = distance(x) / l_;
    if (s < 1.0 || s > 2.0) return 0.0;
    return r_ / l_ * std::pow(2.0 - s, r_ - 1.0);
  }

 private:
  int dim_;
  Point x0_;
  double l_, r_;
};

}  // namespace dunkl
