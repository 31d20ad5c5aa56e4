#pragma once
// N-functions and the one-dimensional calculus built on them: numeric inverses,
// Legendre conjugates, M-condition certificates, the Luxemburg norm, the
// compatibility pair (psi, g), Phi_{t,Lambda,g} and the (F_t) certificate.
//
// Certificates are statements about a sampled grid and record that grid.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dunkl/dsl/diff.hpp"
#include "dunkl/error.hpp"
#include "dunkl/field.hpp"
#include "dunkl/quad.hpp"
#include "dunkl/rootsys.hpp"

namespace dunkl {

using dsl::PowerLaw;

struct LogGrid {
  double s_min = 1e-8;
  double s_max = 1e8;
  int points = 400;

  std::vector<double> values() const {
    if (!(s_min > 0.0 && s_max > s_min) || points < 2) throw DomainError("invalid log grid");
    std::vector<double> v(points);
    const double a = std::log(s_min), b = std::log(s_max);
    for (int i = 0; i < points; ++i) v[i] = std::exp(a + (b - a) * i / (points - 1));
    v.front() = s_min;
    v.back() = s_max;
    return v;
  }
};

/// Increasing function on [0, inf) with an optional exact power form.
class ScalarFn {
 public:
  ScalarFn() = default;
  ScalarFn(std::function<double(double)> f, std::optional<PowerLaw> power, std::string label = {})
      : f_(std::move(f)), power_(power), label_(std::move(label)) {}

  static ScalarFn power_law(PowerLaw p, std::string label = {}) {
    return ScalarFn([p](double s) { return p(s); }, p, std::move(label));
  }

  static ScalarFn from_profile(const Profile& pr) {
    if (pr.power()) return power_law(*pr.power(), pr.label());
    return ScalarFn([pr](double s) { return pr(s); }, std::nullopt, pr.label());
  }

  double operator()(double s) const { return f_(s); }
  const std::optional<PowerLaw>& power() const { return power_; }
  const std::string& label() const { return label_; }

  /// Inverse of an increasing function with f(0+) = 0. Power laws invert in
  /// closed form; otherwise the root is bracketed by doubling and bisected.
  double inverse(double y) const {
    if (!(y > 0.0)) return 0.0;
    if (power_ && power_->coef > 0.0 && power_->exponent > 0.0)
      return std::pow(y / power_->coef, 1.0 / power_->exponent);
    double lo = 1.0, hi = 1.0;
    if (f_(1.0) < y) {
      while (f_(hi) < y) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
      }
    } else {
      while (f_(lo) >= y) {
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-300) return 0.0;
      }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double m = 0.5 * (lo + hi);
      (f_(m) < y ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
  }

  /// outer(inner(s)).
  friend ScalarFn compose(const ScalarFn& outer, const ScalarFn& inner, std::string label = {}) {
    std::optional<PowerLaw> p;
    if (outer.power_ && inner.power_ && inner.power_->coef > 0.0)
      p = PowerLaw{outer.power_->coef * std::pow(inner.power_->coef, outer.power_->exponent),
                   outer.power_->exponent * inner.power_->exponent};
    auto f = outer.f_;
    auto g = inner.f_;
    return ScalarFn([f, g](double s) { return f(g(s)); }, p, std::move(label));
  }

  /// f(s)^e.
  ScalarFn pow(double e, std::string label = {}) const {
    std::optional<PowerLaw> p;
    if (power_ && power_->coef > 0.0) p = PowerLaw{std::pow(power_->coef, e), power_->exponent * e};
    auto f = f_;
    return ScalarFn([f, e](double s) { return std::pow(f(s), e); }, p, std::move(label));
  }

 private:
  std::function<double(double)> f_;
  std::optional<PowerLaw> power_;
  std::string label_;
};

struct NFunCheck {
  bool convex = true;
  bool increasing = true;
  bool small_end = true;  // U(s)/s decreasing toward s_min
  bool large_end = true;  // s/U(s) decreasing toward s_max
  double worst_convexity = 0.0;

  bool ok() const { return convex && increasing && small_end && large_end; }
};

/// Grid checks of the N-function axioms for an increasing convex U.
template <class F>
NFunCheck check_nfunction(const F& U, const LogGrid& grid) {
  const auto s = grid.values();
  std::vector<double> u(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) u[i] = U(s[i]);
  NFunCheck c;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (!(u[i + 1] > u[i])) c.increasing = false;
  // Convexity: consecutive chord slopes are non-decreasing.
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double m0 = (u[i] - u[i - 1]) / (s[i] - s[i - 1]);
    const double m1 = (u[i + 1] - u[i]) / (s[i + 1] - s[i]);
    const double viol = (m0 - m1) / std::max(1.0, std::abs(m1));
    c.worst_convexity = std::max(c.worst_convexity, viol);
    if (viol > 1e-10) c.convex = false;
  }
  const std::size_t k = std::min<std::size_t>(10, s.size() - 1);
  for (std::size_t i = 0; i < k; ++i)
    if (!(u[i] / s[i] < u[i + 1] / s[i + 1])) c.small_end = false;
  for (std::size_t i = s.size() - 1 - k; i + 1 < s.size(); ++i)
    if (!(s[i + 1] / u[i + 1] < s[i] / u[i])) c.large_end = false;
  return c;
}

/// An N-function with a cached evaluation grid.
class NFun {
 public:
  explicit NFun(Profile profile, LogGrid grid = {}) : profile_(std::move(profile)), grid_(grid) {
    s_ = grid_.values();
    u_.resize(s_.size());
    for (std::size_t i = 0; i < s_.size(); ++i) u_[i] = profile_(s_[i]);
    check_ = check_nfunction(profile_, grid_);
  }

  const Profile& profile() const { return profile_; }
  const LogGrid& grid() const { return grid_; }
  const NFunCheck& check() const { return check_; }
  const std::optional<PowerLaw>& power() const { return profile_.power(); }
  const std::vector<double>& grid_points() const { return s_; }
  const std::vector<double>& grid_values() const { return u_; }

  double operator()(double s) const { return profile_(s); }
  double derivative(double s) const { return profile_.derivative(s); }

  /// U^{-1}(y): bracketed by bisection over the cached grid, then refined by
  /// bisection on U itself. Outside the grid range it falls back to an
  /// unbounded bracket search.
  double inverse(double y) const {
    if (!(y > 0.0)) return 0.0;
    if (power() && power()->coef > 0.0 && power()->exponent > 0.0)
      return std::pow(y / power()->coef, 1.0 / power()->exponent);
    if (y <= u_.front() || y >= u_.back()) return as_scalar().inverse(y);
    const auto it = std::lower_bound(u_.begin(), u_.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - u_.begin());
    double lo = s_[i - 1], hi = s_[i];
    for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
      const double m = 0.5 * (lo + hi);
      (profile_(m) < y ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
  }

  ScalarFn as_scalar() const { return ScalarFn::from_profile(profile_); }

 private:
  Profile profile_;
  LogGrid grid_;
  std::vector<double> s_, u_;
  NFunCheck check_;
};

struct LegendreResult {
  double value = 0.0;
  double argmax = 0.0;
  bool truncated = false;  // the supremum was still growing at the grid edge
};

/// F*(s) = sup_{t>0} (s t - F(t)) by grid scan plus golden-section search.
inline LegendreResult legendre(const NFun& F, double s) {
  if (s < 0.0) throw DomainError("legendre requires s >= 0");
  LegendreResult r;
  if (s == 0.0) return r;
  const auto& t = F.grid_points();
  const auto& f = F.grid_values();
  std::size_t best = 0;
  double bestv = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double v = s * t[i] - f[i];
    if (v > bestv) {
      bestv = v;
      best = i;
    }
  }
  if (best + 1 == t.size()) {
    r.truncated = true;
    r.value = bestv;
    r.argmax = t.back();
    return r;
  }
  double a = best == 0 ? 0.0 : t[best - 1];
  double b = t[best + 1];
  auto h = [&](double x) { return s * x - F(x); };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double hc = h(c), hd = h(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
    if (hc > hd) {
      b = d;
      d = c;
      hd = hc;
      c = b - gr * (b - a);
      hc = h(c);
    } else {
      a = c;
      c = d;
      hc = hd;
      d = a + gr * (b - a);
      hd = h(d);
    }
  }
  const double x = 0.5 * (a + b);
  r.argmax = x;
  r.value = std::max({0.0, h(x), bestv});
  return r;
}

/// The conjugate F* as a function. Power laws c s^m (m > 1) use the closed
/// form (m-1) c (s / (c m))^{m/(m-1)}.
inline ScalarFn conjugate(const NFun& F) {
  if (const auto& p = F.power(); p && p->coef > 0.0 && p->exponent > 1.0) {
    const double c = p->coef, m = p->exponent, mp = m / (m - 1.0);
    return ScalarFn::power_law({(m - 1.0) * c * std::pow(c * m, -mp), mp}, "F*");
  }
  auto Fp = std::make_shared<NFun>(F);
  return ScalarFn([Fp](double s) { return legendre(*Fp, s).value; }, std::nullopt, "F*");
}

struct MCert {
  double M = 1.0;
  double range_lo = 1e-3;
  double range_hi = 1e3;
  int samples = 0;
  bool growth = false;  // sup kept growing with the range: no finite M_U
};

/// M_U = sup U(s1 s2) / (U(s1) U(s2)) over log-spaced pairs in [lo, hi].
template <class F>
MCert certify_M(const F& U, double lo = 1e-3, double hi = 1e3, int samples = 61) {
  if (!(lo > 0.0 && hi > lo) || samples < 2) throw DomainError("certify_M: invalid range");
  auto sup_on = [&](double a, double b) {
    const auto s = LogGrid{a, b, samples}.values();
    double m = 0.0;
    for (double s1 : s)
      for (double s2 : s) {
        const double den = std::max(U(s1) * U(s2), 1e-30);
        const double r = U(s1 * s2) / den;
        if (std::isnan(r)) return std::numeric_limits<double>::infinity();
        m = std::max(m, r);
      }
    return m;
  };
  MCert c;
  c.range_lo = lo;
  c.range_hi = hi;
  c.samples = samples;
  c.M = sup_on(lo, hi);
  const double mid = std::sqrt(lo * hi);
  const double inner = sup_on(mid * std::pow(lo / mid, 0.5), mid * std::pow(hi / mid, 0.5));
  c.growth = !std::isfinite(c.M) || c.M > 2.0 * inner;
  // Exact multiplicativity is reported as exactly 1.
  if (std::abs(c.M - 1.0) < 1e-12) c.M = 1.0;
  return c;
}

struct Lemma24Result {
  double worst_excess = -std::numeric_limits<double>::infinity();  // max (LHS - RHS)
  double worst_scaled = -std::numeric_limits<double>::infinity();  // max (LHS - RHS)/(1 + RHS)
  std::pair<double, double> worst_pair{0.0, 0.0};
  bool violated = false;
};

/// U(s1)/s1 * s2 <= U(s1) + U(s2).
template <class F>
Lemma24Result lemma24_check(const F& U, std::span<const std::pair<double, double>> pairs) {
  Lemma24Result r;
  for (const auto& [s1, s2] : pairs) {
    const double lhs = U(s1) / s1 * s2;
    const double rhs = U(s1) + U(s2);
    const double scaled = (lhs - rhs) / (1.0 + rhs);
    if (scaled > r.worst_scaled) {
      r.worst_scaled = scaled;
      r.worst_excess = lhs - rhs;
      r.worst_pair = {s1, s2};
    }
    if (lhs - rhs > 1e-10 * (1.0 + rhs)) r.violated = true;
  }
  return r;
}

struct FenchelYoungResult {
  double worst = -std::numeric_limits<double>::infinity();  // max s t - F(s) - F*(t)
  bool violated = false;
};

inline FenchelYoungResult fenchel_young_check(const NFun& F, const std::vector<double>& s_grid,
                                              const std::vector<double>& t_grid) {
  FenchelYoungResult r;
  std::vector<double> fs(t_grid.size());
  for (std::size_t j = 0; j < t_grid.size(); ++j) fs[j] = legendre(F, t_grid[j]).value;
  for (double s : s_grid) {
    const double Fs = F(s);
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
      const double v = s * t_grid[j] - Fs - fs[j];
      r.worst = std::max(r.worst, v);
      if (v > 1e-8) r.violated = true;
    }
  }
  return r;
}

/// s1 -> s1 / U^{-1}(s1/s2) and s2 -> s1 / U^{-1}(s1/s2) are non-decreasing.
template <class F>
bool monotone_quotients(const F& inverse, const std::vector<double>& grid) {
  auto q = [&](double s1, double s2) { return s1 / inverse(s1 / s2); };
  for (double fixed : grid) {
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double a1 = q(grid[i], fixed), b1 = q(grid[i + 1], fixed);
      const double a2 = q(fixed, grid[i]), b2 = q(fixed, grid[i + 1]);
      if (b1 < a1 * (1.0 - 1e-10) || b2 < a2 * (1.0 - 1e-10)) return false;
    }
  }
  return true;
}

struct LuxResult {
  double value = 0.0;
  bool converged = true;
  bool infinite = false;
  int quadratures = 0;
};

/// inf{C > 0 : integral of U(|f|/C) w_k <= 1}. Power laws c s^p use the exact
/// scaling C = (integral of c|f|^p w_k)^{1/p}.
template <class Fld>
LuxResult luxemburg_norm(const RootSystem& rs, const NFun& U, const Fld& f, const QuadSpec& spec,
                         bool use_power_path = true) {
  LuxResult r;
  auto modular = [&](double C) {
    auto g = [&](std::span<const double> x) { return U(std::abs(f(x)) / C); };
    QuadResult q = integrate(rs, g, spec);
    r.converged = r.converged && q.converged;
    ++r.quadratures;
    return q.value;
  };
  if (use_power_path && U.power() && U.power()->coef > 0.0 && U.power()->exponent > 0.0) {
    const double I = modular(1.0);
    r.value = I > 0.0 ? std::pow(I, 1.0 / U.power()->exponent) : 0.0;
    return r;
  }
  constexpr double kHi = 1e12;
  if (modular(kHi) > 1.0) {
    r.infinite = true;
    r.value = std::numeric_limits<double>::infinity();
    return r;
  }
  double hi = 1.0, lo = 1.0;
  double ihi = modular(hi);
  if (ihi > 1.0) {
    while (ihi > 1.0) {
      lo = hi;
      hi = std::min(hi * 4.0, kHi);
      ihi = modular(hi);
    }
  } else {
    double ilo = ihi;
    while (ilo <= 1.0) {
      hi = lo;
      lo *= 0.25;
      if (lo < 1e-300) {
        r.value = 0.0;
        return r;
      }
      ilo = modular(lo);
      if (ilo == 0.0 && lo < 1e-200) {
        r.value = 0.0;
        return r;
      }
    }
  }
  // modular(lo) > 1 >= modular(hi); bisect in log space.
  for (int it = 0; it < 200 && hi / lo - 1.0 > 1e-12; ++it) {
    const double m = std::sqrt(lo * hi);
    const double v = modular(m);
    if (std::abs(v - 1.0) < 1e-14) {
      lo = hi = m;
      break;
    }
    (v > 1.0 ? lo : hi) = m;
  }
  r.value = std::sqrt(lo * hi);
  return r;
}

struct ThetaBound {
  double l = 0.0;
  double sup = 0.0;
  bool bounded = true;
};

struct CompatPair {
  Profile psi, g, Theta, zeta;
  double C_psi = 0.0;
  double beta = 0.0;
  bool exact = false;  // C_psi from the power-law fast path
  bool psi_nonincreasing = true;
  bool zeta_nonincreasing = true;
  std::vector<ThetaBound> theta;

  bool ok() const {
    bool th = true;
    for (const auto& t : theta) th = th && t.bounded;
    return C_psi > 1.0 && psi_nonincreasing && zeta_nonincreasing && th;
  }

  /// sup of Theta on (0, l] over the certificate grid.
  double theta_sup(double l) const {
    for (const auto& t : theta)
      if (t.l == l) return t.sup;
    return std::numeric_limits<double>::quiet_NaN();
  }
};

/// C_psi = inf over the grid of -g psi' / psi; Theta = Lambda(g)/g psi and
/// zeta = psi/g are built symbolically.
inline CompatPair build_compat_pair(const Profile& Lambda, const Profile& psi, const Profile& g,
                                    const LogGrid& grid, const std::vector<double>& l_values) {
  using namespace dsl;
  CompatPair cp;
  cp.psi = psi;
  cp.g = g;
  cp.Theta = Profile(mul(div(substitute(Lambda.expr(), g.expr()), g.expr()), psi.expr()), "Theta");
  cp.zeta = Profile(div(psi.expr(), g.expr()), "zeta");
  const auto s = grid.values();
  if (psi.power() && g.power() && g.power()->exponent == 1.0 && psi.power()->coef > 0.0) {
    cp.C_psi = -g.power()->coef * psi.power()->exponent;
    cp.exact = true;
  } else {
    double c = std::numeric_limits<double>::infinity();
    for (double x : s) c = std::min(c, -g(x) * psi.derivative(x) / psi(x));
    cp.C_psi = c;
  }
  cp.beta = cp.C_psi - 1.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (psi(s[i + 1]) > psi(s[i]) * (1.0 + 1e-12)) cp.psi_nonincreasing = false;
    if (cp.zeta(s[i + 1]) > cp.zeta(s[i]) * (1.0 + 1e-12)) cp.zeta_nonincreasing = false;
  }
  for (double l : l_values) {
    ThetaBound tb;
    tb.l = l;
    double sup = 0.0;
    std::vector<double> vals;
    for (double x : s) {
      if (x > l) break;
      const double v = cp.Theta(x);
      vals.push_back(v);
      if (!std::isfinite(v)) tb.bounded = false;
      sup = std::max(sup, v);
    }
    const double vl = cp.Theta(l);
    sup = std::max(sup, vl);
    // Growth toward s -> 0 over the first decade signals a blow-up.
    if (vals.size() > 20 && vals.front() > 2.0 * vals[20] && vals.front() > vals[1]) tb.bounded = false;
    tb.sup = sup;
    tb.bounded = tb.bounded && std::isfinite(sup);
    cp.theta.push_back(tb);
  }
  return cp;
}

struct PhiT {
  Profile Phi;
  Profile value;  // Phi_{t,Lambda,g}
  double t = 0.5;
  double C_Phi = 0.0;
  bool exact = false;
  bool ok = false;
  std::string failure;
};

/// Phi_{t,Lambda,g}(s) = (Phi(s)^t g(s) / Lambda(g(s)))^{1/(1-t)}.
inline PhiT build_phi_t(const Profile& Phi, const Profile& Lambda, const Profile& g, double t,
                        const LogGrid& grid) {
  using namespace dsl;
  if (!(t > 0.0 && t < 1.0)) throw DomainError("build_phi_t requires 0 < t < 1");
  PhiT pt;
  pt.Phi = Phi;
  pt.t = t;
  const auto& pP = Phi.power();
  const auto& pL = Lambda.power();
  const auto& pg = g.power();
  if (pP && pL && pg && pP->coef > 0.0 && pL->coef > 0.0 && pg->coef > 0.0) {
    const double q = pP->exponent, p = pL->exponent, a = pg->exponent;
    const double coef =
        std::pow(std::pow(pP->coef, t) * pg->coef / (pL->coef * std::pow(pg->coef, p)), 1.0 / (1.0 - t));
    const double e = (q * t + a - p * a) / (1.0 - t);
    pt.value = Profile(mul(num(coef), pow(var(kProfileVar), num(e))), "Phi_t");
    if (a == 1.0) {
      pt.C_Phi = -pg->coef * e;
      pt.exact = true;
    }
  } else {
    const Expr inner = div(mul(pow(Phi.expr(), num(t)), g.expr()), substitute(Lambda.expr(), g.expr()));
    pt.value = Profile(pow(inner, num(1.0 / (1.0 - t))), "Phi_t");
  }
  const auto s = grid.values();
  if (!pt.exact) {
    double c = std::numeric_limits<double>::infinity();
    for (double x : s) c = std::min(c, -g(x) * pt.value.derivative(x) / pt.value(x));
    pt.C_Phi = c;
  }
  if (std::abs(Phi(0.0)) > 0.0) {
    pt.failure = "Phi(0) != 0";
    return pt;
  }
  for (double x : s)
    if (!(Phi(x) > 0.0)) {
      pt.failure = "Phi(s) > 0 violated at s = " + std::to_string(x);
      return pt;
    }
  if (!(pt.C_Phi > 0.0)) {
    pt.failure = "C_Phi <= 0";
    return pt;
  }
  pt.ok = true;
  return pt;
}

struct FtResult {
  double D_F = 0.0;
  bool pass = false;
  bool range_limited = false;
  bool divergent = false;
  double worst_s = 0.0;      // grid point of the largest ratio
  double worst_ratio = 0.0;  // ratio there
  double tail_growth = 1.0;  // ratio(end)/ratio(end - 10 points)
  bool Fstar_increasing = true;
  MCert M_Fstar;
  double Fstar_over_s_sup = 0.0;
  LogGrid grid;
  std::string failure;
};

/// (F_t): F(Lambda(g/Phi_t) Phi_t/g) <= D_F (Phi/(g B))^{1/(1-t)} on the grid.
/// With range_limited the grid is a certified finite range and a finite
/// supremum passes; otherwise growth at a grid edge counts as divergence.
inline FtResult check_Ft(const NFun& F, const Profile& B, const Profile& Lambda, const PhiT& phiT,
                         const Profile& g, const LogGrid& grid, bool range_limited,
                         const LogGrid& m_grid = {1e-3, 1e3, 61}) {
  FtResult r;
  r.grid = grid;
  r.range_limited = range_limited;
  const auto s = grid.values();
  const double t = phiT.t;
  std::vector<double> ratio(s.size());
  std::size_t worst = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = s[i];
    const double pt = phiT.value(x);
    const double gx = g(x);
    const double lhs = F(Lambda(gx / pt) * pt / gx);
    const double rhs = std::pow(phiT.Phi(x) / (gx * B(x)), 1.0 / (1.0 - t));
    ratio[i] = lhs / rhs;
    if (!(ratio[i] <= ratio[worst])) worst = i;
  }
  r.worst_s = s[worst];
  r.worst_ratio = ratio[worst];
  r.D_F = ratio[worst];
  const std::size_t back = std::min<std::size_t>(10, s.size() - 1);
  if (worst + 1 == s.size()) r.tail_growth = ratio.back() / ratio[s.size() - 1 - back];
  if (worst == 0) r.tail_growth = ratio.front() / ratio[back];
  const bool finite = std::isfinite(r.D_F);
  r.divergent = !finite || (!range_limited && (worst == 0 || worst + 1 == s.size()) && r.tail_growth > 1.01);

  const ScalarFn Fs = conjugate(F);
  const auto ms = m_grid.values();
  for (std::size_t i = 0; i + 1 < ms.size(); ++i)
    if (!(Fs(ms[i + 1]) > Fs(ms[i]))) r.Fstar_increasing = false;
  r.M_Fstar = certify_M(Fs, m_grid.s_min, m_grid.s_max, std::min(m_grid.points, 61));
  for (double x : ms)
    if (x <= 1.0) r.Fstar_over_s_sup = std::max(r.Fstar_over_s_sup, Fs(x) / x);

  if (r.divergent) r.failure = "ratio diverges at the grid edge";
  else if (!r.Fstar_increasing) r.failure = "F* is not increasing";
  else if (r.M_Fstar.growth) r.failure = "no finite M-constant for F*";
  else if (!std::isfinite(r.Fstar_over_s_sup)) r.failure = "F*(s)/s unbounded near 0";
  r.pass = r.failure.empty();
  return r;
}

}  // namespace dunkl
