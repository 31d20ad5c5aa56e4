#pragma once
// Dunkl operators, the Dunkl Laplacian, the weak Dunkl-A-Laplacian pairing and
// the DDI residual.
//
// Field arguments are any type with value(x) and gradient(x, out); the
// Laplacian also needs hessian(x, out) (row-major).

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <utility>

#include "dunkl/error.hpp"
#include "dunkl/field.hpp"
#include "dunkl/orlicz.hpp"
#include "dunkl/quad.hpp"
#include "dunkl/random.hpp"
#include "dunkl/rootsys.hpp"

namespace dunkl {

struct DunklContext {
  RootSystem rs;
  double hyperplane_epsilon = 1e-8;
  // Below this |<alpha, x>| the Laplacian bracket is evaluated from its
  // integral form instead of the two cancelling quotients.
  double laplacian_switch = 1e-3;
  double gradient_zero_tol = 1e-12;
  QuadSpec quad{};

  explicit DunklContext(RootSystem r, double eps = 1e-8) : rs(std::move(r)), hyperplane_epsilon(eps) {
    if (!(hyperplane_epsilon > 0.0)) throw DomainError("hyperplane_epsilon must be positive");
  }

  QuadSpec spec_for(const Region& region) const {
    QuadSpec s = quad;
    s.region = region;
    return s;
  }
};

namespace detail {

template <class F>
void require_dim(const DunklContext& ctx, const F& f) {
  if constexpr (requires { f.dimension(); }) {
    if (f.dimension() != ctx.rs.dimension())
      throw DomainError("field dimension " + std::to_string(f.dimension()) + " does not match root system");
  }
}

inline std::span<const double> view(const Point& p, int n) { return {p.data(), std::size_t(n)}; }
inline std::span<double> view(Point& p, int n) { return {p.data(), std::size_t(n)}; }

}  // namespace detail

/// All n Dunkl partials at once; reflections and gradients are shared.
template <class F>
void dunkl_gradient(const DunklContext& ctx, const F& f, std::span<const double> x, std::span<double> out) {
  detail::require_dim(ctx, f);
  const int n = ctx.rs.dimension();
  Point grad{};
  f.gradient(x, detail::view(grad, n));
  for (int j = 0; j < n; ++j) out[j] = grad[j];
  const double fx = f.value(x);
  for (const PositiveRoot& pr : ctx.rs.positive_roots()) {
    if (pr.k == 0.0) continue;
    const auto a = std::span<const double>(pr.alpha.data(), std::size_t(n));
    const double t = dot(a, x);
    double q;
    if (std::abs(t) < ctx.hyperplane_epsilon) {
      q = dot(detail::view(grad, n), a);
    } else {
      Point y{};
      Reflection(a).apply(x, detail::view(y, n));
      q = (fx - f.value(detail::view(y, n))) / t;
    }
    for (int j = 0; j < n; ++j) out[j] += pr.k * a[j] * q;
  }
}

template <class F>
double dunkl_apply(const DunklContext& ctx, int j, const F& f, std::span<const double> x) {
  const int n = ctx.rs.dimension();
  if (j < 0 || j >= n) throw DomainError("dunkl_apply: direction out of range");
  Point out{};
  dunkl_gradient(ctx, f, x, detail::view(out, n));
  return out[j];
}

template <class F>
std::array<double, kMaxDim> dunkl_gradient(const DunklContext& ctx, const F& f, std::span<const double> x) {
  Point out{};
  dunkl_gradient(ctx, f, x, detail::view(out, ctx.rs.dimension()));
  return out;
}

/// Delta f + 2 sum k(alpha) [<grad f, alpha>/t - (f(x) - f(sigma x))/t^2],
/// t = <alpha, x>. For small |t| the bracket is computed as
/// int_0^1 (1 - tau) alpha^T H(x - tau t alpha) alpha d tau, which equals it
/// exactly and stays well conditioned up to and on the hyperplane.
template <class F>
double dunkl_laplacian(const DunklContext& ctx, const F& f, std::span<const double> x) {
  detail::require_dim(ctx, f);
  const int n = ctx.rs.dimension();
  std::array<double, kMaxDim * kMaxDim> H{};
  f.hessian(x, {H.data(), std::size_t(n * n)});
  double lap = 0.0;
  for (int i = 0; i < n; ++i) lap += H[i * n + i];
  if (ctx.rs.zero_multiplicity()) return lap;
  Point grad{};
  f.gradient(x, detail::view(grad, n));
  const double fx = f.value(x);
  const detail::GLRule& gl = detail::gauss_legendre(8);
  for (const PositiveRoot& pr : ctx.rs.positive_roots()) {
    if (pr.k == 0.0) continue;
    const auto a = std::span<const double>(pr.alpha.data(), std::size_t(n));
    const double t = dot(a, x);
    double bracket;
    if (std::abs(t) < ctx.laplacian_switch) {
      bracket = 0.0;
      for (std::size_t q = 0; q < gl.x.size(); ++q) {
        const double tau = 0.5 * (gl.x[q] + 1.0);
        Point y{};
        for (int i = 0; i < n; ++i) y[i] = x[i] - tau * t * a[i];
        std::array<double, kMaxDim * kMaxDim> Hy{};
        f.hessian(detail::view(y, n), {Hy.data(), std::size_t(n * n)});
        double aHa = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) aHa += a[i] * Hy[i * n + j] * a[j];
        bracket += 0.5 * gl.w[q] * (1.0 - tau) * aHa;
      }
    } else {
      Point y{};
      Reflection(a).apply(x, detail::view(y, n));
      bracket = dot(detail::view(grad, n), a) / t - (fx - f.value(detail::view(y, n))) / (t * t);
    }
    lap += 2.0 * pr.k * bracket;
  }
  return lap;
}

/// A(x) = B(|x|) x with Lambda(s) = B(s) s^2.
class ALaplacian {
 public:
  static ALaplacian from_B(const Profile& B, const LogGrid& grid = {}) {
    using namespace dsl;
    Profile L;
    if (B.power()) {
      L = Profile(mul(num(B.power()->coef), pow(var(kProfileVar), num(B.power()->exponent + 2.0))), "Lambda");
    } else {
      L = Profile(mul(B.expr(), pow(var(kProfileVar), num(2.0))), "Lambda");
    }
    return ALaplacian(B, L, grid);
  }

  static ALaplacian from_Lambda(const Profile& Lambda, const LogGrid& grid = {}) {
    using namespace dsl;
    Profile B;
    if (Lambda.power()) {
      B = Profile(mul(num(Lambda.power()->coef), pow(var(kProfileVar), num(Lambda.power()->exponent - 2.0))), "B");
    } else {
      B = Profile(div(Lambda.expr(), pow(var(kProfileVar), num(2.0))), "B");
    }
    return ALaplacian(B, Lambda, grid);
  }

  const Profile& B() const { return B_; }
  const Profile& Lambda() const { return Lambda_; }
  const NFunCheck& nfunction_check() const { return check_; }
  double identity_error() const { return identity_error_; }
  bool valid() const { return check_.ok() && identity_error_ <= 1e-12; }

  /// Throws DomainError naming the failed axiom.
  void require_valid() const {
    if (!check_.convex) throw DomainError("Lambda is not convex on the grid");
    if (!check_.increasing) throw DomainError("Lambda is not increasing on the grid");
    if (!check_.small_end) throw DomainError("Lambda(s)/s does not decrease to 0 at the small end");
    if (!check_.large_end) throw DomainError("s/Lambda(s) does not decrease to 0 at the large end");
    if (identity_error_ > 1e-12) throw DomainError("Lambda(s) != B(s) s^2 on the grid");
  }

 private:
  ALaplacian(Profile B, Profile L, const LogGrid& grid) : B_(std::move(B)), Lambda_(std::move(L)) {
    check_ = check_nfunction(Lambda_, grid);
    for (double s : grid.values()) {
      const double l = Lambda_(s), r = B_(s) * s * s;
      identity_error_ = std::max(identity_error_, std::abs(l - r) / std::max(std::abs(l), 1e-300));
    }
  }

  Profile B_, Lambda_;
  NFunCheck check_;
  double identity_error_ = 0.0;
};

/// <Delta_{k,A} u, v> = -int_{|grad_k u| > tol} B(|grad_k u|) <grad_k u, grad_k v> w_k.
template <class U, class V>
QuadResult weak_A_pairing(const DunklContext& ctx, const ALaplacian& A, const U& u, const V& v,
                          const Region& region) {
  const int n = ctx.rs.dimension();
  auto g = [&](std::span<const double> x) {
    Point gu{}, gv{};
    dunkl_gradient(ctx, u, x, detail::view(gu, n));
    const double m = norm(detail::view(gu, n));
    if (m <= ctx.gradient_zero_tol) return 0.0;
    dunkl_gradient(ctx, v, x, detail::view(gv, n));
    return -A.B()(m) * dot(detail::view(gu, n), detail::view(gv, n));
  };
  return integrate(ctx.rs, g, ctx.spec_for(region));
}

struct DDIResult {
  double margin = 0.0;
  double pairing = 0.0;  // <-Delta_{k,A} u, v>
  double source = 0.0;   // int_{u>0} b Phi(u) v w_k
  double error = 0.0;
  bool converged = true;

  double scale() const { return std::max({std::abs(pairing), std::abs(source), 1e-300}); }
};

/// Samples v at points of the region's bounding box; throws if v < 0 anywhere.
template <class V>
void require_nonnegative(const V& v, const Region& region, int dim, int samples = 256) {
  Rng rng = make_rng(0xD1);
  Point lo{}, hi{};
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Box>) {
          lo = r.lo;
          hi = r.hi;
        } else {
          const double R = [&] {
            if constexpr (std::is_same_v<T, Ball>) return r.radius;
            else return r.r_out;
          }();
          for (int i = 0; i < dim; ++i) {
            lo[i] = r.center[i] - R;
            hi[i] = r.center[i] + R;
          }
        }
      },
      region);
  for (int s = 0; s < samples; ++s) {
    Point x{};
    for (int i = 0; i < dim; ++i) x[i] = uniform(rng, lo[i], hi[i]);
    const double vx = v.value(detail::view(x, dim));
    if (vx < -1e-14) throw DomainError("test function is negative at a sampled point");
  }
}

/// Margin <-Delta_{k,A} u, v> - int_{u>0} b Phi(u) v w_k; >= 0 iff the DDI
/// holds against v.
template <class U, class Bf, class V>
DDIResult ddi_residual(const DunklContext& ctx, const ALaplacian& A, const U& u, const Bf& b, const Profile& Phi,
                       const V& v, const Region& region) {
  const int n = ctx.rs.dimension();
  require_nonnegative(v, region, n);
  auto g = [&](std::span<const double> x, std::span<double> out) {
    out[0] = out[1] = 0.0;
    const double vx = v.value(x);
    Point gu{}, gv{};
    dunkl_gradient(ctx, u, x, detail::view(gu, n));
    const double m = norm(detail::view(gu, n));
    if (m > ctx.gradient_zero_tol) {
      dunkl_gradient(ctx, v, x, detail::view(gv, n));
      out[0] = A.B()(m) * dot(detail::view(gu, n), detail::view(gv, n));
    }
    const double ux = u.value(x);
    if (ux > 0.0 && vx != 0.0) out[1] = b.value(x) * Phi(ux) * vx;
  };
  const VecQuadResult q = integrate_vec(ctx.rs, g, 2, ctx.spec_for(region));
  DDIResult r;
  r.pairing = q.value[0];
  r.source = q.value[1];
  r.margin = r.pairing - r.source;
  r.error = q.error[0] + q.error[1];
  r.converged = q.converged;
  return r;
}

struct ChainRuleReport {
  double worst = 0.0;  // max relative deviation
  Point worst_x{};
  int worst_direction = -1;
  int samples = 0;
};

/// max_{x, j} |T_j(Psi o u) - Psi'(u) T_j u| / max(|lhs|, |rhs|, 1) without
/// checking invariance of u.
inline ChainRuleReport chain_rule_deviation(const DunklContext& ctx, const Field& u, const Profile& Psi,
                                            const std::vector<Point>& points) {
  detail::require_dim(ctx, u);
  const int n = ctx.rs.dimension();
  const Field composed = Psi.compose(u, "Psi(u)");
  ChainRuleReport rep;
  for (const Point& x : points) {
    const auto xs = detail::view(x, n);
    Point lhs{}, tu{};
    dunkl_gradient(ctx, composed, xs, detail::view(lhs, n));
    dunkl_gradient(ctx, u, xs, detail::view(tu, n));
    const double d = Psi.derivative(u.value(xs));
    for (int j = 0; j < n; ++j) {
      const double rhs = d * tu[j];
      const double dev = std::abs(lhs[j] - rhs) / std::max({std::abs(lhs[j]), std::abs(rhs), 1.0});
      if (dev > rep.worst || rep.worst_direction < 0) {
        rep.worst = dev;
        rep.worst_x = x;
        rep.worst_direction = j;
      }
    }
    ++rep.samples;
  }
  return rep;
}

/// Chain rule for G-invariant u at `samples` points of [-2, 2]^n.
inline ChainRuleReport chain_rule_check(const DunklContext& ctx, const Field& u, const Profile& Psi, int samples,
                                        Rng& rng) {
  if (!check_G_invariance(ctx.rs, u, 64, rng).invariant)
    throw DomainError("chain rule requires a G-invariant field; '" + u.label() + "' is not");
  std::vector<Point> pts;
  for (int s = 0; s < samples; ++s) pts.push_back(random_point(rng, ctx.rs.dimension(), 2.0));
  return chain_rule_deviation(ctx, u, Psi, pts);
}

inline ChainRuleReport chain_rule_check(const DunklContext& ctx, const Field& u, const Profile& Psi,
                                        int samples = 100) {
  Rng rng = make_rng(0xC4);
  return chain_rule_check(ctx, u, Psi, samples, rng);
}

}  // namespace dunkl
