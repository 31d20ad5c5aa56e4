#pragma once
// Deterministic weighted quadrature over balls, annuli and boxes in R^n,
// n <= 3. Integration is iterated: the outermost coordinate (radius, or x1 for
// boxes) is integrated adaptively and every outer node triggers an adaptive
// inner integral. Each 1D integral is global-adaptive Gauss-Legendre: a cell's
// error is the difference between the rule on the whole cell and on its two
// halves, and the worst cell is bisected until the summed error meets
// max(rtol |value|, atol) for every component.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <span>
#include <variant>
#include <vector>

#include "dunkl/error.hpp"
#include "dunkl/rootsys.hpp"

namespace dunkl {

struct Ball {
  Point center{};
  double radius = 1.0;
};

struct Annulus {
  Point center{};
  double r_in = 0.0;
  double r_out = 1.0;
};

struct Box {
  Point lo{};
  Point hi{};
};

using Region = std::variant<Ball, Annulus, Box>;

struct QuadSpec {
  Region region = Ball{};
  int order = 48;         // Gauss-Legendre points per cell
  int max_refine = 40;    // bisection depth limit per 1D cell
  int max_cells = 4000;   // cell budget per 1D integral
  double rtol = 1e-7;
  double atol = 1e-13;
  // Distances from the region center at which the integrand is known to kink
  // or jump; they become cell boundaries of the radial integral.
  std::vector<double> radial_breaks;

  void validate() const {
    if (order < 4) throw DomainError("quadrature order must be >= 4");
    if (!(rtol > 0.0)) throw DomainError("quadrature rtol must be > 0");
    if (max_refine < 1 || max_cells < 1) throw DomainError("quadrature refinement limits must be >= 1");
    if (const auto* a = std::get_if<Annulus>(&region))
      if (!(a->r_in >= 0.0 && a->r_in < a->r_out)) throw DomainError("annulus requires 0 <= r_in < r_out");
    if (const auto* b = std::get_if<Ball>(&region))
      if (!(b->radius > 0.0)) throw DomainError("ball radius must be > 0");
  }
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  long evaluations = 0;
};

struct VecQuadResult {
  std::vector<double> value;
  std::vector<double> error;
  bool converged = true;
  long evaluations = 0;

  QuadResult component(std::size_t i) const { return {value[i], error[i], converged, evaluations}; }
};

/// theta_{n-1} = 2 pi^{n/2} / Gamma(n/2).
inline double surface_measure(int n) {
  if (n < 1) throw DomainError("surface_measure requires n >= 1");
  return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

namespace detail {

struct GLRule {
  std::vector<double> x;
  std::vector<double> w;
};

inline GLRule compute_gauss_legendre(int n) {
  GLRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

inline const GLRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GLRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

struct Settings {
  int order = 48;
  int max_depth = 40;
  int max_cells = 4000;
  double rtol = 1e-7;
  double atol = 1e-13;
};

inline double pairwise_sum(const double* v, std::size_t n, std::size_t stride) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i * stride];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h, stride) + pairwise_sum(v + h * stride, n - h, stride);
}

/// Vector-valued adaptive integral of g over [a, b] split at `breaks`.
/// g(t, out) writes K values.
template <class G>
VecQuadResult adaptive_1d(const G& g, std::size_t K, double a, double b, std::vector<double> breaks,
                          const Settings& st) {
  const GLRule& rule = gauss_legendre(st.order);
  VecQuadResult res;
  res.value.assign(K, 0.0);
  res.error.assign(K, 0.0);
  if (!(b > a)) return res;

  std::vector<double> buf(K);
  // Writes the rule's value to out[0..K) and the rule applied to |g| to
  // out_abs[0..K).
  auto gl = [&](double lo, double hi, double* out, double* out_abs) {
    std::fill(out, out + K, 0.0);
    std::fill(out_abs, out_abs + K, 0.0);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      g(mid + half * rule.x[i], buf.data());
      const double wi = rule.w[i] * half;
      for (std::size_t k = 0; k < K; ++k) {
        out[k] += wi * buf[k];
        out_abs[k] += wi * std::abs(buf[k]);
      }
    }
    res.evaluations += static_cast<long>(rule.x.size());
  };

  struct Cell {
    double a, b;
    int depth;
  };
  std::vector<Cell> cells;
  // Per cell: rule on left half, rule on right half, |g| on both halves,
  // error estimate.
  std::vector<double> left, right, labs, rabs, err;

  std::vector<double> whole(K), whole_abs(K);
  auto fill_cell = [&](std::size_t c, const double* whole_q) {
    const std::size_t base = c * K;
    const double m = 0.5 * (cells[c].a + cells[c].b);
    gl(cells[c].a, m, &left[base], &labs[base]);
    gl(m, cells[c].b, &right[base], &rabs[base]);
    for (std::size_t k = 0; k < K; ++k)
      err[base + k] = std::abs(whole_q[k] - (left[base + k] + right[base + k]));
  };
  auto add_cell = [&](double lo, double hi, int depth, const double* whole_q) {
    cells.push_back({lo, hi, depth});
    const std::size_t base = left.size();
    for (auto* v : {&left, &right, &labs, &rabs, &err}) v->resize(base + K);
    fill_cell(cells.size() - 1, whole_q);
  };

  std::sort(breaks.begin(), breaks.end());
  std::vector<double> pts{a};
  for (double p : breaks)
    if (p > a && p < b && p - pts.back() > 1e-14 * (b - a)) pts.push_back(p);
  pts.push_back(b);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    gl(pts[i], pts[i + 1], whole.data(), whole_abs.data());
    add_cell(pts[i], pts[i + 1], 0, whole.data());
  }

  // Tolerances are relative to the integral of |g|, so sign-changing
  // integrands do not demand accuracy below their own cancellation level.
  std::vector<double> total(K, 0.0), esum(K, 0.0);
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t k = 0; k < K; ++k) {
      total[k] += labs[c * K + k] + rabs[c * K + k];
      esum[k] += err[c * K + k];
    }

  auto tol = [&](std::size_t k) { return std::max(st.rtol * total[k], st.atol); };
  auto priority = [&](std::size_t c) {
    double p = 0.0;
    for (std::size_t k = 0; k < K; ++k) p = std::max(p, err[c * K + k] / tol(k));
    return p;
  };
  auto done = [&] {
    for (std::size_t k = 0; k < K; ++k)
      if (esum[k] > tol(k)) return false;
    return true;
  };

  using Entry = std::pair<double, std::size_t>;
  auto cmp = [](const Entry& x, const Entry& y) {
    return x.first < y.first || (x.first == y.first && x.second > y.second);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  for (std::size_t c = 0; c < cells.size(); ++c) heap.push({priority(c), c});

  while (!done()) {
    if (heap.empty() || static_cast<int>(cells.size()) >= st.max_cells) break;
    const std::size_t c = heap.top().second;
    heap.pop();
    const Cell cell = cells[c];
    const double m = 0.5 * (cell.a + cell.b);
    if (cell.depth >= st.max_depth || !(m > cell.a && m < cell.b)) continue;

    std::vector<double> lq(left.begin() + c * K, left.begin() + (c + 1) * K);
    std::vector<double> rq(right.begin() + c * K, right.begin() + (c + 1) * K);
    for (std::size_t k = 0; k < K; ++k) {
      total[k] -= labs[c * K + k] + rabs[c * K + k];
      esum[k] -= err[c * K + k];
    }
    // The parent slot is reused for the left child.
    cells[c] = {cell.a, m, cell.depth + 1};
    fill_cell(c, lq.data());
    add_cell(m, cell.b, cell.depth + 1, rq.data());
    const std::size_t d = cells.size() - 1;
    for (std::size_t k = 0; k < K; ++k) {
      total[k] += labs[c * K + k] + rabs[c * K + k] + labs[d * K + k] + rabs[d * K + k];
      esum[k] += err[c * K + k] + err[d * K + k];
    }
    heap.push({priority(c), c});
    heap.push({priority(d), d});
  }

  // Deterministic reduction in positional order.
  std::vector<std::size_t> order(cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return cells[x].a < cells[y].a; });
  std::vector<double> vals(order.size()), errs(order.size());
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::size_t c = order[i];
      vals[i] = left[c * K + k] + right[c * K + k];
      errs[i] = err[c * K + k];
    }
    res.value[k] = pairwise_sum(vals.data(), vals.size(), 1);
    res.error[k] = pairwise_sum(errs.data(), errs.size(), 1);
  }
  res.converged = true;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < order.size(); ++i) vals[i] = labs[order[i] * K + k] + rabs[order[i] * K + k];
    const double scale = pairwise_sum(vals.data(), vals.size(), 1);
    if (res.error[k] > std::max(st.rtol * scale, st.atol)) res.converged = false;
  }
  return res;
}

inline bool is_origin(const Point& c, int n) {
  for (int i = 0; i < n; ++i)
    if (std::abs(c[i]) > 1e-14) return false;
  return true;
}

// Polar angles at which a hyperplane through the origin crosses the circle.
inline std::vector<double> hyperplane_angles(const RootSystem& rs) {
  std::vector<double> out;
  for (const auto& p : rs.positive_roots()) {
    if (p.k == 0.0) continue;
    const double base = std::atan2(p.alpha[1], p.alpha[0]);
    for (double th : {base + std::numbers::pi / 2.0, base + 1.5 * std::numbers::pi}) {
      double t = std::fmod(th, 2.0 * std::numbers::pi);
      if (t < 0.0) t += 2.0 * std::numbers::pi;
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace detail

/// Vector-valued integral of f(x) * w_k(x) over spec.region. f(x, out) writes
/// K values; the weight is applied here.
template <class F>
VecQuadResult integrate_vec(const RootSystem& rs, const F& f, std::size_t K, const QuadSpec& spec) {
  spec.validate();
  const int n = rs.dimension();
  detail::Settings outer{spec.order, spec.max_refine, spec.max_cells, spec.rtol, spec.atol};
  detail::Settings inner = outer;
  inner.rtol = spec.rtol * 0.1;
  inner.atol = spec.atol * 0.1;

  bool inner_ok = true;
  long inner_evals = 0;
  std::vector<double> fx(K);
  auto weighted = [&](const Point& x, double jac, double* out) {
    const std::span<const double> xs(x.data(), std::size_t(n));
    f(xs, std::span<double>(fx.data(), K));
    const double w = weight(rs, xs) * jac;
    for (std::size_t k = 0; k < K; ++k) out[k] = fx[k] * w;
  };
  auto merge = [&](VecQuadResult r) {
    r.converged = r.converged && inner_ok;
    r.evaluations += inner_evals;
    return r;
  };

  if (const auto* bx = std::get_if<Box>(&spec.region)) {
    auto axis_breaks = [&](int i) {
      std::vector<double> br;
      if (bx->lo[i] < 0.0 && bx->hi[i] > 0.0) br.push_back(0.0);
      return br;
    };
    Point x{};
    // Integrates axes [axis, n) at the current x[0..axis).
    std::function<VecQuadResult(int)> level = [&](int axis) {
      auto g = [&](double t, double* o) {
        x[axis] = t;
        if (axis + 1 == n) {
          weighted(x, 1.0, o);
          return;
        }
        VecQuadResult r = level(axis + 1);
        inner_ok = inner_ok && r.converged;
        inner_evals += r.evaluations;
        std::copy(r.value.begin(), r.value.end(), o);
      };
      return detail::adaptive_1d(g, K, bx->lo[axis], bx->hi[axis], axis_breaks(axis), axis == 0 ? outer : inner);
    };
    return merge(level(0));
  }

  Point c{};
  double r0 = 0.0, r1 = 0.0;
  if (const auto* b = std::get_if<Ball>(&spec.region)) {
    c = b->center;
    r1 = b->radius;
  } else {
    const auto& a = std::get<Annulus>(spec.region);
    c = a.center;
    r0 = a.r_in;
    r1 = a.r_out;
  }
  const bool centered = detail::is_origin(c, n);

  if (n == 1) {
    std::vector<double> br;
    for (double d : spec.radial_breaks) {
      br.push_back(c[0] - d);
      br.push_back(c[0] + d);
    }
    if (c[0] - r1 < 0.0 && c[0] + r1 > 0.0) br.push_back(0.0);
    Point x{};
    auto g = [&](double t, double* o) {
      x[0] = t;
      weighted(x, 1.0, o);
    };
    if (r0 <= 0.0) return detail::adaptive_1d(g, K, c[0] - r1, c[0] + r1, br, outer);
    VecQuadResult lo = detail::adaptive_1d(g, K, c[0] - r1, c[0] - r0, br, outer);
    VecQuadResult hi = detail::adaptive_1d(g, K, c[0] + r0, c[0] + r1, br, outer);
    for (std::size_t k = 0; k < K; ++k) {
      lo.value[k] += hi.value[k];
      lo.error[k] += hi.error[k];
    }
    lo.converged = lo.converged && hi.converged;
    lo.evaluations += hi.evaluations;
    return lo;
  }

  std::vector<double> rbr(spec.radial_breaks.begin(), spec.radial_breaks.end());
  std::vector<double> inner_buf(K);

  if (n == 2) {
    const std::vector<double> abr = centered ? detail::hyperplane_angles(rs) : std::vector<double>{};
    Point x{};
    auto g = [&](double rho, double* o) {
      auto h = [&](double th, double* oo) {
        x[0] = c[0] + rho * std::cos(th);
        x[1] = c[1] + rho * std::sin(th);
        weighted(x, rho, oo);
      };
      VecQuadResult r = detail::adaptive_1d(h, K, 0.0, 2.0 * std::numbers::pi, abr, inner);
      inner_ok = inner_ok && r.converged;
      inner_evals += r.evaluations;
      std::copy(r.value.begin(), r.value.end(), o);
    };
    return merge(detail::adaptive_1d(g, K, r0, r1, rbr, outer));
  }

  // n == 3: x = c + rho (sqrt(1-z^2) cos phi, sqrt(1-z^2) sin phi, z).
  std::vector<double> zbr, pbr;
  if (centered) {
    for (const auto& p : rs.positive_roots()) {
      if (p.k == 0.0) continue;
      if (std::abs(p.alpha[0]) < 1e-14 && std::abs(p.alpha[1]) < 1e-14) zbr.push_back(0.0);
      if (std::abs(p.alpha[2]) < 1e-14) {
        const double base = std::atan2(p.alpha[1], p.alpha[0]);
        for (double th : {base + std::numbers::pi / 2.0, base + 1.5 * std::numbers::pi}) {
          double t = std::fmod(th, 2.0 * std::numbers::pi);
          if (t < 0.0) t += 2.0 * std::numbers::pi;
          pbr.push_back(t);
        }
      }
    }
  }
  Point x{};
  auto g = [&](double rho, double* o) {
    auto hz = [&](double z, double* oz) {
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      auto hp = [&](double ph, double* op) {
        x[0] = c[0] + rho * s * std::cos(ph);
        x[1] = c[1] + rho * s * std::sin(ph);
        x[2] = c[2] + rho * z;
        weighted(x, rho * rho, op);
      };
      VecQuadResult r = detail::adaptive_1d(hp, K, 0.0, 2.0 * std::numbers::pi, pbr, inner);
      inner_ok = inner_ok && r.converged;
      inner_evals += r.evaluations;
      std::copy(r.value.begin(), r.value.end(), oz);
    };
    VecQuadResult r = detail::adaptive_1d(hz, K, -1.0, 1.0, zbr, inner);
    inner_ok = inner_ok && r.converged;
    inner_evals += r.evaluations;
    std::copy(r.value.begin(), r.value.end(), o);
  };
  return merge(detail::adaptive_1d(g, K, r0, r1, rbr, outer));
}

/// Scalar form: integral of f(x) w_k(x) over spec.region.
template <class F>
QuadResult integrate(const RootSystem& rs, const F& f, const QuadSpec& spec) {
  auto vf = [&](std::span<const double> x, std::span<double> out) { out[0] = f(x); };
  return integrate_vec(rs, vf, 1, spec).component(0);
}

/// Unweighted adaptive integral of a function of one variable.
template <class F>
QuadResult integrate_1d(const F& f, double a, double b, int order = 32, double rtol = 1e-10,
                        std::vector<double> breaks = {}) {
  detail::Settings st{order, 60, 8000, rtol, 1e-300};
  auto g = [&](double t, double* o) { o[0] = f(t); };
  return detail::adaptive_1d(g, 1, a, b, std::move(breaks), st).component(0);
}

}  // namespace dunkl
