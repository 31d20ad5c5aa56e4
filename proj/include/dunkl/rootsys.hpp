#pragma once
// Finite root systems normalized to |alpha|^2 = 2, their reflections, and the
// associated weight w_k(x) = prod_{alpha in R+} |<alpha, x>|^{2 k(alpha)}.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dunkl/error.hpp"

namespace dunkl {

inline constexpr int kMaxDim = 3;

using Point = std::array<double, kMaxDim>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// sigma_alpha(x) = x - <x, alpha> alpha, valid because |alpha|^2 = 2.
class Reflection {
 public:
  Reflection(std::span<const double> root) : dim_(static_cast<int>(root.size())) {
    std::copy(root.begin(), root.end(), root_.begin());
  }

  std::span<const double> root() const { return {root_.data(), std::size_t(dim_)}; }

  void apply(std::span<const double> x, std::span<double> out) const {
    const double c = dot(x, root());
    for (int i = 0; i < dim_; ++i) out[i] = x[i] - c * root_[i];
  }

  std::vector<double> operator()(std::span<const double> x) const {
    std::vector<double> y(x.size());
    apply(x, y);
    return y;
  }

 private:
  Point root_{};
  int dim_;
};

struct PositiveRoot {
  Point alpha{};
  double k = 0.0;
  int orbit = 0;
};

class RootSystem {
 public:
  RootSystem(std::string name, int dim, std::vector<Point> roots,
             std::vector<int> orbit_of_root, std::vector<double> orbit_k,
             std::vector<int> positive_idx)
      : name_(std::move(name)),
        dim_(dim),
        roots_(std::move(roots)),
        orbit_of_root_(std::move(orbit_of_root)),
        orbit_k_(std::move(orbit_k)),
        positive_idx_(std::move(positive_idx)) {
    gamma_ = 0.0;
    for (int i : positive_idx_) {
      PositiveRoot p;
      p.alpha = roots_[i];
      p.orbit = orbit_of_root_[i];
      p.k = orbit_k_[p.orbit];
      positive_.push_back(p);
      gamma_ += p.k;
    }
  }

  const std::string& name() const { return name_; }
  int dimension() const { return dim_; }
  double gamma() const { return gamma_; }
  std::size_t orbit_count() const { return orbit_k_.size(); }
  const std::vector<double>& orbit_multiplicities() const { return orbit_k_; }

  std::size_t root_count() const { return roots_.size(); }
  std::span<const double> root(std::size_t i) const { return {roots_[i].data(), std::size_t(dim_)}; }
  double multiplicity(std::size_t i) const { return orbit_k_[orbit_of_root_[i]]; }
  int orbit_of(std::size_t i) const { return orbit_of_root_[i]; }

  const std::vector<PositiveRoot>& positive_roots() const { return positive_; }

  bool zero_multiplicity() const {
    return std::all_of(orbit_k_.begin(), orbit_k_.end(), [](double k) { return k == 0.0; });
  }

  /// Index of the root equal to `alpha` (to 1e-12), or -1.
  int find_root(std::span<const double> alpha) const {
    for (std::size_t i = 0; i < roots_.size(); ++i) {
      double d = 0.0;
      for (int j = 0; j < dim_; ++j) d = std::max(d, std::abs(roots_[i][j] - alpha[j]));
      if (d <= 1e-12) return static_cast<int>(i);
    }
    return -1;
  }

 private:
  std::string name_;
  int dim_;
  std::vector<Point> roots_;
  std::vector<int> orbit_of_root_;
  std::vector<double> orbit_k_;
  std::vector<int> positive_idx_;
  std::vector<PositiveRoot> positive_;
  double gamma_ = 0.0;
};

namespace detail {

// Fixed-precision key used for exact vector identification (12 decimals).
using RootKey = std::array<std::int64_t, kMaxDim>;

inline RootKey root_key(const Point& p, int dim) {
  RootKey key{};
  for (int i = 0; i < dim; ++i) key[i] = std::llround(p[i] * 1e12);
  return key;
}

inline Point reflect_point(const Point& alpha, const Point& x, int dim) {
  Point y{};
  double c = 0.0;
  for (int i = 0; i < dim; ++i) c += x[i] * alpha[i];
  for (int i = 0; i < dim; ++i) y[i] = x[i] - c * alpha[i];
  return y;
}

inline std::vector<Point> catalog_generators(std::string_view name, int dim) {
  std::vector<Point> raw;
  auto planar = [&](double theta) { raw.push_back(Point{std::cos(theta), std::sin(theta), 0.0}); };
  if (name == "rank1") {
    if (dim != 1) throw DomainError("rank1 requires dimension 1");
    raw.push_back(Point{1.0, 0.0, 0.0});
  } else if (name == "product_Z2") {
    for (int i = 0; i < dim; ++i) {
      Point e{};
      e[i] = 1.0;
      raw.push_back(e);
    }
  } else if (name == "A2") {
    if (dim != 2) throw DomainError("A2 requires dimension 2");
    for (int j = 0; j < 3; ++j) planar(std::numbers::pi * j / 3.0);
  } else if (name == "B2") {
    if (dim != 2) throw DomainError("B2 requires dimension 2");
    raw.push_back(Point{1.0, 0.0, 0.0});
    raw.push_back(Point{0.0, 1.0, 0.0});
    raw.push_back(Point{1.0, 1.0, 0.0});
    raw.push_back(Point{1.0, -1.0, 0.0});
  } else if (name.starts_with("dihedral(") && name.ends_with(")")) {
    if (dim != 2) throw DomainError("dihedral(m) requires dimension 2");
    const std::string inner(name.substr(9, name.size() - 10));
    int m = 0;
    try {
      std::size_t used = 0;
      m = std::stoi(inner, &used);
      if (used != inner.size()) m = 0;
    } catch (const std::exception&) {
      m = 0;
    }
    if (m < 2) throw DomainError("dihedral(m) requires an integer m >= 2");
    for (int j = 0; j < m; ++j) planar(std::numbers::pi * j / m);
  } else {
    throw DomainError("unknown root system '" + std::string(name) + "'");
  }
  for (auto& p : raw) {
    double n2 = 0.0;
    for (int i = 0; i < dim; ++i) n2 += p[i] * p[i];
    const double s = std::sqrt(2.0 / n2);
    for (int i = 0; i < dim; ++i) p[i] *= s;
  }
  return raw;
}

}  // namespace detail

/// Builds a cataloged root system. `multiplicities` lists k per reflection
/// orbit, in the order in which the catalog enumerates its orbits
/// (product_Z2: axis e_1, e_2, ...; B2 and even dihedral: axis/angle-0 orbit
/// first).
inline RootSystem build_root_system(std::string_view name, int dim,
                                    const std::vector<double>& multiplicities) {
  if (dim < 1 || dim > kMaxDim) throw DomainError("dimension must be in [1, 3]");
  std::vector<Point> gens = detail::catalog_generators(name, dim);

  // Closure of +-generators under all reflections.
  std::vector<Point> roots;
  std::map<detail::RootKey, int> index;
  auto add = [&](const Point& p) {
    auto key = detail::root_key(p, dim);
    if (index.count(key)) return false;
    index.emplace(key, static_cast<int>(roots.size()));
    roots.push_back(p);
    return true;
  };
  for (const auto& g : gens) {
    add(g);
    Point neg{};
    for (int i = 0; i < dim; ++i) neg[i] = -g[i];
    add(neg);
  }
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t n = roots.size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        grew |= add(detail::reflect_point(roots[a], roots[b], dim));
  }

  // Orbits under the group generated by the reflections.
  std::vector<int> orbit(roots.size(), -1);
  int orbits = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (orbit[i] >= 0) continue;
    std::vector<std::size_t> stack{i};
    orbit[i] = orbits;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      for (const auto& r : roots) {
        const int j = index.at(detail::root_key(detail::reflect_point(r, roots[cur], dim), dim));
        if (orbit[j] < 0) {
          orbit[j] = orbits;
          stack.push_back(static_cast<std::size_t>(j));
        }
      }
    }
    ++orbits;
  }

  if (multiplicities.size() != static_cast<std::size_t>(orbits))
    throw DomainError("root system '" + std::string(name) + "' has " + std::to_string(orbits) +
                      " orbit(s) but " + std::to_string(multiplicities.size()) +
                      " multiplicities were given");
  for (double k : multiplicities)
    if (!(k >= 0.0) || !std::isfinite(k)) throw DomainError("multiplicities must be finite and >= 0");

  // Generic direction: <alpha, y> never vanishes for the cataloged roots.
  const Point y{1.0, 1.0 / std::numbers::pi, 1.0 / (std::numbers::pi * std::numbers::pi)};
  std::vector<int> positive;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += roots[i][j] * y[j];
    if (s > 0.0) positive.push_back(static_cast<int>(i));
  }
  return RootSystem(std::string(name), dim, std::move(roots), std::move(orbit),
                    multiplicities, std::move(positive));
}

inline std::vector<double> reflect(const RootSystem& rs, std::span<const double> alpha,
                                   std::span<const double> x) {
  if (alpha.size() != static_cast<std::size_t>(rs.dimension()) || rs.find_root(alpha) < 0)
    throw DomainError("reflect: vector is not a root of " + rs.name());
  if (x.size() != alpha.size()) throw DomainError("reflect: dimension mismatch");
  return Reflection(alpha)(x);
}

/// w_k(x); a zero multiplicity contributes the factor 1 (0^0 = 1).
inline double weight(const RootSystem& rs, std::span<const double> x) {
  double w = 1.0;
  for (const auto& p : rs.positive_roots()) {
    if (p.k == 0.0) continue;
    const double t = std::abs(dot({p.alpha.data(), x.size()}, x));
    w *= std::pow(t, 2.0 * p.k);
  }
  return w;
}

}  // namespace dunkl
