#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "dunkl/field.hpp"
#include "dunkl/quad.hpp"
#include "dunkl/random.hpp"
#include "dunkl/rootsys.hpp"

using namespace dunkl;
using std::numbers::pi;

namespace {

QuadSpec spec(Region r, int order = 32) {
  QuadSpec s;
  s.region = r;
  s.order = order;
  s.rtol = 1e-10;
  return s;
}

// Midpoint rule with a million cells on [a, b]; an independent check for the
// one-dimensional weighted integrals.
template <class F>
double midpoint(const F& f, double a, double b, int cells = 1'000'000) {
  const double h = (b - a) / cells;
  long double acc = 0.0L;
  for (int i = 0; i < cells; ++i) acc += f(a + (i + 0.5) * h);
  return double(acc * h);
}

}  // namespace

TEST(SurfaceMeasure, UnitSpheres) {
  EXPECT_DOUBLE_EQ(surface_measure(1), 2.0);
  EXPECT_NEAR(surface_measure(2), 2 * pi, 1e-15);
  EXPECT_NEAR(surface_measure(3), 4 * pi, 1e-14);
}

TEST(Integrate, Rank1BallOfOnes) {
  for (double k : {0.0, 0.3, 0.5, 1.0, 2.5}) {
    const RootSystem rs = build_root_system("rank1", 1, {k});
    const QuadResult q = integrate(rs, [](auto) { return 1.0; }, spec(Ball{{}, 1.0}));
    EXPECT_TRUE(q.converged);
    EXPECT_NEAR(q.value, std::pow(2.0, k + 1) / (2 * k + 1), 1e-9) << k;
  }
}

TEST(Integrate, UnitDiskClassical) {
  const RootSystem rs = build_root_system("A2", 2, {0.0});
  const QuadResult q = integrate(rs, [](auto) { return 1.0; }, spec(Ball{{}, 1.0}));
  EXPECT_NEAR(q.value, pi, 1e-9);
  const RootSystem r3 = build_root_system("product_Z2", 3, {0, 0, 0});
  EXPECT_NEAR(integrate(r3, [](auto) { return 1.0; }, spec(Ball{{}, 1.0}, 16)).value, 4 * pi / 3, 1e-8);
}

TEST(Integrate, ProductZ2UnitSquare) {
  for (auto [k1, k2] : {std::pair{0.5, 1.0}, std::pair{0.0, 2.0}, std::pair{0.25, 0.75}}) {
    const RootSystem rs = build_root_system("product_Z2", 2, {k1, k2});
    const QuadResult q = integrate(rs, [](auto) { return 1.0; }, spec(Box{{0, 0, 0}, {1, 1, 0}}));
    const double expect = std::pow(2.0, k1 + k2) / ((2 * k1 + 1) * (2 * k2 + 1));
    EXPECT_NEAR(q.value, expect, 1e-9 * expect) << k1 << "," << k2;
  }
}

TEST(Integrate, Rank1AgainstMidpointOracle) {
  const Field f = Field::parse("exp(x1)*(1 + x1^2)", 1);
  for (double k : {0.5, 1.0, 2.0}) {
    const RootSystem rs = build_root_system("rank1", 1, {k});
    auto integrand = [&](double x) {
      const double p[1] = {x};
      return f.value(p) * weight(rs, p);
    };
    const double oracle = midpoint(integrand, -1.5, 1.5);
    const QuadResult q = integrate(rs, [&](std::span<const double> x) { return f.value(x); }, spec(Ball{{}, 1.5}));
    EXPECT_NEAR(q.value, oracle, 1e-8 * std::abs(oracle)) << k;
    const QuadResult b = integrate(rs, [&](std::span<const double> x) { return f.value(x); },
                                   spec(Box{{-1.5, 0, 0}, {1.5, 0, 0}}));
    EXPECT_NEAR(b.value, oracle, 1e-8 * std::abs(oracle)) << k;
  }
}

TEST(Integrate, OffCenterBallOracle) {
  const RootSystem rs = build_root_system("rank1", 1, {1.0});
  Point c{0.4};
  auto f = [](double x) { return std::cos(x); };
  const double oracle = midpoint([&](double x) { const double p[1] = {x}; return f(x) * weight(rs, p); }, -0.3, 1.1);
  const QuadResult q = integrate(rs, [&](std::span<const double> x) { return f(x[0]); }, spec(Ball{c, 0.7}));
  EXPECT_NEAR(q.value, oracle, 1e-8 * std::abs(oracle));
}

TEST(Integrate, BallIsInnerBallPlusAnnulus) {
  struct Case {
    const char* sys;
    int dim;
    std::vector<double> k;
  };
  for (const Case& c : {Case{"rank1", 1, {0.7}}, Case{"product_Z2", 2, {0.5, 1.0}}, Case{"B2", 2, {1.0, 0.5}},
                        Case{"A2", 2, {1.5}}}) {
    const RootSystem rs = build_root_system(c.sys, c.dim, c.k);
    const Field f = Field::parse(c.dim == 1 ? "exp(-x1)*(2 + x1)" : "exp(-x1)*(2 + x2^2)", c.dim);
    auto g = [&](std::span<const double> x) { return f.value(x); };
    const Point ctr{0.2, -0.1, 0};
    const double whole = integrate(rs, g, spec(Ball{ctr, 1.3}, 24)).value;
    const double inner = integrate(rs, g, spec(Ball{ctr, 0.6}, 24)).value;
    const double ring = integrate(rs, g, spec(Annulus{ctr, 0.6, 1.3}, 24)).value;
    EXPECT_NEAR(whole, inner + ring, 1e-8 * std::abs(whole)) << c.sys;
  }
}

TEST(Integrate, RadialHomogeneity) {
  // The weight is homogeneous of degree 2 gamma, so the measure of B(0, R)
  // scales as R^(n + 2 gamma).
  const RootSystem rs = build_root_system("B2", 2, {0.5, 1.0});
  auto one = [](auto) { return 1.0; };
  const double a = integrate(rs, one, spec(Ball{{}, 1.0}, 24)).value;
  const double b = integrate(rs, one, spec(Ball{{}, 2.0}, 24)).value;
  EXPECT_NEAR(b / a, std::pow(2.0, 2 + 2 * rs.gamma()), 1e-8 * b / a);
}

TEST(Integrate, VectorComponentsMatchScalar) {
  const RootSystem rs = build_root_system("product_Z2", 2, {1.0, 0.5});
  auto f0 = [](std::span<const double> x) { return std::exp(-x[0] * x[0] - x[1] * x[1]); };
  auto f1 = [](std::span<const double> x) { return 1.0 + x[0] * x[1]; };
  const QuadSpec s = spec(Ball{{}, 1.2}, 24);
  const VecQuadResult v = integrate_vec(
      rs, [&](std::span<const double> x, std::span<double> o) { o[0] = f0(x); o[1] = f1(x); }, 2, s);
  EXPECT_NEAR(v.value[0], integrate(rs, f0, s).value, 1e-9 * std::abs(v.value[0]));
  EXPECT_NEAR(v.value[1], integrate(rs, f1, s).value, 1e-9 * std::abs(v.value[1]));
}

TEST(Integrate, RadialBreaksHandleKinks) {
  const RootSystem rs = build_root_system("A2", 2, {0.0});
  QuadSpec s = spec(Ball{{}, 2.0});
  s.radial_breaks = {1.0};
  // Integral of clampzero(1 - r) over the plane is 2 pi / 6.
  const QuadResult q = integrate(rs, [](std::span<const double> x) { return std::max(0.0, 1.0 - std::hypot(x[0], x[1])); }, s);
  EXPECT_NEAR(q.value, pi / 3, 1e-10);
}

TEST(Integrate, OneDimensional) {
  const QuadResult q = integrate_1d([](double t) { return std::sqrt(t); }, 0.0, 1.0);
  EXPECT_NEAR(q.value, 2.0 / 3.0, 1e-10);
  const QuadResult k = integrate_1d([](double t) { return std::abs(t - 0.3); }, 0.0, 1.0, 32, 1e-12, {0.3});
  EXPECT_NEAR(k.value, 0.5 * (0.09 + 0.49), 1e-14);
}

TEST(Integrate, InvalidSpecs) {
  const RootSystem rs = build_root_system("rank1", 1, {1.0});
  auto one = [](auto) { return 1.0; };
  QuadSpec s;
  s.order = 2;
  EXPECT_THROW(integrate(rs, one, s), DomainError);
  s = QuadSpec{};
  s.region = Annulus{{}, 1.0, 0.5};
  EXPECT_THROW(integrate(rs, one, s), DomainError);
}

TEST(Integrate, DeterministicAcrossCalls) {
  const RootSystem rs = build_root_system("B2", 2, {1.0, 0.5});
  auto f = [](std::span<const double> x) { return std::exp(x[0]) * std::cos(x[1]); };
  const QuadSpec s = spec(Ball{{0.1, 0.2, 0}, 1.0}, 16);
  const double a = integrate(rs, f, s).value;
  const double b = integrate(rs, f, s).value;
  EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}
