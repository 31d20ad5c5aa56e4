// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and runtime caps are fixed here, not read from config.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "corpus.hpp"
#include "dunkl/caccioppoli.hpp"
#include "dunkl/dunkl.hpp"
#include "dunkl/field.hpp"
#include "dunkl/nonexist.hpp"
#include "dunkl/orlicz.hpp"
#include "dunkl/quad.hpp"
#include "dunkl/random.hpp"
#include "dunkl/scenario.hpp"

using namespace dunkl;

namespace {

constexpr double kCollapseAbs = 1e-12;
constexpr double kChainRel = 1e-8;
constexpr double kTailRel = 1e-10;
constexpr double kWeightRel = 1e-10;
constexpr double kQuadRel = 1e-6;
constexpr double kOracleRel = 1e-5;
constexpr double kLuxRel = 1e-5;
constexpr double kLuxHomRel = 1e-8;
constexpr double kLegendreRel = 1e-4;
constexpr double kMarginRel = 1e-6;
constexpr double kFrakRel = 1e-2;

std::string golden_path(const std::string& name) {
  return std::string(DUNKL_SOURCE_DIR) + "/golden/" + name + ".json";
}

Scenario load(const std::string& name) { return build_scenario(read_config(golden_path(name))); }

std::span<const double> sp(const Point& p, int n) { return {p.data(), std::size_t(n)}; }

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Runs one criterion, catching library errors as failures, and enforces the
// runtime cap (0 = uncapped).
bool criterion(int id, double cap_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = cap_s <= 0.0 || secs < cap_s;
  const bool pass = o.ok && in_time;
  char timing[96];
  if (cap_s > 0.0) std::snprintf(timing, sizeof timing, "%.2f s (cap %.0f s)", secs, cap_s);
  else std::snprintf(timing, sizeof timing, "%.2f s", secs);
  std::printf("criterion %d: %s  %s; %s\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), timing);
  std::fflush(stdout);
  return pass;
}

std::string f(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

template <class F>
double midpoint(const F& g, double a, double b, int cells = 1'000'000) {
  const double h = (b - a) / cells;
  long double acc = 0.0L;
  for (int i = 0; i < cells; ++i) acc += g(a + (i + 0.5) * h);
  return double(acc * h);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// 1. k = 0 gives the classical operators.
Outcome classical_collapse() {
  Rng rng = make_rng(1001);
  double worst = 0.0;
  int checks = 0;
  for (const auto& e : dunkl::testing::catalog()) {
    const DunklContext ctx(build_root_system(e.name, e.dim, std::vector<double>(e.orbits, 0.0)));
    const int n = e.dim;
    for (const auto& src : dunkl::testing::corpus()) {
      if (src.dim > n) continue;
      const Field fld = Field::parse(src.source, n);
      for (int s = 0; s < 100; ++s) {
        const Point x = random_point(rng, n, 2.0);
        Point g{};
        fld.gradient(sp(x, n), {g.data(), std::size_t(n)});
        const auto t = dunkl_gradient(ctx, fld, sp(x, n));
        for (int j = 0; j < n; ++j) {
          worst = std::max(worst, std::abs(t[j] - g[j]));
          worst = std::max(worst, std::abs(dunkl_apply(ctx, j, fld, sp(x, n)) - g[j]));
        }
        std::array<double, 9> h{};
        fld.hessian(sp(x, n), {h.data(), std::size_t(n * n)});
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += h[i * n + i];
        worst = std::max(worst, std::abs(dunkl_laplacian(ctx, fld, sp(x, n)) - tr));
        ++checks;
      }
    }
  }
  return {worst <= kCollapseAbs, std::to_string(checks) + " points, worst abs " + f(worst) + " <= " + f(kCollapseAbs)};
}

// 2. Chain rule on invariant fields, and the smoothstep tail k/x.
Outcome chain_rule() {
  double worst = 0.0;
  int pairs = 0;
  for (const auto& e : dunkl::testing::invariant_fields()) {
    const DunklContext ctx(build_root_system(e.system, e.dim, e.k));
    const Field u = Field::parse(e.source, e.dim, e.source);
    for (const char* p : dunkl::testing::chain_profiles()) {
      worst = std::max(worst, chain_rule_check(ctx, u, Profile::parse(p), 100).worst);
      ++pairs;
    }
  }
  double tail = 0.0;
  const Field step = Field::parse("smoothstep(0, 1, x1)", 1);
  for (double k : {0.5, 1.0, 2.0}) {
    const DunklContext ctx(build_root_system("rank1", 1, {k}));
    for (int i = 0; i <= 200; ++i) {
      const double x = 1.0 + 2.0 * i / 200.0;
      const double p[1] = {x};
      tail = std::max(tail, rel(dunkl_apply(ctx, 0, step, p), k / x));
    }
  }
  return {worst <= kChainRel && tail <= kTailRel,
          std::to_string(pairs) + " field/profile pairs, worst rel " + f(worst) + " <= " + f(kChainRel) +
              "; k/x tail worst rel " + f(tail) + " <= " + f(kTailRel)};
}

// 3. Weight homogeneity and reflection invariance.
Outcome weight_properties() {
  Rng rng = make_rng(1003);
  const std::vector<std::pair<const char*, std::vector<double>>> systems{
      {"rank1", {1.3}},        {"product_Z2", {0.5, 1.0}}, {"A2", {0.7}},
      {"B2", {1.0, 0.5}},      {"dihedral(5)", {0.4}},     {"dihedral(6)", {0.6, 1.1}}};
  const std::vector<int> dims{1, 2, 2, 2, 2, 2};
  double worst_h = 0.0, worst_s = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t which = std::size_t(i) % systems.size();
    const RootSystem rs = build_root_system(systems[which].first, dims[which], systems[which].second);
    const int n = rs.dimension();
    const Point x = random_point(rng, n, 3.0);
    const double t = uniform(rng, 0.1, 5.0);
    Point tx{};
    for (int j = 0; j < n; ++j) tx[j] = t * x[j];
    const double w = weight(rs, sp(x, n));
    worst_h = std::max(worst_h, rel(weight(rs, sp(tx, n)), std::pow(t, 2 * rs.gamma()) * w));
    const std::size_t a = std::min(std::size_t(uniform(rng, 0.0, double(rs.root_count()))), std::size_t(rs.root_count()) - 1);
    const auto sx = reflect(rs, rs.root(a), sp(x, n));
    worst_s = std::max(worst_s, rel(weight(rs, sx), w));
  }
  return {worst_h <= kWeightRel && worst_s <= kWeightRel,
          "1000 samples, homogeneity rel " + f(worst_h) + ", invariance rel " + f(worst_s) + " <= " + f(kWeightRel)};
}

QuadSpec spec_of(Region r, int order = 32) {
  QuadSpec s;
  s.region = r;
  s.order = order;
  s.rtol = 1e-10;
  return s;
}

// 4. Analytic integrals and dense midpoint oracles for the 1D integrals.
Outcome quadrature() {
  auto one = [](std::span<const double>) { return 1.0; };
  double worst_a = 0.0;
  for (double k : {0.0, 0.5, 1.0, 2.0}) {
    const RootSystem rs = build_root_system("rank1", 1, {k});
    worst_a = std::max(worst_a, rel(integrate(rs, one, spec_of(Ball{{}, 1.0})).value, std::pow(2.0, k + 1) / (2 * k + 1)));
  }
  worst_a = std::max(worst_a, rel(integrate(build_root_system("A2", 2, {0.0}), one, spec_of(Ball{{}, 1.0})).value,
                                  std::numbers::pi));
  for (auto [k1, k2] : {std::pair{0.5, 1.0}, std::pair{0.25, 0.75}}) {
    const RootSystem rs = build_root_system("product_Z2", 2, {k1, k2});
    worst_a = std::max(worst_a, rel(integrate(rs, one, spec_of(Box{{0, 0, 0}, {1, 1, 0}})).value,
                                    std::pow(2.0, k1 + k2) / ((2 * k1 + 1) * (2 * k2 + 1))));
  }

  // Every 1D integral this binary relies on, recomputed by a 10^6-cell midpoint rule.
  double worst_o = 0.0;
  int oracles = 0;
  auto check = [&](const RootSystem& rs, const std::function<double(double)>& g, double a, double b) {
    const QuadResult q = integrate(rs, [&](std::span<const double> x) { return g(x[0]); },
                                   spec_of(Box{{a, 0, 0}, {b, 0, 0}}));
    const double m = midpoint([&](double x) { const double p[1] = {x}; return g(x) * weight(rs, p); }, a, b);
    worst_o = std::max(worst_o, rel(q.value, m));
    ++oracles;
  };
  for (double k : {0.0, 0.5, 1.0, 2.0}) check(build_root_system("rank1", 1, {k}), [](double) { return 1.0; }, -1, 1);
  for (double k : {0.0, 0.5, 1.0}) check(build_root_system("rank1", 1, {k}), [](double) { return 1.0; }, 0, 1);
  const Scenario r1 = load("rank1_power");
  const double R = *r1.domain_radius;
  auto uval = [&](double x) { const double p[1] = {x}; return r1.u.value(p); };
  check(r1.rs, uval, -R, R);
  check(r1.rs, [&](double x) { const double v = uval(x); return v * v; }, -R, R);
  const Scenario pn = load("power_nonexist");
  for (double l : {1.0, 10.0, 100.0}) check(pn.rs, [](double) { return 1.0; }, -l, l);
  check(pn.rs, [&](double x) { const double p[1] = {x}; return pn.u.value(p); }, -2.0, 2.0);
  return {worst_a <= kQuadRel && worst_o <= kOracleRel,
          "analytic worst rel " + f(worst_a) + " <= " + f(kQuadRel) + "; " + std::to_string(oracles) +
              " midpoint oracles worst rel " + f(worst_o) + " <= " + f(kOracleRel)};
}

// 5. Luxemburg norm.
Outcome luxemburg() {
  QuadSpec box = spec_of(Box{{0, 0, 0}, {1, 0, 0}});
  box.rtol = 1e-12;
  const NFun U(Profile::parse("s^2"));
  auto one = [](std::span<const double>) { return 1.0; };
  double worst = 0.0;
  for (double k : {0.0, 0.5, 1.0}) {
    const RootSystem rs = build_root_system("rank1", 1, {k});
    const double expect = std::sqrt(std::pow(2.0, k) / (2 * k + 1));
    worst = std::max(worst, rel(luxemburg_norm(rs, U, one, box, true).value, expect));
    worst = std::max(worst, rel(luxemburg_norm(rs, U, one, box, false).value, expect));
  }
  const RootSystem rs = build_root_system("product_Z2", 2, {0.5, 1.0});
  QuadSpec ball = spec_of(Ball{{}, 1.0}, 16);
  const Field fld = Field::parse("exp(-r^2)*(1 + x1^2)", 2);
  double worst_h = 0.0;
  for (const char* src : {"s^2", "s^2*ln(1 + s)", "exp(s^2) - 1"}) {
    const NFun V(Profile::parse(src));
    const double base = luxemburg_norm(rs, V, [&](std::span<const double> x) { return fld.value(x); }, ball).value;
    for (double c : {0.1, 1.0, 7.0}) {
      const double v =
          luxemburg_norm(rs, V, [&](std::span<const double> x) { return c * fld.value(x); }, ball).value;
      worst_h = std::max(worst_h, rel(v, c * base));
    }
  }
  return {worst <= kLuxRel && worst_h <= kLuxHomRel,
          "rank1 closed form worst rel " + f(worst) + " <= " + f(kLuxRel) + "; homogeneity worst rel " + f(worst_h) +
              " <= " + f(kLuxHomRel)};
}

// 6. Legendre conjugates, Fenchel-Young and the superadditivity lemma.
Outcome orlicz_toolkit() {
  double worst = 0.0;
  for (double m : {1.5, 2.0, 3.0, 5.0})
    for (double c : {0.5, 1.0 / m, 2.0}) {
      const NFun F(Profile(dsl::mul(dsl::num(c), dsl::pow(dsl::var(dsl::kProfileVar), dsl::num(m)))));
      const ScalarFn exact = conjugate(F);
      for (double s = 1e-2; s <= 1e2 * (1 + 1e-12); s *= std::pow(10.0, 0.1))
        worst = std::max(worst, rel(legendre(F, s).value, exact(s)));
    }
  const std::vector<double> grid = LogGrid{}.values();
  int fy_bad = 0;
  for (const char* src : {"s^2/2", "s^3/3", "s^5", "s^1.5", "s^2*ln(1 + s)"})
    if (fenchel_young_check(NFun(Profile::parse(src)), grid, grid).violated) ++fy_bad;
  Rng rng = make_rng(1006);
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 10000; ++i)
    pairs.emplace_back(std::exp(uniform(rng, std::log(1e-4), std::log(1e4))),
                       std::exp(uniform(rng, std::log(1e-4), std::log(1e4))));
  int l24_bad = 0;
  for (const char* src : {"s^2", "s^3", "s^5"})
    if (lemma24_check(Profile::parse(src), pairs).violated) ++l24_bad;
  return {worst <= kLegendreRel && fy_bad == 0 && l24_bad == 0,
          "Legendre worst rel " + f(worst) + " <= " + f(kLegendreRel) + "; Fenchel-Young violations " +
              std::to_string(fy_bad) + " on " + std::to_string(grid.size()) + "^2 grid; superadditivity violations " +
              std::to_string(l24_bad) + " over 10^4 pairs"};
}

// 7. Caccioppoli estimates on the golden scenarios.
Outcome caccioppoli() {
  bool ok = true;
  std::string msg;
  for (const char* name : {"rank1_power", "product_Z2", "classical_k0"}) {
    const Scenario s = load(name);
    const Certificates c = certify(s);
    const CaccioppoliScenario cs = detail::caccioppoli_of(s, c);
    const BatteryResult br = ddi_battery(cs.ctx, cs.A, cs.u, cs.b, cs.Phi, cs.domain_radius, cs.ddi_tol);
    if (!br.verified()) {
      msg += std::string(name) + " DDI pre-check failed (skipped); ";
      continue;
    }
    std::vector<EstimateBreakdown> es{local_estimate(cs)};
    for (double d : s.deltas) es.push_back(delta_estimate(cs, d * cs.l));
    es.push_back(global_estimate(cs));
    double worst = std::numeric_limits<double>::infinity();
    bool mine = true;
    for (const EstimateBreakdown& e : es) {
      const double tol = kMarginRel * e.scale;
      const bool steps = e.slack_ddi >= -tol && e.slack_I2 >= -tol && e.slack_I3 >= -tol;
      mine = mine && e.margin >= -tol && steps && e.converged;
      worst = std::min(worst, e.scale > 0.0 ? e.margin / e.scale : 0.0);
      worst = std::min({worst, e.scale > 0.0 ? e.slack_ddi / e.scale : 0.0, e.scale > 0.0 ? e.slack_I2 / e.scale : 0.0,
                        e.scale > 0.0 ? e.slack_I3 / e.scale : 0.0});
    }
    ok = ok && mine;
    msg += std::string(name) + " " + std::to_string(es.size()) + " estimates min scaled margin/slack " + f(worst) +
              (mine ? "" : " FAIL") + "; ";
  }
  return {ok, msg + "tol " + f(kMarginRel) + "*scale"};
}

// 8. Nonexistence chain on the power scenario and the bounded-ratio one.
Outcome nonexistence() {
  const Scenario s = load("power_nonexist");
  const Certificates c = certify(s);
  const std::vector<double> grid = parse_grid("1:100:log16").values();
  const NonexistScenario ns = detail::nonexist_of(s, c, grid);
  const auto e = frak_F_exponent(ns);
  double worst_F = 0.0, worst42 = std::numeric_limits<double>::infinity(), worst43 = worst42, worst45 = std::numeric_limits<double>::infinity();
  bool constants = true;
  const double r = *c.r;
  for (double l : grid) {
    const FrakF num = frak_F(ns, l, true);
    const FrakF closed = frak_F(ns, 1.0, false, num.b_sup);
    worst_F = std::max(worst_F, rel(num.value, closed.value * std::pow(l, *e)));
    const Cutoff eta(1, ns.x0, l, r);
    const CutoffIntegrals ci = cutoff_integrals(ns, eta);
    const Lemma42Result a = lemma42_bound(ns, ci);
    const Lemma43Result b = lemma43_bound(ns, ci);
    worst42 = std::min(worst42, a.margin / a.scale);
    worst43 = std::min(worst43, b.margin / b.scale);
    const double C_eta = reflection_constant(ns.ctx, eta);
    for (bool first : {true, false}) {
      const Lemma45Result q = lemma45_bound(ns, eta, ci, first, C_eta);
      worst45 = std::min(worst45, std::max(q.margin, q.margin_corrected));
      for (double v : {q.C_rl, q.M_U, q.w_ball, q.w_sup, q.theta, q.moment, q.b_factor})
        constants = constants && std::isfinite(v) && v > 0.0;
    }
  }
  const FReport rep = theorem41_verdict(ns, c.nonexist_ok());
  const Scenario sb = load("bounded_ratio");
  const Certificates cb = certify(sb);
  const FReport rb = theorem41_verdict(detail::nonexist_of(sb, cb, sb.l_grid->values()), cb.nonexist_ok());
  const bool ok = e && worst_F <= kFrakRel && worst42 >= -kMarginRel && worst43 >= -kMarginRel && worst45 >= 0.0 &&
                  constants && rep.ratio_bounded && rep.tail_stable && rep.verdict == "nonexistence-indicated" &&
                  rep.witness_l.has_value() && rb.verdict == "bounded-ratio";
  std::string d = "frakF exponent " + (e ? f(*e) : std::string("n/a")) + ", numeric vs closed worst rel " +
                  f(worst_F) + " <= " + f(kFrakRel) + "; scaled margins lemma42 " + f(worst42) + ", lemma43 " + f(worst43) +
                  "; min lemma45 margin " + f(worst45) + (constants ? "" : " (missing constants)") + "; ratio " +
                  (rep.ratio_bounded ? "bounded" : "unbounded") + (rep.tail_stable ? ", tail stable" : ", tail unstable") +
                  "; verdict " + rep.verdict +
                  (rep.witness_l ? " witness l* = " + f(*rep.witness_l) : std::string()) + "; tuned verdict " + rb.verdict;
  return {ok, d};
}

// 9. Two runs give identical reports apart from the wall time.
Outcome determinism() {
  bool ok = true;
  std::string d;
  for (const char* name : {"rank1_power", "product_Z2"}) {
    const Scenario s = load(name);
    RunReport a = run(s, {1, false});
    RunReport b = run(s, {2, false});
    a.report.erase("wall_time_s");
    b.report.erase("wall_time_s");
    const bool same = a.report.dump() == b.report.dump() && a.csv == b.csv;
    ok = ok && same;
    d += std::string(name) + (same ? " identical" : " DIFFERS") + "; ";
  }
  return {ok, d + "wall_time_s excluded"};
}

}  // namespace

int main() {
  int failed = 0;
  failed += !criterion(1, 5, classical_collapse);
  failed += !criterion(2, 10, chain_rule);
  failed += !criterion(3, 0, weight_properties);
  failed += !criterion(4, 60, quadrature);
  failed += !criterion(5, 0, luxemburg);
  failed += !criterion(6, 0, orlicz_toolkit);
  failed += !criterion(7, 600, caccioppoli);
  failed += !criterion(8, 600, nonexistence);
  failed += !criterion(9, 0, determinism);
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
