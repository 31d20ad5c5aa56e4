#pragma once
// Scenario files: parsing and schema checks, certificate summary, suite
// execution and the JSON / CSV run report.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dunkl/caccioppoli.hpp"
#include "dunkl/cutoff.hpp"
#include "dunkl/dunkl.hpp"
#include "dunkl/error.hpp"
#include "dunkl/field.hpp"
#include "dunkl/nonexist.hpp"
#include "dunkl/orlicz.hpp"
#include "dunkl/random.hpp"
#include "dunkl/rootsys.hpp"

namespace dunkl {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s{"chainrule",  "caccioppoli_local", "caccioppoli_global", "lemma42",
                                          "lemma43",    "lemma45",           "theorem41"};
  return s;
}

struct GridSpec {
  double start = 1.0;
  double stop = 100.0;
  int points = 16;
  bool log = true;

  std::vector<double> values() const {
    std::vector<double> v;
    for (int i = 0; i < points; ++i) {
      const double f = points == 1 ? 0.0 : double(i) / (points - 1);
      v.push_back(log ? start * std::pow(stop / start, f) : start + (stop - start) * f);
    }
    if (points > 1) v.back() = stop;
    return v;
  }
};

/// "start:stop:logN" (log spacing) or "start:stop:N" (linear).
inline GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw SchemaError("grid '" + text + "' must look like start:stop:logN");
  std::string count = text.substr(b + 1);
  g.log = count.rfind("log", 0) == 0;
  if (g.log) count = count.substr(3);
  try {
    std::size_t used = 0;
    g.start = std::stod(text.substr(0, a));
    g.stop = std::stod(text.substr(a + 1, b - a - 1));
    g.points = std::stoi(count, &used);
    if (used != count.size()) throw SchemaError("");
  } catch (const std::exception&) {
    throw SchemaError("grid '" + text + "' must look like start:stop:logN");
  }
  if (!(g.start > 0.0 && g.stop > g.start) || g.points < 1)
    throw SchemaError("grid '" + text + "' needs 0 < start < stop and N >= 1");
  return g;
}

struct CutoffSpec {
  Point x0{};
  double l = 1.0;
  std::optional<double> r;
};

struct Tolerances {
  double margin = 1e-6;
  double ddi = 1e-9;
  double chainrule = 1e-8;
  double hyperplane_epsilon = 1e-8;
  double laplacian_switch = 1e-3;
};

struct Scenario {
  json config;  // as read, with command-line overrides applied
  std::string id;
  RootSystem rs;
  int quad_order = 48;
  int max_refine = 40;
  double rtol = 1e-7;
  ALaplacian A;
  Profile Phi, g;
  std::optional<Profile> psi;
  std::optional<NFun> F;
  std::optional<double> t;
  Field u, b;
  std::optional<double> domain_radius;
  std::optional<CutoffSpec> cutoff;
  std::optional<Field> phi;
  std::optional<double> level;  // Caccioppoli level l
  std::vector<double> deltas{0.1, 0.01, 0.001};  // multiples of the level
  std::optional<GridSpec> l_grid;
  std::vector<std::string> suites;
  Tolerances tol;
  LogGrid orlicz_grid;
  std::optional<LogGrid> ft_grid;
  std::vector<Profile> chain_profiles;

  DunklContext context() const {
    DunklContext ctx(rs, tol.hyperplane_epsilon);
    ctx.laplacian_switch = tol.laplacian_switch;
    ctx.quad.order = quad_order;
    ctx.quad.max_refine = max_refine;
    ctx.quad.rtol = rtol;
    return ctx;
  }

  bool wants(const std::string& s) const { return std::find(suites.begin(), suites.end(), s) != suites.end(); }
};

namespace detail {

inline void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw SchemaError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : keys) ok = ok || k == a;
    if (!ok) throw SchemaError("unknown key '" + k + "' in " + where);
  }
}

inline double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + " requires '" + key + "'");
  if (!j.at(key).is_number()) throw SchemaError(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

inline double number_or(const json& j, const std::string& key, double dflt, const std::string& where) {
  return j.contains(key) ? get_number(j, key, where) : dflt;
}

inline std::string get_string(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + " requires '" + key + "'");
  if (!j.at(key).is_string()) throw SchemaError(where + "." + key + " must be a string");
  return j.at(key).get<std::string>();
}

template <class Build>
auto parse_expr(const std::string& key, const std::string& text, Build build) {
  try {
    return build(text);
  } catch (const ParseError& e) {
    throw ParseError("in '" + key + "': " + std::string(e.what()).substr(0, std::string(e.what()).rfind(" at position")),
                     e.position());
  } catch (const DomainError& e) {
    throw SchemaError("in '" + key + "': " + e.what());
  }
}

inline Profile profile_of(const json& j, const std::string& key) {
  const std::string text = get_string(j, key, "scenario");
  return parse_expr(key, text, [&](const std::string& s) { return Profile::parse(s, key); });
}

inline Field field_of(const json& j, const std::string& key, int dim) {
  const std::string text = get_string(j, key, "scenario");
  return parse_expr(key, text, [&](const std::string& s) { return Field::parse(s, dim, key); });
}

inline LogGrid log_grid_of(const json& j, const std::string& where, LogGrid dflt) {
  only_keys(j, where, {"s_min", "s_max", "points"});
  LogGrid g = dflt;
  g.s_min = number_or(j, "s_min", g.s_min, where);
  g.s_max = number_or(j, "s_max", g.s_max, where);
  g.points = int(number_or(j, "points", g.points, where));
  if (!(g.s_min > 0.0 && g.s_max > g.s_min) || g.points < 12)
    throw SchemaError(where + " needs 0 < s_min < s_max and points >= 12");
  return g;
}

}  // namespace detail

/// Builds a scenario from a parsed document. Throws SchemaError for structural
/// problems and ParseError (with position) for malformed expressions.
inline Scenario build_scenario(const json& cfg) {
  using namespace detail;
  only_keys(cfg, "scenario",
            {"id", "root_system", "quad", "B", "Lambda", "Phi", "g", "psi", "F", "t", "u", "b", "domain", "cutoff",
             "phi", "l", "deltas", "l_grid", "suites", "tolerances", "orlicz_grid", "ft_grid", "chainrule_profiles",
             "description"});
  const json& rsj = cfg.contains("root_system") ? cfg.at("root_system") : throw SchemaError("scenario requires 'root_system'");
  only_keys(rsj, "root_system", {"name", "dim", "k"});
  const std::string name = get_string(rsj, "name", "root_system");
  const int dim = int(get_number(rsj, "dim", "root_system"));
  std::vector<double> ks;
  if (!rsj.contains("k")) throw SchemaError("root_system requires 'k'");
  if (rsj.at("k").is_number()) ks.push_back(rsj.at("k").get<double>());
  else if (rsj.at("k").is_array()) {
    for (const auto& v : rsj.at("k")) {
      if (!v.is_number()) throw SchemaError("root_system.k entries must be numbers");
      ks.push_back(v.get<double>());
    }
  } else throw SchemaError("root_system.k must be a number or an array");
  RootSystem rs = [&] {
    try {
      return build_root_system(name, dim, ks);
    } catch (const DomainError& e) {
      throw SchemaError(std::string("root_system: ") + e.what());
    }
  }();

  const bool hasB = cfg.contains("B"), hasL = cfg.contains("Lambda");
  if (hasB == hasL) throw SchemaError("scenario requires exactly one of 'B' and 'Lambda'");
  LogGrid og;
  if (cfg.contains("orlicz_grid")) og = log_grid_of(cfg.at("orlicz_grid"), "orlicz_grid", og);
  ALaplacian A = hasB ? ALaplacian::from_B(profile_of(cfg, "B"), og) : ALaplacian::from_Lambda(profile_of(cfg, "Lambda"), og);

  Scenario s{cfg,
             get_string(cfg, "id", "scenario"),
             rs,
             48,
             40,
             1e-7,
             A,
             profile_of(cfg, "Phi"),
             profile_of(cfg, "g"),
             std::nullopt,
             std::nullopt,
             std::nullopt,
             field_of(cfg, "u", dim),
             field_of(cfg, "b", dim),
             {}, {}, {}, {}, {0.1, 0.01, 0.001}, {}, {}, {}, {}, {}, {}};
  s.orlicz_grid = og;
  if (s.id.empty()) throw SchemaError("scenario.id must be non-empty");

  if (cfg.contains("quad")) {
    const json& q = cfg.at("quad");
    only_keys(q, "quad", {"order", "max_refine", "rtol"});
    s.quad_order = int(number_or(q, "order", s.quad_order, "quad"));
    s.max_refine = int(number_or(q, "max_refine", s.max_refine, "quad"));
    s.rtol = number_or(q, "rtol", s.rtol, "quad");
    if (s.quad_order < 4 || s.max_refine < 1 || !(s.rtol > 0.0))
      throw SchemaError("quad needs order >= 4, max_refine >= 1, rtol > 0");
  }
  if (cfg.contains("psi")) s.psi = profile_of(cfg, "psi");
  if (cfg.contains("F")) s.F = NFun(profile_of(cfg, "F"), og);
  if (cfg.contains("t")) {
    s.t = get_number(cfg, "t", "scenario");
    if (!(*s.t > 0.0 && *s.t < 1.0)) throw SchemaError("t must lie in (0, 1)");
  }
  if (cfg.contains("domain")) {
    only_keys(cfg.at("domain"), "domain", {"radius"});
    s.domain_radius = get_number(cfg.at("domain"), "radius", "domain");
    if (!(*s.domain_radius > 0.0)) throw SchemaError("domain.radius must be > 0");
  }
  if (cfg.contains("cutoff") && cfg.contains("phi")) throw SchemaError("give either 'cutoff' or 'phi', not both");
  if (cfg.contains("cutoff")) {
    const json& c = cfg.at("cutoff");
    only_keys(c, "cutoff", {"x0", "l", "r"});
    CutoffSpec cs;
    if (c.contains("x0")) {
      const json& x = c.at("x0");
      if (x.is_number() && dim == 1) cs.x0[0] = x.get<double>();
      else if (x.is_array() && int(x.size()) == dim) {
        for (int i = 0; i < dim; ++i) {
          if (!x[i].is_number()) throw SchemaError("cutoff.x0 entries must be numbers");
          cs.x0[i] = x[i].get<double>();
        }
      } else throw SchemaError("cutoff.x0 must have " + std::to_string(dim) + " coordinates");
    }
    cs.l = get_number(c, "l", "cutoff");
    if (!(cs.l > 0.0)) throw SchemaError("cutoff.l must be > 0");
    if (c.contains("r")) {
      cs.r = get_number(c, "r", "cutoff");
      if (!(*cs.r >= 1.0)) throw SchemaError("cutoff.r must be >= 1");
    }
    s.cutoff = cs;
  }
  if (cfg.contains("phi")) s.phi = field_of(cfg, "phi", dim);
  if (cfg.contains("l")) {
    s.level = get_number(cfg, "l", "scenario");
    if (!(*s.level > 0.0)) throw SchemaError("l must be > 0");
  }
  if (cfg.contains("deltas")) {
    const json& d = cfg.at("deltas");
    if (!d.is_array()) throw SchemaError("deltas must be an array of numbers");
    s.deltas.clear();
    for (const auto& v : d) {
      if (!v.is_number() || !(v.get<double>() > 0.0 && v.get<double>() < 0.5))
        throw SchemaError("deltas are multiples of l in (0, 0.5)");
      s.deltas.push_back(v.get<double>());
    }
  }
  if (cfg.contains("l_grid")) {
    const json& lg = cfg.at("l_grid");
    if (!lg.is_string()) throw SchemaError("l_grid must be a string start:stop:logN");
    s.l_grid = parse_grid(lg.get<std::string>());
  }
  if (!cfg.contains("suites") || !cfg.at("suites").is_array() || cfg.at("suites").empty())
    throw SchemaError("scenario requires a non-empty 'suites' array");
  for (const auto& v : cfg.at("suites")) {
    if (!v.is_string()) throw SchemaError("suite names must be strings");
    const std::string n = v.get<std::string>();
    const auto& ks2 = known_suites();
    if (std::find(ks2.begin(), ks2.end(), n) == ks2.end()) throw SchemaError("unknown suite '" + n + "'");
    if (s.wants(n)) throw SchemaError("suite '" + n + "' listed twice");
    s.suites.push_back(n);
  }
  if (cfg.contains("tolerances")) {
    const json& t = cfg.at("tolerances");
    only_keys(t, "tolerances", {"margin", "ddi", "chainrule", "hyperplane_epsilon", "laplacian_switch"});
    s.tol.margin = number_or(t, "margin", s.tol.margin, "tolerances");
    s.tol.ddi = number_or(t, "ddi", s.tol.ddi, "tolerances");
    s.tol.chainrule = number_or(t, "chainrule", s.tol.chainrule, "tolerances");
    s.tol.hyperplane_epsilon = number_or(t, "hyperplane_epsilon", s.tol.hyperplane_epsilon, "tolerances");
    s.tol.laplacian_switch = number_or(t, "laplacian_switch", s.tol.laplacian_switch, "tolerances");
    if (!(s.tol.margin >= 0.0 && s.tol.ddi >= 0.0 && s.tol.chainrule >= 0.0 && s.tol.hyperplane_epsilon > 0.0 &&
          s.tol.laplacian_switch >= 0.0))
      throw SchemaError("tolerances must be nonnegative (hyperplane_epsilon > 0)");
  }
  if (cfg.contains("ft_grid")) s.ft_grid = log_grid_of(cfg.at("ft_grid"), "ft_grid", LogGrid{});
  if (cfg.contains("chainrule_profiles")) {
    const json& c = cfg.at("chainrule_profiles");
    if (!c.is_array() || c.empty()) throw SchemaError("chainrule_profiles must be a non-empty array of strings");
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].is_string()) throw SchemaError("chainrule_profiles entries must be strings");
      const std::string key = "chainrule_profiles[" + std::to_string(i) + "]";
      s.chain_profiles.push_back(
          parse_expr(key, c[i].get<std::string>(), [&](const std::string& x) { return Profile::parse(x, key); }));
    }
  } else {
    for (const char* p : {"s^2", "exp(s)", "s^3 + s"}) s.chain_profiles.push_back(Profile::parse(p, p));
  }

  // Requirements of each suite.
  auto need = [&](bool ok, const std::string& suite, const std::string& what) {
    if (s.wants(suite) && !ok) throw SchemaError("suite '" + suite + "' requires " + what);
  };
  for (const char* c : {"caccioppoli_local", "caccioppoli_global"}) {
    need(s.psi.has_value(), c, "'psi'");
    need(s.domain_radius.has_value(), c, "'domain.radius'");
    need(s.cutoff.has_value() || s.phi.has_value(), c, "'cutoff' or 'phi'");
  }
  need(s.level.has_value(), "caccioppoli_local", "'l'");
  for (const char* c : {"lemma42", "lemma43", "lemma45", "theorem41"}) {
    need(s.F.has_value(), c, "'F'");
    need(s.t.has_value(), c, "'t'");
    need(s.cutoff.has_value(), c, "'cutoff'");
  }
  need(s.l_grid.has_value(), "theorem41", "'l_grid'");
  if (s.cutoff && s.cutoff->r && s.cutoff->r < 1.0) throw SchemaError("cutoff.r must be >= 1");
  return s;
}

/// Reads and parses a scenario file; JSON syntax errors become ParseError.
inline json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("JSON syntax error: ") + e.what(), e.byte);
  }
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Non-finite doubles are written as null.
inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------------------
// Certificates

struct Certificates {
  double gamma = 0.0;
  bool zero_multiplicity = false;
  bool u_invariant = true;
  double u_invariance_worst = 0.0;
  NFunCheck lambda_check;
  double M_Lambda = 1.0;
  std::optional<CompatPair> pair;
  std::optional<PhiT> phiT;
  std::optional<NFunCheck> F_check;
  std::optional<FtResult> ft;
  std::optional<double> M_Fstar;
  std::optional<double> r;
  std::optional<double> C_eta;
  double u_sup = 0.0;

  bool nonexist_ok() const {
    return lambda_check.ok() && phiT && phiT->ok && F_check && F_check->ok() && ft && ft->pass;
  }
};

inline double nonexist_radius(const Scenario& s) {
  if (s.domain_radius) return *s.domain_radius;
  double L = s.cutoff ? s.cutoff->l : 1.0;
  if (s.l_grid) L = std::max(L, s.l_grid->stop);
  return 2.0 * L;
}

inline double power_M(const Profile& U) {
  if (U.power() && U.power()->coef > 0.0) return 1.0 / U.power()->coef;
  return certify_M(U).M;
}

/// Everything that can be certified without running the integrals.
inline Certificates certify(const Scenario& s) {
  Certificates c;
  c.gamma = s.rs.gamma();
  c.zero_multiplicity = s.rs.zero_multiplicity();
  const InvarianceReport inv = check_G_invariance(s.rs, s.u, 64);
  c.u_invariant = inv.invariant;
  c.u_invariance_worst = inv.worst;
  c.lambda_check = s.A.nfunction_check();
  c.M_Lambda = power_M(s.A.Lambda());
  if (s.psi) c.pair = build_compat_pair(s.A.Lambda(), *s.psi, s.g, s.orlicz_grid, {s.level.value_or(1.0)});
  c.u_sup = sampled_sup(s.u, nonexist_radius(s));
  if (s.t) c.phiT = build_phi_t(s.Phi, s.A.Lambda(), s.g, *s.t, s.orlicz_grid);
  if (s.F) c.F_check = s.F->check();
  if (s.F && c.phiT && c.phiT->ok) {
    if (s.ft_grid) {
      c.ft = check_Ft(*s.F, s.A.B(), s.A.Lambda(), *c.phiT, s.g, *s.ft_grid, false);
    } else {
      const double hi = c.u_sup > 0.0 ? c.u_sup : 1.0;
      c.ft = check_Ft(*s.F, s.A.B(), s.A.Lambda(), *c.phiT, s.g, LogGrid{1e-8 * hi, hi, 200}, true);
    }
    c.M_Fstar = c.ft->M_Fstar.M;
  }
  if (s.F && s.t && c.phiT && c.ft && s.cutoff) {
    const NonexistScenario ns{s.context(), s.A, s.u, s.b, s.Phi, s.g, *s.F, *s.t, *c.phiT, *c.ft, s.cutoff->x0, {}};
    c.r = s.cutoff->r ? *s.cutoff->r : cutoff_exponent(ns);
  }
  if (s.cutoff) {
    const Cutoff eta(s.rs.dimension(), s.cutoff->x0, s.cutoff->l, c.r ? *c.r : s.cutoff->r.value_or(2.0));
    c.C_eta = reflection_constant(s.context(), eta);
  }
  return c;
}

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Human-readable certificate summary (no integrals are evaluated).
inline std::string explain(const Scenario& s, const Certificates& c) {
  std::ostringstream o;
  o << "scenario " << s.id << "\n";
  o << "root system " << s.rs.name() << " (dim " << s.rs.dimension() << ", " << s.rs.root_count() << " roots)\n";
  o << "gamma = " << fmt(c.gamma) << "\n";
  if (c.zero_multiplicity) o << "w_k ≡ 1 (classical case)\n";
  o << "u G-invariant: " << (c.u_invariant ? "yes" : "NO (worst deviation " + fmt(c.u_invariance_worst) + ")") << "\n";
  o << "Lambda N-function: " << (c.lambda_check.ok() ? "ok" : "FAIL") << "\n";
  o << "M_Lambda = " << fmt(c.M_Lambda) << "\n";
  if (c.pair) {
    o << "C_psi = " << fmt(c.pair->C_psi) << "\n";
    o << "beta = " << fmt(c.pair->beta) << "\n";
    o << "compatibility (psi, g): " << (c.pair->ok() ? "ok" : "FAIL") << "\n";
  }
  if (c.phiT) {
    if (c.phiT->ok) o << "C_Phi = " << fmt(c.phiT->C_Phi) << "\n";
    else o << "C_Phi: FAIL (" << c.phiT->failure << ")\n";
  }
  if (c.F_check) o << "F N-function: " << (c.F_check->ok() ? "ok" : "FAIL") << "\n";
  if (c.M_Fstar) o << "M_F* = " << fmt(*c.M_Fstar) << "\n";
  if (c.ft) {
    if (c.ft->pass) {
      o << "D_F = " << fmt(c.ft->D_F) << " on [" << fmt(c.ft->grid.s_min) << ", " << fmt(c.ft->grid.s_max) << "]"
        << (c.ft->range_limited ? " (range-limited)" : "") << "\n";
    } else {
      o << "(F_t) FAIL: ratio " << fmt(c.ft->worst_ratio) << " at s = " << fmt(c.ft->worst_s);
      if (c.ft->divergent) o << " diverges (tail growth " << fmt(c.ft->tail_growth) << ")";
      if (!c.ft->failure.empty()) o << "; " << c.ft->failure;
      o << "\n";
    }
  }
  if (c.r) o << "r = " << fmt(*c.r) << "\n";
  if (c.C_eta) o << "C(eta,k) = " << fmt(*c.C_eta) << "\n";
  return o.str();
}

inline json certificates_json(const Certificates& c) {
  json j;
  j["gamma"] = c.gamma;
  j["zero_multiplicity"] = c.zero_multiplicity;
  j["u_invariant"] = c.u_invariant;
  j["lambda_nfunction"] = c.lambda_check.ok();
  j["M_Lambda"] = num(c.M_Lambda);
  j["u_sup"] = num(c.u_sup);
  if (c.pair) {
    j["C_psi"] = num(c.pair->C_psi);
    j["beta"] = num(c.pair->beta);
    j["compat_ok"] = c.pair->ok();
  }
  if (c.phiT) {
    j["C_Phi"] = num(c.phiT->C_Phi);
    j["phi_t_ok"] = c.phiT->ok;
  }
  if (c.F_check) j["F_nfunction"] = c.F_check->ok();
  if (c.ft) {
    j["Ft"] = {{"pass", c.ft->pass},
               {"D_F", num(c.ft->D_F)},
               {"range_limited", c.ft->range_limited},
               {"divergent", c.ft->divergent},
               {"worst_s", num(c.ft->worst_s)},
               {"worst_ratio", num(c.ft->worst_ratio)},
               {"s_min", c.ft->grid.s_min},
               {"s_max", c.ft->grid.s_max}};
  }
  if (c.M_Fstar) j["M_Fstar"] = num(*c.M_Fstar);
  if (c.r) j["r"] = *c.r;
  if (c.C_eta) j["C_eta"] = num(*c.C_eta);
  return j;
}

// ---------------------------------------------------------------------------
// Suites

struct CsvRow {
  std::string suite, kind;
  std::map<std::string, double> values;
  std::string ddi_precheck;
  bool converged = true;
  bool pass = true;
};

struct SuiteOutput {
  std::string name;
  std::string status;  // pass, fail, inconclusive, error
  json record;
  std::vector<CsvRow> rows;
};

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> c{"l",  "delta", "lhs", "rhs", "margin", "C_k", "I0",    "I1",
                                          "I2", "I3",    "I4",  "I5",  "I6",     "J1",  "J2",    "O_r",
                                          "frakF", "mass", "ratio"};
  return c;
}

struct RunOptions {
  int jobs = 1;
  bool sweep = false;
};

namespace detail {

inline CaccioppoliScenario caccioppoli_of(const Scenario& s, const Certificates& c) {
  const int n = s.rs.dimension();
  CaccioppoliScenario cs{s.context(), s.A, s.u, s.b, s.Phi, *c.pair, AnyField{}, s.level.value_or(1.0), 0.1, 1.0, {}, 1e-6, 1e-9, 1.0};
  cs.domain_radius = *s.domain_radius;
  cs.margin_tol = s.tol.margin;
  cs.ddi_tol = s.tol.ddi;
  cs.M_Lambda = c.M_Lambda;
  if (s.cutoff) {
    cs.phi = Cutoff(n, s.cutoff->x0, s.cutoff->l, s.cutoff->r.value_or(2.0));
    const double d0 = norm({s.cutoff->x0.data(), std::size_t(n)});
    for (double L : {s.cutoff->l, 2.0 * s.cutoff->l})
      for (double b : {d0 - L, d0 + L})
        if (b > 0.0) cs.phi_breaks.push_back(b);
  } else {
    cs.phi = *s.phi;
  }
  return cs;
}

inline json breakdown_json(const EstimateBreakdown& e) {
  return {{"kind", e.kind},         {"l", e.l},
          {"delta", e.delta},       {"lhs", num(e.lhs)},
          {"rhs", num(e.rhs)},      {"margin", num(e.margin)},
          {"scale", num(e.scale)},  {"C_k", num(e.C_k)},
          {"I", num(e.I)},          {"I0", num(e.I0)},
          {"I1", num(e.I1)},        {"I2", num(e.I2)},
          {"I3", num(e.I3)},        {"I4", num(e.I4)},
          {"I5", num(e.I5)},        {"I6", num(e.I6)},
          {"H1", num(e.H1)},        {"H2", num(e.H2)},
          {"H3", num(e.H3)},        {"admissibility", num(e.admissibility)},
          {"slack_ddi", num(e.slack_ddi)}, {"slack_I2", num(e.slack_I2)},
          {"slack_I3", num(e.slack_I3)},   {"split_error", num(e.split_error)},
          {"steps_ok", e.steps_ok}, {"converged", e.converged},
          {"inconclusive", e.inconclusive}, {"pass", e.pass}};
}

inline CsvRow breakdown_row(const std::string& suite, const EstimateBreakdown& e, const std::string& ddi) {
  CsvRow r{suite, e.kind, {}, ddi, e.converged, e.pass};
  r.values = {{"l", e.l},   {"delta", e.delta}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"margin", e.margin},
              {"C_k", e.C_k}, {"I0", e.I0},     {"I1", e.I1},   {"I2", e.I2},   {"I3", e.I3},
              {"I4", e.I4}, {"I5", e.I5},       {"I6", e.I6}};
  return r;
}

inline json battery_json(const BatteryResult& b) {
  json j{{"size", b.size}, {"passed", b.passed}, {"worst_scaled_margin", num(b.worst_scaled)},
         {"converged", b.converged}, {"verified", b.verified()}};
  json rows = json::array();
  for (std::size_t i = 0; i < b.results.size(); ++i)
    rows.push_back({{"test_function", b.labels[i]},
                    {"margin", num(b.results[i].margin)},
                    {"pairing", num(b.results[i].pairing)},
                    {"source", num(b.results[i].source)},
                    {"converged", b.results[i].converged}});
  j["results"] = rows;
  return j;
}

inline SuiteOutput run_chainrule(const Scenario& s, const Certificates& c) {
  SuiteOutput out{"chainrule", "pass", json::object(), {}};
  if (!c.u_invariant) {
    out.status = "inconclusive";
    out.record["note"] = "u is not G-invariant";
    return out;
  }
  const DunklContext ctx = s.context();
  json rows = json::array();
  for (const Profile& P : s.chain_profiles) {
    const ChainRuleReport r = chain_rule_check(ctx, s.u, P, 100);
    const bool ok = r.worst <= s.tol.chainrule;
    rows.push_back({{"Psi", P.label()}, {"worst", r.worst}, {"samples", r.samples}, {"pass", ok}, {"converged", true}});
    CsvRow row{"chainrule", P.label(), {{"margin", s.tol.chainrule - r.worst}}, "", true, ok};
    out.rows.push_back(row);
    if (!ok) out.status = "fail";
  }
  out.record["rows"] = rows;
  out.record["tolerance"] = s.tol.chainrule;
  return out;
}

inline SuiteOutput run_caccioppoli(const Scenario& s, const Certificates& c, bool global) {
  const std::string name = global ? "caccioppoli_global" : "caccioppoli_local";
  SuiteOutput out{name, "pass", json::object(), {}};
  const CaccioppoliScenario cs = caccioppoli_of(s, c);
  const BatteryResult bat = ddi_battery(cs.ctx, cs.A, cs.u, cs.b, cs.Phi, cs.domain_radius, s.tol.ddi);
  out.record["ddi_precheck"] = battery_json(bat);
  const std::string ddi = bat.verified() ? "verified" : "failed";
  const bool certs = c.pair->ok() && c.lambda_check.ok() && c.u_invariant;
  out.record["certificates_ok"] = certs;
  std::vector<EstimateBreakdown> es;
  if (global) {
    es.push_back(global_estimate(cs));
  } else {
    es.push_back(local_estimate(cs));
    for (double f : s.deltas) es.push_back(delta_estimate(cs, f * cs.l));
  }
  const bool inconclusive = !bat.verified() || !certs;
  json rows = json::array();
  bool all = true;
  for (EstimateBreakdown& e : es) {
    e.inconclusive = inconclusive;
    all = all && e.pass;
    rows.push_back(breakdown_json(e));
    out.rows.push_back(breakdown_row(name, e, ddi));
  }
  out.record["rows"] = rows;
  if (!global) {
    std::vector<double> ds;
    for (double f : s.deltas) ds.push_back(f * cs.l);
    const DominationCheck dc = check_domination(cs, ds);
    out.record["domination"] = {{"samples", dc.samples}, {"worst_excess", num(dc.worst_excess)},
                                {"worst_term", dc.worst_term}, {"ok", dc.ok}};
    all = all && dc.ok;
  }
  out.status = inconclusive ? "inconclusive" : (all ? "pass" : "fail");
  return out;
}

inline NonexistScenario nonexist_of(const Scenario& s, const Certificates& c, const std::vector<double>& grid) {
  NonexistScenario ns{s.context(), s.A, s.u, s.b, s.Phi, s.g, *s.F, *s.t, *c.phiT, *c.ft, s.cutoff->x0, grid};
  ns.r = c.r.value_or(0.0);
  ns.cutoff_l = s.cutoff->l;
  ns.margin_tol = s.tol.margin;
  ns.M_Lambda = c.M_Lambda;
  ns.M_Fstar = c.M_Fstar.value_or(1.0);
  return ns;
}

inline std::vector<double> lemma_grid(const Scenario& s) {
  return s.l_grid ? s.l_grid->values() : std::vector<double>{s.cutoff->l};
}

inline SuiteOutput run_lemma(const Scenario& s, const Certificates& c, const std::string& name) {
  SuiteOutput out{name, "pass", json::object(), {}};
  if (!c.phiT || !c.phiT->ok || !c.ft) {
    out.status = "inconclusive";
    out.record["note"] = "Phi_t certificate failed";
    out.record["rows"] = json::array();
    return out;
  }
  const bool certs = c.nonexist_ok();
  out.record["certificates_ok"] = certs;
  const NonexistScenario ns = nonexist_of(s, c, {});
  const int n = s.rs.dimension();
  json rows = json::array();
  bool all = true;
  for (double l : lemma_grid(s)) {
    const Cutoff eta(n, s.cutoff->x0, l, *c.r);
    const CutoffIntegrals ci = cutoff_integrals(ns, eta);
    if (name == "lemma42") {
      const Lemma42Result r = lemma42_bound(ns, ci);
      rows.push_back({{"l", l}, {"lhs", num(r.lhs)}, {"rhs", num(r.rhs)}, {"margin", num(r.margin)},
                      {"scale", num(r.scale)}, {"C", num(r.C)}, {"M_Lambda", num(r.M_Lambda)},
                      {"beta", num(r.beta)}, {"J1", num(r.J1)}, {"converged", r.converged}, {"pass", r.pass}});
      out.rows.push_back({name, "lemma42", {{"l", l}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}, {"J1", r.J1}},
                          "", r.converged, r.pass});
      all = all && r.pass;
    } else if (name == "lemma43") {
      const Lemma43Result r = lemma43_bound(ns, ci);
      rows.push_back({{"l", l},
                      {"lhs", num(r.lhs)},
                      {"rhs", num(r.rhs)},
                      {"margin", num(r.margin)},
                      {"scale", num(r.scale)},
                      {"J1", num(r.J1)},
                      {"J2", num(r.J2)},
                      {"C", num(r.C)},
                      {"C3", num(r.C3)},
                      {"D", num(r.D)},
                      {"delta", num(r.delta)},
                      {"epsilon", num(r.epsilon)},
                      {"G_term", num(r.G_term)},
                      {"implied_constant", num(r.implied_constant)},
                      {"J_zero", r.J_zero},
                      {"converged", r.converged},
                      {"pass", r.pass}});
      out.rows.push_back({name, "lemma43",
                          {{"l", l}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}, {"J1", r.J1}, {"J2", r.J2}},
                          "", r.converged, r.pass});
      all = all && r.pass;
    } else {
      const double C_eta = reflection_constant(ns.ctx, eta);
      for (bool first : {true, false}) {
        const Lemma45Result r = lemma45_bound(ns, eta, ci, first, C_eta);
        rows.push_back({{"l", l},
                        {"U", r.which},
                        {"lhs", num(r.lhs)},
                        {"rhs", num(r.rhs)},
                        {"rhs_corrected", num(r.rhs_corrected)},
                        {"margin", num(r.margin)},
                        {"margin_corrected", num(r.margin_corrected)},
                        {"C_rl", num(r.C_rl)},
                        {"r", r.r},
                        {"tau", num(r.tau)},
                        {"M_U", num(r.M_U)},
                        {"C_eta", num(r.C_eta)},
                        {"w_ball", num(r.w_ball)},
                        {"w_sup", num(r.w_sup)},
                        {"theta", num(r.theta)},
                        {"moment", num(r.moment)},
                        {"b_factor", num(r.b_factor)},
                        {"b_factor_corrected", num(r.b_factor_corrected)},
                        {"converged", r.converged},
                        {"pass", r.pass}});
        out.rows.push_back({name, r.which, {{"l", l}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}}, "",
                            r.converged, r.pass});
        all = all && r.pass;
      }
    }
  }
  out.record["rows"] = rows;
  out.status = !certs ? "inconclusive" : (all ? "pass" : "fail");
  return out;
}

inline SuiteOutput run_theorem41(const Scenario& s, const Certificates& c) {
  SuiteOutput out{"theorem41", "pass", json::object(), {}};
  out.record["scenario"] = s.id;
  const std::vector<double> grid = s.l_grid->values();
  out.record["l_grid"] = grid;
  if (!c.phiT || !c.phiT->ok || !c.ft) {
    out.status = "inconclusive";
    out.record["verdict"] = "inconclusive";
    out.record["note"] = "Phi_t certificate failed";
    out.record["rows"] = json::array();
    return out;
  }
  bool hypothesis = true;
  if (s.domain_radius) {
    const BatteryResult bat =
        ddi_battery(s.context(), s.A, s.u, s.b, s.Phi, *s.domain_radius, s.tol.ddi);
    out.record["ddi_precheck"] = battery_json(bat);
    hypothesis = bat.verified();
  }
  const NonexistScenario ns = nonexist_of(s, c, grid);
  const FReport rep = theorem41_verdict(ns, c.nonexist_ok() && hypothesis);
  json rows = json::array();
  double worst_rel = 0.0;
  for (const FRow& r : rep.rows) {
    const double rel = std::abs(r.frakF_numeric - r.frakF) / r.frakF;
    worst_rel = std::max(worst_rel, rel);
    rows.push_back({{"l", r.l}, {"J1", num(r.J1)}, {"J2", num(r.J2)}, {"O_r", num(r.O_r)}, {"frakF", num(r.frakF)},
                    {"frakF_numeric", num(r.frakF_numeric)}, {"frakF_rel_diff", num(rel)}, {"mass", num(r.mass)},
                    {"ratio", num(r.ratio)}, {"mass_ratio", num(r.mass_ratio)}, {"converged", r.converged}});
    out.rows.push_back({"theorem41", "row",
                        {{"l", r.l}, {"J1", r.J1}, {"J2", r.J2}, {"O_r", r.O_r}, {"frakF", r.frakF}, {"mass", r.mass},
                         {"ratio", r.ratio}},
                        "", r.converged, true});
  }
  out.record["rows"] = rows;
  out.record["r"] = rep.r;
  out.record["exponent"] = rep.exponent ? num(*rep.exponent) : json(nullptr);
  out.record["fitted_C"] = num(rep.fitted_C);
  out.record["lemma47_constant"] = num(rep.lemma47_constant);
  out.record["tail_stable"] = rep.tail_stable;
  out.record["frakF_worst_rel_diff"] = num(worst_rel);
  out.record["verdict"] = rep.verdict;
  out.record["converged"] = rep.converged;
  if (rep.witness_l)
    out.record["witness"] = {{"l", *rep.witness_l}, {"bound", num(rep.witness_bound)},
                             {"target", num(rep.witness_target)}};
  if (!rep.note.empty()) out.record["note"] = rep.note;
  out.status = rep.verdict == "inconclusive" ? "inconclusive" : "pass";
  return out;
}

inline SuiteOutput run_suite(const Scenario& s, const Certificates& c, const std::string& name) {
  try {
    if (name == "chainrule") return run_chainrule(s, c);
    if (name == "caccioppoli_local") return run_caccioppoli(s, c, false);
    if (name == "caccioppoli_global") return run_caccioppoli(s, c, true);
    if (name == "theorem41") return run_theorem41(s, c);
    return run_lemma(s, c, name);
  } catch (const std::exception& e) {
    SuiteOutput out{name, "error", json::object(), {}};
    out.record["error"] = e.what();
    return out;
  }
}

}  // namespace detail

struct RunReport {
  json report;
  std::string csv;
  int exit_code = 0;
};

/// Suites to execute: everything configured for verify; the grid suites (or
/// theorem41 alone) for sweep.
inline std::vector<std::string> selected_suites(const Scenario& s, bool sweep) {
  if (!sweep) return s.suites;
  std::vector<std::string> out;
  for (const std::string& n : s.suites)
    if (n == "lemma42" || n == "lemma43" || n == "lemma45" || n == "theorem41") out.push_back(n);
  if (out.empty() || std::find(out.begin(), out.end(), "theorem41") == out.end()) {
    if (!s.F || !s.t || !s.cutoff || !s.l_grid) throw SchemaError("sweep requires 'F', 't', 'cutoff' and an l grid");
    out.push_back("theorem41");
  }
  return out;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char ch : s) {
    if (ch == '"') o += '"';
    o += ch;
  }
  return o + "\"";
}

inline std::string render_csv(const std::string& id, const std::vector<SuiteOutput>& outs) {
  std::ostringstream o;
  o << "scenario,suite,kind";
  for (const auto& c : csv_columns()) o << "," << c;
  o << ",ddi_precheck,converged,pass\n";
  char buf[40];
  for (const SuiteOutput& so : outs)
    for (const CsvRow& r : so.rows) {
      o << csv_escape(id) << "," << r.suite << "," << csv_escape(r.kind);
      for (const auto& c : csv_columns()) {
        o << ",";
        if (auto it = r.values.find(c); it != r.values.end()) {
          std::snprintf(buf, sizeof buf, "%.17g", it->second);
          o << buf;
        }
      }
      o << "," << r.ddi_precheck << "," << (r.converged ? 1 : 0) << "," << (r.pass ? 1 : 0) << "\n";
    }
  return o.str();
}

/// Runs the selected suites, at most `jobs` at a time; assembly keeps the
/// configured suite order so the report does not depend on scheduling.
inline RunReport run(const Scenario& s, const RunOptions& opt) {
  const Certificates cert = certify(s);
  const std::vector<std::string> names = selected_suites(s, opt.sweep);
  std::vector<SuiteOutput> outs(names.size());
  const std::size_t jobs = std::max(1, opt.jobs);
  for (std::size_t i = 0; i < names.size(); i += jobs) {
    std::vector<std::future<SuiteOutput>> fs;
    for (std::size_t j = i; j < std::min(names.size(), i + jobs); ++j)
      fs.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async,
                              [&, j] { return detail::run_suite(s, cert, names[j]); }));
    for (std::size_t j = 0; j < fs.size(); ++j) outs[i + j] = fs[j].get();
  }
  RunReport rr;
  json suites = json::array();
  bool failed = false;
  for (const SuiteOutput& so : outs) {
    json rec = so.record;
    rec["name"] = so.name;
    rec["status"] = so.status;
    suites.push_back(rec);
    failed = failed || so.status == "fail" || so.status == "error";
  }
  rr.exit_code = failed ? 2 : 0;
  json& r = rr.report;
  r["tool"] = "dunkl-verify";
  r["version"] = kToolVersion;
  r["command"] = opt.sweep ? "sweep" : "verify";
  r["scenario"] = s.id;
  r["config_hash"] = hex64(fnv1a(s.config.dump()));
  r["environment"] = {{"compiler", __VERSION__},
                      {"cplusplus", long(__cplusplus)},
                      {"seed", battery_seed()}};
  r["certificates"] = certificates_json(cert);
  r["suites"] = suites;
  r["status"] = failed ? "fail" : "pass";
  r["exit_code"] = rr.exit_code;
  r["wall_time_s"] = 0.0;
  rr.csv = render_csv(s.id, outs);
  return rr;
}

/// Structural check of a report document; returns the first problem found.
inline std::optional<std::string> validate_report(const json& r) {
  auto bad = [](const std::string& m) { return std::optional<std::string>(m); };
  if (!r.is_object()) return bad("report must be an object");
  for (const char* k : {"tool", "version", "command", "scenario", "config_hash", "status"})
    if (!r.contains(k) || !r.at(k).is_string()) return bad(std::string("missing string '") + k + "'");
  for (const char* k : {"environment", "certificates"})
    if (!r.contains(k) || !r.at(k).is_object()) return bad(std::string("missing object '") + k + "'");
  if (!r.contains("exit_code") || !r.at("exit_code").is_number_integer()) return bad("missing integer 'exit_code'");
  const int ec = r.at("exit_code").get<int>();
  if (ec != 0 && ec != 2) return bad("exit_code must be 0 or 2");
  if (!r.contains("wall_time_s") || !r.at("wall_time_s").is_number()) return bad("missing number 'wall_time_s'");
  if (r.at("config_hash").get<std::string>().size() != 16) return bad("config_hash must be 16 hex digits");
  if (!r.contains("suites") || !r.at("suites").is_array()) return bad("missing array 'suites'");
  static const std::set<std::string> statuses{"pass", "fail", "inconclusive", "error"};
  for (const json& s : r.at("suites")) {
    if (!s.is_object() || !s.contains("name") || !s.contains("status")) return bad("suite record needs name and status");
    if (!statuses.count(s.at("status").get<std::string>())) return bad("unknown suite status");
    if (s.contains("rows")) {
      if (!s.at("rows").is_array()) return bad("suite rows must be an array");
      for (const json& row : s.at("rows")) {
        if (!row.contains("converged") || !row.at("converged").is_boolean())
          return bad("row in '" + s.at("name").get<std::string>() + "' lacks a converged flag");
        for (const auto& [k, v] : row.items())
          if (!(v.is_number() || v.is_null() || v.is_boolean() || v.is_string()))
            return bad("row field '" + k + "' has an unexpected type");
      }
    }
  }
  return std::nullopt;
}

}  // namespace dunkl
