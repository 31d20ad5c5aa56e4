#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "dunkl/scenario.hpp"

using namespace dunkl;

namespace {

json golden(const std::string& name) {
  return read_config(std::string(DUNKL_SOURCE_DIR) + "/golden/" + name + ".json");
}

json minimal() {
  return json::parse(R"J({
    "id": "m",
    "root_system": {"name": "rank1", "dim": 1, "k": [1.0]},
    "B": "s", "Phi": "s^2", "g": "s", "psi": "s^(-1.5)",
    "u": "clampzero(1 - 0.2*r^1.5)", "b": "0.1",
    "suites": ["chainrule"]
  })J");
}

void expect_schema_error(const json& cfg, const std::string& needle) {
  try {
    build_scenario(cfg);
    ADD_FAILURE() << "no error for " << needle;
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(Grid, ParseLogAndLinear) {
  const GridSpec g = parse_grid("1:100:log16");
  EXPECT_TRUE(g.log);
  const auto v = g.values();
  ASSERT_EQ(v.size(), 16u);
  EXPECT_EQ(v.front(), 1.0);
  EXPECT_EQ(v.back(), 100.0);
  EXPECT_NEAR(v[1] / v[0], std::pow(100.0, 1.0 / 15), 1e-12);
  const auto w = parse_grid("2:4:3").values();
  EXPECT_EQ(w, (std::vector<double>{2.0, 3.0, 4.0}));
  for (const char* bad : {"1:100", "0:1:log4", "5:1:3", "1:2:logx", "1:2:3x", "a:b:3"})
    EXPECT_THROW(parse_grid(bad), SchemaError) << bad;
}

TEST(Schema, MinimalBuilds) {
  const Scenario s = build_scenario(minimal());
  EXPECT_EQ(s.id, "m");
  EXPECT_EQ(s.quad_order, 48);
  EXPECT_EQ(s.suites, std::vector<std::string>{"chainrule"});
  EXPECT_EQ(s.tol.margin, 1e-6);
  EXPECT_EQ(s.tol.ddi, 1e-9);
}

TEST(Schema, Errors) {
  json j = minimal();
  j["colour"] = 1;
  expect_schema_error(j, "colour");
  j = minimal();
  j["Lambda"] = "s^3";
  expect_schema_error(j, "exactly one of 'B' and 'Lambda'");
  j = minimal();
  j["suites"] = {"caccioppoli_local"};
  expect_schema_error(j, "requires 'domain.radius'");
  j = minimal();
  j["suites"] = {"chainrule", "chainrule"};
  expect_schema_error(j, "listed twice");
  j = minimal();
  j["suites"] = {"nope"};
  expect_schema_error(j, "unknown suite");
  j = minimal();
  j["root_system"]["name"] = "E8";
  expect_schema_error(j, "root_system");
  j = minimal();
  j["t"] = 1.5;
  expect_schema_error(j, "t must lie in (0, 1)");
  j = minimal();
  j["suites"] = {"theorem41"};
  expect_schema_error(j, "requires 'F'");
  j = minimal();
  j["deltas"] = {0.7};
  expect_schema_error(j, "deltas");
  j = minimal();
  j.erase("suites");
  expect_schema_error(j, "suites");
}

TEST(Schema, ExpressionErrorsNameTheKey) {
  try {
    build_scenario(golden("bad_syntax"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("in 'u'"), std::string::npos) << e.what();
    EXPECT_EQ(e.position(), 20u);
  }
  json j = minimal();
  j["u"] = "x2";
  EXPECT_THROW(build_scenario(j), Error);
}

TEST(Schema, BadJsonIsParseError) {
  const std::string p = ::testing::TempDir() + "broken.json";
  {
    std::ofstream f(p);
    f << "{\"id\": ";
  }
  EXPECT_THROW(read_config(p), ParseError);
  EXPECT_THROW(read_config(::testing::TempDir() + "missing-file.json"), Error);
}

TEST(Certify, GoldenConstants) {
  const Scenario s = build_scenario(golden("rank1_power"));
  const Certificates c = certify(s);
  ASSERT_TRUE(c.pair);
  EXPECT_NEAR(c.pair->C_psi, 1.5, 1e-12);
  EXPECT_NEAR(c.pair->beta, 0.5, 1e-12);
  EXPECT_TRUE(c.u_invariant);
  EXPECT_EQ(c.M_Lambda, 1.0);
  EXPECT_NEAR(c.u_sup, 1.0, 1e-12);
  const std::string text = explain(s, c);
  EXPECT_NE(text.find("C_psi = 1.5"), std::string::npos) << text;
  EXPECT_NE(text.find("beta = 0.5"), std::string::npos) << text;

  const Scenario k0 = build_scenario(golden("classical_k0"));
  const std::string t0 = explain(k0, certify(k0));
  EXPECT_NE(t0.find("gamma = 0"), std::string::npos);
  EXPECT_NE(t0.find("w_k ≡ 1"), std::string::npos);
}

TEST(Run, ReportValidatesAndRoundTrips) {
  const Scenario s = build_scenario(golden("rank1_power"));
  const RunReport rr = run(s, {});
  EXPECT_EQ(rr.exit_code, 0);
  EXPECT_EQ(validate_report(rr.report), std::nullopt);
  const json back = json::parse(rr.report.dump(2));
  EXPECT_EQ(back, rr.report);
  EXPECT_EQ(validate_report(back), std::nullopt);
  EXPECT_EQ(rr.report.at("status"), "pass");
  EXPECT_EQ(rr.report.at("suites").size(), 3u);
  for (const json& su : rr.report.at("suites")) EXPECT_EQ(su.at("status"), "pass") << su.at("name");

  json broken = rr.report;
  broken.erase("config_hash");
  EXPECT_TRUE(validate_report(broken));
  broken = rr.report;
  broken["exit_code"] = 7;
  EXPECT_TRUE(validate_report(broken));
  broken = rr.report;
  broken["suites"][0]["status"] = "maybe";
  EXPECT_TRUE(validate_report(broken));
}

TEST(Run, CsvShape) {
  const Scenario s = build_scenario(golden("rank1_power"));
  const RunReport rr = run(s, {});
  std::istringstream in(rr.csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("scenario,suite,kind,l,delta,lhs,rhs,margin,C_k,", 0), 0u) << header;
  const auto cols = std::count(header.begin(), header.end(), ',');
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), cols) << line;
    EXPECT_EQ(line.rfind("rank1_power,", 0), 0u);
  }
  EXPECT_GE(rows, 5);
}

TEST(Run, ConfigHashTracksOverrides) {
  json a = golden("rank1_power");
  json b = a;
  b["quad"]["order"] = 32;
  const Scenario sa = build_scenario(a), sb = build_scenario(b);
  EXPECT_NE(hex64(fnv1a(sa.config.dump())), hex64(fnv1a(sb.config.dump())));
  EXPECT_EQ(hex64(fnv1a(sa.config.dump())).size(), 16u);
}

TEST(Run, JobsDoNotChangeResults) {
  const Scenario s = build_scenario(golden("power_nonexist"));
  const RunReport a = run(s, {1, false});
  const RunReport b = run(s, {4, false});
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_EQ(a.csv, b.csv);
}

TEST(Run, SweepAddsVerdictSuite) {
  json j = golden("rank1_power");
  EXPECT_THROW(selected_suites(build_scenario(j), true), SchemaError);
  const Scenario s = build_scenario(golden("power_nonexist"));
  EXPECT_EQ(selected_suites(s, true).back(), "theorem41");
  const RunReport rr = run(s, {1, true});
  ASSERT_EQ(rr.report.at("command"), "sweep");
  bool found = false;
  for (const json& su : rr.report.at("suites"))
    if (su.at("name") == "theorem41") {
      found = true;
      EXPECT_EQ(su.at("verdict"), "nonexistence-indicated");
    }
  EXPECT_TRUE(found);
}

TEST(Run, FailingDDIMarksInconclusive) {
  json j = golden("rank1_power");
  j["b"] = "1000";
  j["suites"] = {"caccioppoli_local"};
  const RunReport rr = run(build_scenario(j), {});
  EXPECT_EQ(rr.report.at("suites")[0].at("status"), "inconclusive");
  EXPECT_EQ(rr.exit_code, 0);
}
