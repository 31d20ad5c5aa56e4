// dunkl-verify: run scenario files and write report.json / report.csv.
// Exit codes: 0 all margins hold, 2 hard failure, 3 schema or parse error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "dunkl/scenario.hpp"

namespace {

struct Flags {
  std::string scenario;
  std::string out = ".";
  std::optional<double> tol;
  std::optional<int> quad_order;
  int jobs = 1;
  std::optional<std::string> l_grid;
};

dunkl::Scenario load(const Flags& f) {
  dunkl::json cfg = dunkl::read_config(f.scenario);
  if (!cfg.is_object()) throw dunkl::SchemaError("scenario file must hold a JSON object");
  if (f.tol) cfg["tolerances"]["margin"] = *f.tol;
  if (f.quad_order) cfg["quad"]["order"] = *f.quad_order;
  if (f.l_grid) cfg["l_grid"] = *f.l_grid;
  return dunkl::build_scenario(cfg);
}

int run(const Flags& f, bool sweep) {
  const auto t0 = std::chrono::steady_clock::now();
  const dunkl::Scenario s = load(f);
  dunkl::RunReport rr = dunkl::run(s, {f.jobs, sweep});
  rr.report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::filesystem::create_directories(f.out);
  const auto dir = std::filesystem::path(f.out);
  std::ofstream(dir / "report.json") << rr.report.dump(2) << "\n";
  std::ofstream(dir / "report.csv") << rr.csv;
  for (const auto& suite : rr.report["suites"]) {
    std::cout << suite["name"].get<std::string>() << ": " << suite["status"].get<std::string>();
    if (suite.contains("verdict")) std::cout << " (" << suite["verdict"].get<std::string>() << ")";
    if (suite.contains("error")) std::cout << " [" << suite["error"].get<std::string>() << "]";
    std::cout << "\n";
  }
  std::cout << "report written to " << (dir / "report.json").string() << "\n";
  return rr.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Dunkl-Orlicz Caccioppoli and mass estimates"};
  app.require_subcommand(1);
  Flags f;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--scenario", f.scenario, "scenario JSON file")->required();
  };
  auto add_run = [&](CLI::App* c) {
    add_common(c);
    c->add_option("--out", f.out, "output directory");
    c->add_option("--tol", f.tol, "margin tolerance (relative to scale)");
    c->add_option("--quad-order", f.quad_order, "Gauss-Legendre points per cell");
    c->add_option("--jobs", f.jobs, "suites run concurrently")->check(CLI::PositiveNumber);
    c->add_option("--l", f.l_grid, "radius grid start:stop:logN");
  };
  CLI::App* verify = app.add_subcommand("verify", "run every configured suite");
  CLI::App* sweep = app.add_subcommand("sweep", "run the radius-grid suites");
  CLI::App* expl = app.add_subcommand("explain", "print the certificate summary");
  add_run(verify);
  add_run(sweep);
  add_common(expl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (*expl) {
      const dunkl::Scenario s = load(f);
      std::cout << dunkl::explain(s, dunkl::certify(s));
      return 0;
    }
    return run(f, sweep->parsed());
  } catch (const dunkl::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const dunkl::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
