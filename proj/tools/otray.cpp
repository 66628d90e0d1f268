// otray: run the verification suite on a scenario file.

#include "otray/errors.hpp"
#include "otray/scenario.hpp"
#include "otray/suite.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

namespace {

void print_summary(const otray::Report& r) {
  for (const auto& row : r.rows) {
    std::printf("%-17s %-4s %s = %.6g (tol %.3g)\n", row.check.c_str(), row.pass ? "PASS" : "FAIL",
                row.metric.c_str(), row.value, row.tolerance);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"otray: optimal-transport ray decompositions on round spheres"};
  app.require_subcommand(1);

  std::string scenario_path, checks = "all", out_dir, format = "csv";
  std::optional<std::uint64_t> seed;
  otray::SuiteOptions opt;
  bool timing = false;

  auto* run = app.add_subcommand("run", "run checks on a scenario and write a report");
  run->add_option("--scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--checks", checks, "comma separated check ids, or 'all'")->capture_default_str();
  run->add_option("--samples", opt.samples, "Monte Carlo samples")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "RNG seed (defaults to the scenario's seed)");
  run->add_option("--grid", opt.grid, "t-grid nodes for densities")->capture_default_str()->check(CLI::Range(3, 100000));
  run->add_option("--tol-scale", opt.tol_scale, "multiplier on every tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--format", format, "csv, json or plot-tables")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json", "plot-tables"}));
  run->add_flag("--timing", timing, "record wall time per check (breaks byte-identical output)");

  auto* validate = app.add_subcommand("validate", "parse and validate a scenario file");
  validate->add_option("--scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);

  auto* list = app.add_subcommand("list-checks", "list registered checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& id : otray::registered_checks())
        std::printf("%-17s %s\n", id.c_str(), otray::describe_check(id).c_str());
      return 0;
    }
    const otray::Scenario scn = otray::load_scenario(scenario_path);
    if (validate->parsed()) {
      std::printf("%s: ok (%s, n=%d, K=%g)\n", scn.name.c_str(), otray::to_string(scn.kind).c_str(),
                  scn.manifold.n, scn.manifold.K);
      return 0;
    }
    opt.seed = seed.value_or(scn.seed);
    opt.timing = timing;
    const auto ids = otray::parse_check_list(checks);
    const otray::Report report = otray::run_suite(scn, ids, opt);
    for (const auto& path : otray::emit_report(report, otray::parse_format(format), out_dir))
      std::fprintf(stderr, "wrote %s\n", path.c_str());
    print_summary(report);
    return report.all_pass() ? 0 : 1;
  } catch (const otray::ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const otray::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const otray::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
