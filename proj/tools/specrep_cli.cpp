#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "specrep/graded_algebra.hpp"
#include "specrep/un1.hpp"
#include "specrep/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"specrep: graded nilpotent groups, special representations, and Poisson current-group models"};
  app.require_subcommand(1);

  std::string config_path, algebra_path, matrix_path, suite, out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false, out_set = false;

  auto* list = app.add_subcommand("list-suites", "list the available verification suites");

  auto* validate = app.add_subcommand("validate", "validate a config file or an algebra definition");
  validate->add_option("--config", config_path, "suite config (JSON)");
  validate->add_option("--algebra", algebra_path, "algebra definition (JSON)");
  validate->add_option("--matrix", matrix_path, "U(n,1) matrix sample (JSON)");

  auto* run = app.add_subcommand("run", "run a verification suite and write reports");
  run->add_option("--config", config_path, "suite config (JSON)");
  run->add_option("--suite", suite, "suite name (overrides the config)");
  run->add_option("--seed", seed, "seed (overrides the config)")->each([&](const std::string&) { seed_set = true; });
  run->add_option("--out-dir", out_dir, "report directory (overrides the config)")
      ->each([&](const std::string&) { out_set = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& name : specrep::suite_names()) std::printf("%s\n", name.c_str());
      return 0;
    }

    if (validate->parsed()) {
      int status = 0;
      if (!algebra_path.empty()) {
        auto alg = specrep::GradedAlgebra::from_json_file(algebra_path);
        auto diag = alg->validate();
        if (diag.empty()) {
          std::printf("algebra ok: class %d, dim %d\n", alg->class_n(), alg->dim());
        } else {
          for (const auto& v : diag) std::printf("violation: %s\n", v.describe().c_str());
          status = 1;
        }
      }
      if (!matrix_path.empty()) {
        try {
          auto m = specrep::un_from_json_file(matrix_path);
          std::printf("matrix ok: n = %d, J-defect %.3e\n", m.n(), m.j_defect());
        } catch (const std::exception& e) {
          std::printf("matrix error: %s\n", e.what());
          status = 1;
        }
      }
      if (!config_path.empty()) {
        auto cfg = specrep::SuiteConfig::from_json_file(config_path);
        const std::string err = cfg.validate();
        if (err.empty()) {
          std::printf("config ok: suite %s\n", cfg.suite.c_str());
        } else {
          std::printf("config error: %s\n", err.c_str());
          status = 1;
        }
      }
      if (algebra_path.empty() && config_path.empty() && matrix_path.empty()) {
        std::fprintf(stderr, "validate: provide --config, --algebra, and/or --matrix\n");
        status = 2;
      }
      return status;
    }

    // run
    specrep::SuiteConfig cfg;
    if (!config_path.empty()) cfg = specrep::SuiteConfig::from_json_file(config_path);
    if (!suite.empty()) cfg.suite = suite;
    if (seed_set) cfg.seed = seed;
    if (out_set) cfg.out_dir = out_dir;
    const std::string err = cfg.validate();
    if (!err.empty()) {
      std::fprintf(stderr, "config error: %s\n", err.c_str());
      return 2;
    }
    auto rep = specrep::run_suite(cfg);
    for (const auto& path : specrep::write_report(rep, cfg)) std::printf("wrote %s\n", path.c_str());
    for (const auto& c : rep.checks)
      std::printf("[%s] %s (measured %.3e, tolerance %.3e)\n", c.pass ? "pass" : "FAIL",
                  c.id.c_str(), c.measured, c.tolerance);
    std::printf("%s: %s\n", rep.suite.c_str(), rep.pass ? "PASS" : "FAIL");
    return rep.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
