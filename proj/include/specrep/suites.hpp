#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace specrep {

// One verification check inside a suite. Tolerances travel with the
// record so reports never hard-code them inline.
struct CheckResult {
  std::string id;
  std::string description;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct SuiteConfig {
  std::string suite = "algebra";
  std::uint64_t seed = 20250808;
  // lie_core selection: "abelian:d", "heisenberg:n", "free3", or a file.
  std::string algebra = "heisenberg:2";
  std::string algebra_file;
  // grid / measure
  double r_min = std::exp(-6.0);
  double r_max = std::exp(3.0);
  int nodes = 96;
  std::string u_spec = "quadratic";
  // Fock
  int heis_n = 2;
  int fock_degree = 8;
  int fock_degree_oracle = 12;
  // Gaussian vector diagonals per level for the overlap sweep (optional).
  std::vector<std::vector<double>> mu;
  // Monte Carlo
  long samples = 100000;
  long mc_overlap_samples = 200000;
  // Poisson windows
  double window_lo = std::exp(-4.0);
  double window_hi = 1.0;
  double rn_window_hi = std::exp(1.5);
  std::string convention = "charfunc";
  // output
  std::string out_dir = "reports";

  static SuiteConfig from_json_file(const std::string& path);
  static SuiteConfig from_json_text(const std::string& text);
  std::string validate() const;  // empty when well-formed
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass = true;
  std::string checks_csv;
  std::string data_csv;  // suite-specific sweep/table rows
  std::string json;      // summary

  void add(CheckResult c) {
    pass = pass && c.pass;
    checks.push_back(std::move(c));
  }
};

std::vector<std::string> suite_names();

SuiteReport run_suite(const SuiteConfig& cfg);

SuiteReport suite_algebra(const SuiteConfig& cfg);
SuiteReport suite_overlap(const SuiteConfig& cfg);
SuiteReport suite_cocycle(const SuiteConfig& cfg);
SuiteReport suite_heisenberg(const SuiteConfig& cfg);
SuiteReport suite_projective(const SuiteConfig& cfg);
SuiteReport suite_poisson(const SuiteConfig& cfg);

// Serializes checks into the report strings (sorted by check id) and the
// JSON summary; called by run_suite.
void finalize_report(SuiteReport& rep, const SuiteConfig& cfg);

// Writes checks/data/summary files into cfg.out_dir; returns the paths.
std::vector<std::string> write_report(const SuiteReport& rep, const SuiteConfig& cfg);

}  // namespace specrep
