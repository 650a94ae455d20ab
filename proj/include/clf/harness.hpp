#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clf/domain.hpp"
#include "clf/report.hpp"
#include "clf/surface.hpp"

namespace clf {

/// Probe names accepted on the command line, in run order.
const std::vector<std::string>& probe_names();

struct RunConfig {
  std::vector<std::string> domains{"ball"};  // ball, ellipsoid(2,1), perturbed_ball(0.05)
  double eta = 0.1;
  double eps = 0.1;
  double eps0 = 0.2;
  int l = 1;
  std::vector<double> p_list{2.0, 4.0};
  double delta_min = 1e-3;
  double separation = 8.0;
  std::vector<SurfaceResolution> ladder{{16, 53}, {32, 107}, {64, 213}};  // same as res = 64
  std::uint64_t seed = 1;
  std::vector<std::string> probes;
  std::string out_dir = "clf_out";
  std::string cache_dir;
  int jobs = 0;  // 0: OpenMP default

  // sample sizes
  int reproduce_points = 20;
  int stokes_samples = 20;
  int geometry_samples = 2000;
  int doubling_centers = 8;
  int kernel_samples = 200;
  int holder_samples = 300;
  int t1_points = 12;
  int t1_pairs = 100;
  int weak_centers = 2;
  int family_size = 30;
  int design_points = 48;
  int bmo_centers = 6;
};

/// Flat `key = value` file: numbers, quoted strings, booleans and [a, b]
/// arrays; `#` starts a comment. Unknown keys are ConfigError.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig parse_config_file(const std::string& path, RunConfig base = {});
/// One key/value pair in config syntax (command-line overrides).
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
/// Range checks: eta, eps < eps0 <= 0.2, l in {1, 2}, p in (1, inf), nonempty
/// probe list. Throws ConfigError.
void validate(const RunConfig& cfg);
/// Canonical text of the configuration (hashed into every report).
std::string canonical_config(const RunConfig& cfg);

DefiningFunction parse_domain(const std::string& spec);

/// Reports of one probe on one domain.
std::vector<VerificationReport> run_probe(const std::string& probe, const DefiningFunction& domain,
                                          const RunConfig& cfg);

struct RunResult {
  std::vector<VerificationReport> reports;
  bool all_pass = false;
};
/// Runs every selected probe on every domain, writes one JSON file per report
/// and summary.csv into cfg.out_dir (skipped when out_dir is empty).
RunResult run(const RunConfig& cfg);

std::string summary_csv(const std::vector<VerificationReport>& reports);
std::string summary_markdown(const std::vector<VerificationReport>& reports);
/// Reads every report JSON in a directory (sorted by file name).
std::vector<VerificationReport> load_reports(const std::string& dir);

/// Report JSON without wall time, for run-to-run comparison.
json comparable(const VerificationReport& report);

}  // namespace clf
