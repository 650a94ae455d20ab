#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "clf/harness.hpp"
#include "clf/types.hpp"

namespace {

std::string join_list(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out + "]";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification harness for the Cauchy-Leray-Fantappie area integral"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run verification probes");
  std::vector<std::string> probes;
  std::vector<std::string> domains;
  std::vector<std::string> p_values;
  std::string config_path, res, seed, l, eta, eps, out, jobs, cache_dir;
  verify->add_option("probes", probes, "probe names or 'all'");
  verify->add_option("--config", config_path, "flat key = value config file");
  verify->add_option("--domain", domains, "ball | ellipsoid(a,b) | perturbed_ball(delta)");
  verify->add_option("--res", res, "finest boundary resolution (n_theta)");
  verify->add_option("--seed", seed);
  verify->add_option("--l", l, "smoothing order, 1 or 2");
  verify->add_option("--p", p_values, "exponents for area-lp");
  verify->add_option("--eta", eta);
  verify->add_option("--eps", eps);
  verify->add_option("--out", out, "output directory");
  verify->add_option("--jobs", jobs, "OpenMP threads (0: default)");
  verify->add_option("--cache-dir", cache_dir, "boundary grid cache");

  auto* report = app.add_subcommand("report", "re-render report JSON as tables");
  std::string report_dir;
  std::string format = "markdown";
  report->add_option("dir", report_dir, "directory of report JSON files")->required();
  report->add_option("--format", format)->check(CLI::IsMember({"markdown", "csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*report) {
      const auto reports = clf::load_reports(report_dir);
      std::cout << (format == "csv" ? clf::summary_csv(reports) : clf::summary_markdown(reports));
      return 0;
    }

    clf::RunConfig cfg;
    if (!config_path.empty()) cfg = clf::parse_config_file(config_path, cfg);
    // command line overrides the file
    if (!probes.empty()) clf::apply_setting(cfg, "probes", join_list(probes));
    if (!domains.empty()) {
      std::vector<std::string> quoted;
      for (const auto& d : domains) quoted.push_back("\"" + d + "\"");
      clf::apply_setting(cfg, "domains", join_list(quoted));
    }
    if (!p_values.empty()) clf::apply_setting(cfg, "p", join_list(p_values));
    const std::pair<const char*, std::string*> scalars[] = {
        {"res", &res}, {"seed", &seed}, {"l", &l},     {"eta", &eta},
        {"eps", &eps}, {"jobs", &jobs}, {"out", &out}, {"cache_dir", &cache_dir}};
    for (const auto& [key, value] : scalars)
      if (!value->empty()) clf::apply_setting(cfg, key, "\"" + *value + "\"");

    const clf::RunResult result = clf::run(cfg);
    std::cout << clf::summary_markdown(result.reports);
    if (!cfg.out_dir.empty()) std::cout << "reports written to " << cfg.out_dir << "\n";
    return result.all_pass ? 0 : 1;
  } catch (const clf::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const clf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
