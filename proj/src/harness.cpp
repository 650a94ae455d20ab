#include "clf/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "clf/area_integral.hpp"
#include "clf/clf_operator.hpp"
#include "clf/cz_estimates.hpp"
#include "clf/geometry_probes.hpp"
#include "clf/normal_form.hpp"
#include "clf/regions.hpp"

namespace clf {

namespace fs = std::filesystem;

const std::vector<std::string>& probe_names() {
  static const std::vector<std::string> names{
      "reproduce", "measures", "quasimetric", "regions", "normal-form", "kernel-estimates",
      "t1",        "weak-bound", "area-lp",   "area-bmo"};
  return names;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  const std::string t = trim(s);
  if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') && t.back() == t.front())
    return t.substr(1, t.size() - 2);
  return t;
}

// Top-level comma split of "[a, b, c]"; a bare scalar gives one element.
std::vector<std::string> split_list(const std::string& value) {
  std::string v = trim(value);
  if (v.empty() || v.front() != '[') return {v};
  if (v.back() != ']') throw ConfigError("unterminated array: " + value);
  v = v.substr(1, v.size() - 2);
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  bool quoted = false;
  for (char c : v) {
    if (c == '"') quoted = !quoted;
    if (!quoted && (c == '[' || c == '(')) ++depth;
    if (!quoted && (c == ']' || c == ')')) --depth;
    if (c == ',' && depth == 0 && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(unquote(s), &used);
    if (used != unquote(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + s + "'");
  }
}

int to_int(const std::string& key, const std::string& s) {
  const double v = to_double(key, s);
  if (v != std::floor(v)) throw ConfigError("key '" + key + "' expects an integer");
  return static_cast<int>(v);
}

std::vector<SurfaceResolution> ladder_for(int res) {
  if (res < 8) throw ConfigError("res must be at least 8");
  auto rung = [](int nt) { return SurfaceResolution{nt, static_cast<int>(std::lround(nt * 10.0 / 3.0))}; };
  return {rung(res / 4), rung(res / 2), rung(res)};
}

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.') {
      out += c;
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key_in, const std::string& value) {
  const std::string key = trim(key_in);
  const std::vector<std::string> items = split_list(value);
  if (key == "domain" || key == "domains") {
    cfg.domains.clear();
    for (const auto& it : items) cfg.domains.push_back(unquote(it));
  } else if (key == "probe" || key == "probes") {
    cfg.probes.clear();
    for (const auto& it : items)
      if (!unquote(it).empty()) cfg.probes.push_back(unquote(it));
  } else if (key == "eta") {
    cfg.eta = to_double(key, value);
  } else if (key == "eps") {
    cfg.eps = to_double(key, value);
  } else if (key == "eps0") {
    cfg.eps0 = to_double(key, value);
  } else if (key == "l") {
    cfg.l = to_int(key, value);
  } else if (key == "p") {
    cfg.p_list.clear();
    for (const auto& it : items) cfg.p_list.push_back(to_double(key, it));
  } else if (key == "delta_min") {
    cfg.delta_min = to_double(key, value);
  } else if (key == "separation") {
    cfg.separation = to_double(key, value);
  } else if (key == "res") {
    cfg.ladder = ladder_for(to_int(key, value));
  } else if (key == "ladder") {
    cfg.ladder.clear();
    for (const auto& it : items) {
      const auto pair = split_list(it);
      if (pair.size() != 2) throw ConfigError("ladder entries are [n_theta, n_phi]");
      cfg.ladder.push_back({to_int(key, pair[0]), to_int(key, pair[1])});
    }
  } else if (key == "seed") {
    const double v = to_double(key, value);
    if (v < 0 || v != std::floor(v)) throw ConfigError("seed must be a non-negative integer");
    cfg.seed = static_cast<std::uint64_t>(v);
  } else if (key == "out" || key == "out_dir") {
    cfg.out_dir = unquote(value);
  } else if (key == "cache_dir") {
    cfg.cache_dir = unquote(value);
  } else if (key == "jobs") {
    cfg.jobs = to_int(key, value);
  } else {
    static const std::map<std::string, int RunConfig::*> counts{
        {"reproduce_points", &RunConfig::reproduce_points},
        {"stokes_samples", &RunConfig::stokes_samples},
        {"geometry_samples", &RunConfig::geometry_samples},
        {"doubling_centers", &RunConfig::doubling_centers},
        {"kernel_samples", &RunConfig::kernel_samples},
        {"holder_samples", &RunConfig::holder_samples},
        {"t1_points", &RunConfig::t1_points},
        {"t1_pairs", &RunConfig::t1_pairs},
        {"weak_centers", &RunConfig::weak_centers},
        {"family_size", &RunConfig::family_size},
        {"design_points", &RunConfig::design_points},
        {"bmo_centers", &RunConfig::bmo_centers}};
    const auto it = counts.find(key);
    if (it == counts.end()) throw ConfigError("unknown configuration key '" + key + "'");
    cfg.*(it->second) = to_int(key, value);
  }
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos)
      throw ConfigError("tables are not supported (line " + std::to_string(lineno) + ")");
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value on line " + std::to_string(lineno));
    apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

void validate(const RunConfig& cfg) {
  if (cfg.probes.empty()) throw ConfigError("empty probe list");
  for (const auto& p : cfg.probes)
    if (p != "all" && std::find(probe_names().begin(), probe_names().end(), p) == probe_names().end())
      throw ConfigError("unknown probe '" + p + "'");
  if (cfg.domains.empty()) throw ConfigError("no domain selected");
  for (const auto& d : cfg.domains) parse_domain(d);
  if (!(cfg.eps0 > 0.0 && cfg.eps0 <= 0.2)) throw ConfigError("eps0 must lie in (0, 0.2]");
  if (!(cfg.eta > 0.0 && cfg.eta < cfg.eps0)) throw ConfigError("eta must lie in (0, eps0)");
  if (!(cfg.eps > 0.0 && cfg.eps < cfg.eps0)) throw ConfigError("eps must lie in (0, eps0)");
  if (cfg.l != 1 && cfg.l != 2) throw ConfigError("l must be 1 or 2");
  if (cfg.p_list.empty()) throw ConfigError("empty p list");
  for (double p : cfg.p_list)
    if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("p must lie in (1, inf)");
  if (!(cfg.delta_min > 0.0 && cfg.delta_min < 1.0)) throw ConfigError("delta_min must lie in (0, 1)");
  if (!(cfg.separation > 1.0)) throw ConfigError("separation must exceed 1");
  if (cfg.ladder.empty()) throw ConfigError("empty resolution ladder");
  for (const auto& r : cfg.ladder)
    if (r.n_theta < 2 || r.n_phi < 4) throw ConfigError("resolution rung too small");
  if (cfg.jobs < 0) throw ConfigError("jobs must be non-negative");
  const int counts[] = {cfg.reproduce_points, cfg.stokes_samples, cfg.geometry_samples,
                        cfg.doubling_centers, cfg.kernel_samples, cfg.holder_samples,
                        cfg.t1_points,        cfg.t1_pairs,       cfg.weak_centers,
                        cfg.family_size,      cfg.design_points,  cfg.bmo_centers};
  for (int c : counts)
    if (c < 1) throw ConfigError("sample counts must be positive");
}

std::string canonical_config(const RunConfig& cfg) {
  json j;
  j["domains"] = cfg.domains;
  j["eta"] = cfg.eta;
  j["eps"] = cfg.eps;
  j["eps0"] = cfg.eps0;
  j["l"] = cfg.l;
  j["p"] = cfg.p_list;
  j["delta_min"] = cfg.delta_min;
  j["separation"] = cfg.separation;
  json ladder = json::array();
  for (const auto& r : cfg.ladder) ladder.push_back({r.n_theta, r.n_phi});
  j["ladder"] = ladder;
  j["seed"] = cfg.seed;
  j["probes"] = cfg.probes;
  j["samples"] = {cfg.reproduce_points, cfg.stokes_samples, cfg.geometry_samples,
                  cfg.doubling_centers, cfg.kernel_samples, cfg.holder_samples,
                  cfg.t1_points,        cfg.t1_pairs,       cfg.weak_centers,
                  cfg.family_size,      cfg.design_points,  cfg.bmo_centers};
  return j.dump();
}

DefiningFunction parse_domain(const std::string& spec_in) {
  const std::string spec = trim(spec_in);
  const auto open = spec.find('(');
  const std::string name = trim(spec.substr(0, open));
  std::vector<double> args;
  if (open != std::string::npos) {
    if (spec.back() != ')') throw ConfigError("malformed domain '" + spec + "'");
    for (const auto& a : split_list("[" + spec.substr(open + 1, spec.size() - open - 2) + "]"))
      args.push_back(to_double("domain", a));
  }
  DomainConfig dc;
  dc.kind = parse_domain_kind(name);
  if (dc.kind == DomainKind::ellipsoid) {
    if (args.empty()) args = {2.0, 1.0};
    if (args.size() != kDim) throw ConfigError("ellipsoid takes two semi-axes");
  } else if (dc.kind == DomainKind::perturbed_ball) {
    if (args.empty()) args = {0.05};
    if (args.size() != 1) throw ConfigError("perturbed_ball takes one parameter");
  } else if (!args.empty()) {
    throw ConfigError("ball takes no parameters");
  }
  dc.params = args;
  return DefiningFunction::from_config(dc);
}

std::vector<VerificationReport> run_probe(const std::string& probe, const DefiningFunction& domain,
                                          const RunConfig& cfg) {
  const std::uint64_t seed = cfg.seed;
  std::vector<VerificationReport> out;
  if (probe == "reproduce") {
    const auto points = interior_sample(domain, cfg.reproduce_points, 0.1, seed);
    const double tol = domain.kind() == DomainKind::ball ? 1e-6 : 1e-4;
    out.push_back(reproduction_report(domain, default_suite(domain), points, cfg.ladder, tol,
                                      cfg.cache_dir));
    out.push_back(stokes_identity_check(domain, cfg.l, cfg.stokes_samples, cfg.delta_min, cfg.eps, seed));
  } else if (probe == "measures") {
    out.push_back(measures_probe(domain, seed));
  } else if (probe == "quasimetric") {
    out.push_back(quasimetric_structure_probe(domain, cfg.geometry_samples, seed));
    out.push_back(doubling_probe(domain, cfg.doubling_centers, seed));
    out.push_back(qm_comparability_probe(domain, ComparabilityMode::lemma1, cfg.eta, cfg.eps,
                                         cfg.geometry_samples, seed));
    out.push_back(qm_comparability_probe(domain, ComparabilityMode::lemma2, cfg.eta, cfg.eps,
                                         cfg.geometry_samples, seed));
    out.push_back(jet_probe(domain, cfg.eps, cfg.geometry_samples / 4, seed));
  } else if (probe == "regions") {
    out.push_back(integration_rules_report(domain, cfg.eta, cfg.eps, 8, seed));
    out.push_back(region_inclusion_probe(domain, random_boundary_point(domain, seed, 191, 0),
                                         cfg.eta, cfg.eps, cfg.geometry_samples, seed));
  } else if (probe == "normal-form") {
    std::vector<CVec> base;
    for (int k = 0; k < 4; ++k) base.push_back(random_boundary_point(domain, seed, 192, k));
    out.push_back(standard_form_report(domain, base));
    out.push_back(chart_lipschitz_probe(domain, 50, 20, seed));
  } else if (probe == "kernel-estimates") {
    out.push_back(kernel_size_probe(domain, cfg.l, cfg.kernel_samples, seed, cfg.eta, cfg.eps)
                      .to_report(domain, seed));
    for (HolderMode m : {HolderMode::first_arg, HolderMode::second_arg})
      out.push_back(kernel_holder_probe(domain, m, cfg.l, cfg.holder_samples, seed, cfg.separation,
                                        cfg.eta, cfg.eps)
                        .to_report(domain, seed));
  } else if (probe == "t1") {
    T1Options o{cfg.l, cfg.t1_points, cfg.eta, cfg.eps, seed};
    out.push_back(t1_norm_probe(domain, T1Side::T1, o));
    out.push_back(t1_norm_probe(domain, T1Side::T1_adjoint, o));
    out.push_back(t1_holder_probe(domain, cfg.l, cfg.t1_pairs, seed, cfg.eta, cfg.eps));
  } else if (probe == "weak-bound") {
    WeakBoundOptions o;
    o.l = cfg.l;
    o.centers = cfg.weak_centers;
    o.eta = cfg.eta;
    o.eps = cfg.eps;
    o.seed = seed;
    out.push_back(weak_boundedness_probe(domain, o));
  } else if (probe == "area-lp") {
    LpOptions o;
    o.p_list = cfg.p_list;
    o.l = cfg.l;
    o.eta = cfg.eta;
    o.eps = cfg.eps;
    o.design_points = cfg.design_points;
    out.push_back(lp_inequality_report(domain, default_family(domain, cfg.family_size, seed), o));
  } else if (probe == "area-bmo") {
    BmoOptions o;
    o.l = cfg.l;
    o.eta = cfg.eta;
    o.eps = cfg.eps;
    o.centers = cfg.bmo_centers;
    const std::vector<BoundaryFunction> family{
        log_singular(domain, random_boundary_point(domain, seed, 193, 0)), smooth_function(0),
        rough_random(seed * 1000 + 3),
        indicator_smoothed(domain, random_boundary_point(domain, seed, 194, 0), 0.4, 0.1)};
    out.push_back(bmo_inequality_report(domain, family, o));
  } else {
    throw ConfigError("unknown probe '" + probe + "'");
  }
  return out;
}

json comparable(const VerificationReport& report) {
  json j = report.to_json();
  j.erase("wall_seconds");
  return j;
}

std::string summary_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  os << "probe,domain,pass,wall_seconds,config_hash\n";
  for (const auto& r : reports)
    os << r.probe << ",\"" << r.inputs.value("domain", std::string{}) << "\","
       << (r.pass ? "true" : "false") << "," << format_number(r.wall_seconds) << ","
       << r.config_hash << "\n";
  return os.str();
}

std::string summary_markdown(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  os << "| probe | domain | pass | seconds |\n|---|---|---|---|\n";
  for (const auto& r : reports) {
    std::ostringstream sec;
    sec.precision(3);
    sec << r.wall_seconds;
    os << "| " << r.probe << " | " << r.inputs.value("domain", std::string{}) << " | "
       << (r.pass ? "PASS" : "FAIL") << " | " << sec.str() << " |\n";
  }
  return os.str();
}

std::vector<VerificationReport> load_reports(const std::string& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<VerificationReport> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    try {
      out.push_back(VerificationReport::from_json(json::parse(in)));
    } catch (const json::exception& e) {
      throw ConfigError("malformed report " + f.string() + ": " + e.what());
    }
  }
  return out;
}

RunResult run(const RunConfig& cfg) {
  validate(cfg);
#ifdef _OPENMP
  if (cfg.jobs > 0) omp_set_num_threads(cfg.jobs);
#endif
  std::vector<std::string> probes;
  for (const auto& p : cfg.probes) {
    if (p == "all") {
      probes = probe_names();
      break;
    }
    if (std::find(probes.begin(), probes.end(), p) == probes.end()) probes.push_back(p);
  }
  // run order follows probe_names()
  std::stable_sort(probes.begin(), probes.end(), [](const std::string& a, const std::string& b) {
    const auto& n = probe_names();
    return std::find(n.begin(), n.end(), a) < std::find(n.begin(), n.end(), b);
  });
  const std::string hash = fnv1a_hex(canonical_config(cfg));
  if (!cfg.out_dir.empty()) fs::create_directories(cfg.out_dir);

  RunResult res;
  res.all_pass = true;
  for (const auto& dspec : cfg.domains) {
    const DefiningFunction domain = parse_domain(dspec);
    for (const auto& probe : probes) {
      std::vector<VerificationReport> reps = run_probe(probe, domain, cfg);
      for (std::size_t i = 0; i < reps.size(); ++i) {
        VerificationReport& r = reps[i];
        r.config_hash = hash;
        if (!r.inputs.contains("domain")) r.inputs["domain"] = domain.tag();
        res.all_pass = res.all_pass && r.pass;
        if (!cfg.out_dir.empty()) {
          const std::string name = slug(domain.tag()) + "__" + slug(probe) + "__" +
                                   std::to_string(i) + "_" + slug(r.probe) + ".json";
          std::ofstream(fs::path(cfg.out_dir) / name) << r.to_json().dump(1) << "\n";
          if (r.probe == "area_integral.lp") {
            std::ofstream csv(fs::path(cfg.out_dir) / (slug(domain.tag()) + "__area_lp.csv"));
            csv << "domain,l,eta,eps,p,function_id,norm_g,norm_Ilg,ratio,stable\n";
            for (const auto& row : r.metrics["rows"])
              csv << "\"" << row["domain"].get<std::string>() << "\"," << row["l"] << ","
                  << row["eta"] << "," << row["eps"] << "," << row["p"] << ",\""
                  << row["function_id"].get<std::string>() << "\"," << row["norm_g"] << ","
                  << row["norm_Ilg"] << "," << row["ratio"] << "," << row["stable"] << "\n";
          }
        }
        res.reports.push_back(std::move(r));
      }
    }
  }
  if (!cfg.out_dir.empty()) std::ofstream(fs::path(cfg.out_dir) / "summary.csv") << summary_csv(res.reports);
  return res;
}

}  // namespace clf
