#include "clf/regions.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "clf/normal_form.hpp"
#include "clf/numerics.hpp"
#include "clf/surface.hpp"

namespace clf {

void validate(const RegionSpec& spec, double eps0) {
  if (!(spec.eta > 0.0) || !(spec.eps > 0.0))
    throw ConfigError("region parameters eta, eps must be positive");
  if (spec.eta > eps0 || spec.eps > eps0)
    throw ConfigError("region parameters eta, eps must not exceed eps0");
}

bool in_internal_region(const DefiningFunction& domain, const RegionSpec& spec, const CVec& tau) {
  const double r = domain.value(tau);
  if (!(r < 0.0) || !(r > -spec.eps)) return false;
  const CVec p = project_to_boundary(domain, tau);
  return quasimetric(domain, p, spec.vertex) < -spec.eta * r;
}

bool in_external_region(const DefiningFunction& domain, const RegionSpec& spec, const CVec& tau) {
  const double r = domain.value(tau);
  if (!(r > 0.0) || !(r < spec.eps)) return false;
  const TangentFrame f = tangent_frame(domain, spec.vertex);
  const TangentSplit s = tangent_decompose(f, tau);
  return s.t.real() > 0.0 && std::norm(s.w) < spec.eta * r && std::abs(s.t.imag()) < spec.eta * r;
}

bool in_model_region(const RegionSpec& spec, const CVec& tau) {
  const double x = tau[kDim - 1].real();
  double tangential = 0.0;
  for (int k = 0; k + 1 < kDim; ++k) tangential += std::norm(tau[k]);
  return tangential < spec.eta * x && std::abs(tau[kDim - 1].imag()) < spec.eta * x && x < spec.eps;
}

int nu_exponent(int l, bool printed) { return printed ? kDim - 2 * l - 1 : kDim - 2 * l + 1; }

namespace {

// rho(base + w v + (a + i b) n) = target along the real normal coordinate a,
// bracketed in [lo, hi] with rho increasing in a.
std::pair<CVec, double> solve_normal_coordinate(const DefiningFunction& domain,
                                                const TangentFrame& f, cplx w, double b,
                                                double target, double lo, double hi) {
  const cplx i(0.0, 1.0);
  auto point = [&](double a) { return CVec(f.base + w * f.tangent + (a + i * b) * f.normal); };
  double flo = domain.value(point(lo)) - target, fhi = domain.value(point(hi)) - target;
  if (!(flo < 0.0) || !(fhi > 0.0)) return {point(lo), 0.0};
  double a = lo - flo * (hi - lo) / (fhi - flo);
  for (int it = 0; it < 100; ++it) {
    const CJet j = domain.jet(point(a));
    const double fa = j.value - target;
    if (fa < 0.0) lo = a; else hi = a;
    const double da = 2.0 * pairing(j.gradient, f.normal).real();
    if (std::abs(fa) <= 1e-15 * std::max(1.0, std::abs(target))) break;
    double next = a - fa / da;
    if (!(da > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - a) < 1e-17 || hi - lo < 1e-17) {
      a = next;
      break;
    }
    a = next;
  }
  const CVec tau = point(a);
  return {tau, 2.0 * pairing(domain.jet(tau).gradient, f.normal).real()};
}

double support_distance(const DefiningFunction& domain, const TangentFrame& f) {
  return hdot(f.normal, f.base - domain.center()).real();
}

}  // namespace

std::pair<CVec, double> external_slice_point(const DefiningFunction& domain,
                                             const TangentFrame& frame, cplx w, double im_t,
                                             double s) {
  return solve_normal_coordinate(domain, frame, w, im_t, s, 0.0, 1.0);
}

RegionGrid build_region_grid(const DefiningFunction& domain, const RegionSpec& spec, int l,
                             const RegionResolution& res, std::optional<int> exponent_override) {
  if (l < 1) throw ConfigError("l must be a positive integer");
  if (res.n_levels < 1 || res.n_radial < 1 || res.n_angle < 1 || res.n_imag < 1)
    throw ConfigError("region resolution must be positive");
  RegionGrid g;
  g.spec = spec;
  g.l = l;
  g.exponent = exponent_override.value_or(nu_exponent(l));
  const Rule xr = gauss_legendre(res.n_levels, 0.0, res.x_max);
  const Rule ur = gauss_legendre(res.n_radial, 0.0, 1.0);
  const Rule ar = periodic_trapezoid(res.n_angle, 0.0, 2.0 * kPi);
  const Rule br = gauss_legendre(res.n_imag, -1.0, 1.0);
  const cplx i(0.0, 1.0);

  std::optional<TangentFrame> frame;
  double hmin = 1.0, grad = 1.0, depth = 1.0;
  if (spec.kind != RegionKind::model) {
    frame = tangent_frame(domain, spec.vertex);
    grad = frame->grad_norm;
    Eigen::SelfAdjointEigenSolver<CMat> es(domain.jet(spec.vertex).hermitian_hessian,
                                           Eigen::EigenvaluesOnly);
    hmin = es.eigenvalues()[0];
    depth = support_distance(domain, *frame);
  }

  g.level_offset.push_back(0);
  for (std::size_t li = 0; li < xr.size(); ++li) {
    const double s = spec.eps * std::exp(-xr.x[li]);
    const double ds = s * xr.w[li];
    g.levels.push_back(s);
    // Slice half-widths: |w|^2 < U, |Im t| < Bw. The internal region is cut
    // out of a box twice the size of its expected extent.
    double U = spec.eta * s, Bw = spec.eta * s;
    if (spec.kind == RegionKind::internal) {
      U = 4.0 * spec.eta * s / hmin;
      Bw = 2.0 * spec.eta * s / grad;
    }
    for (std::size_t ui = 0; ui < ur.size(); ++ui) {
      const double u = U * ur.x[ui];
      for (std::size_t ai = 0; ai < ar.size(); ++ai) {
        const cplx w = std::polar(std::sqrt(u), ar.x[ai]);
        for (std::size_t bi = 0; bi < br.size(); ++bi) {
          const double b = Bw * br.x[bi];
          const double slice_w = 0.5 * U * ur.w[ui] * ar.w[ai] * Bw * br.w[bi];
          CVec tau;
          double mu = 0.0, height = 0.0;
          if (spec.kind == RegionKind::model) {
            tau[0] = w;
            tau[1] = s + i * b;
            mu = slice_w * ds;
            height = s;
          } else if (spec.kind == RegionKind::external) {
            const auto [p, da] = solve_normal_coordinate(domain, *frame, w, b, s, 0.0, depth);
            if (!(da > 0.0)) continue;
            tau = p;
            mu = slice_w * ds / da;
            height = s;
          } else {
            const auto [p, da] =
                solve_normal_coordinate(domain, *frame, w, b, -s, -0.5 * depth, 0.0);
            if (!(da > 0.0)) continue;
            if (!in_internal_region(domain, spec, p)) continue;
            tau = p;
            mu = slice_w * ds / da;
            height = -s;
          }
          g.nodes.push_back(tau);
          g.mu.push_back(mu);
          g.height.push_back(height);
          g.nu.push_back(mu / ipow(std::abs(height), g.exponent).real());
        }
      }
    }
    g.level_offset.push_back(g.nodes.size());
  }
  if (g.nodes.empty()) throw EmptyRegion("region parameters produce no quadrature nodes");
  return g;
}

double radial_rule_ratio(const DefiningFunction& domain, const CVec& xi, double eta, double eps,
                         double power, const RegionResolution& res) {
  const RegionGrid g = build_region_grid(domain, {RegionKind::external, xi, eta, eps}, 1, res);
  std::vector<double> terms(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) terms[k] = g.mu[k] * std::pow(g.height[k], power);
  const double oracle = std::pow(eps, power + kDim + 1) / (power + kDim + 1);
  return pairwise_sum(terms) / oracle;
}

namespace {

// Lebesgue integral of F over the shell 0 < rho < eps, by rays from the center.
template <class F>
double shell_integral(const DefiningFunction& domain, double eps, F&& f, int n_theta, int n_phi,
                      int n_r) {
  const Rule th = gauss_legendre(n_theta, 0.0, 0.5 * kPi);
  const Rule ph = periodic_trapezoid(n_phi, 0.0, 2.0 * kPi);
  const Rule rr = gauss_legendre(n_r, 0.0, 1.0);
  const double a1 = domain.shape(0), a2 = domain.shape(1);
  const double det_l = a1 * a1 * a2 * a2;
  std::vector<double> terms(th.size() * ph.size() * ph.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(terms.size()); ++idx) {
    const std::size_t i = idx / (ph.size() * ph.size());
    const std::size_t j = (idx / ph.size()) % ph.size();
    const std::size_t k = idx % ph.size();
    const double ct = std::cos(th.x[i]), st = std::sin(th.x[i]);
    CVec d;
    d[0] = a1 * std::polar(ct, ph.x[j]);
    d[1] = a2 * std::polar(st, ph.x[k]);
    const CVec c = domain.center();
    const double r0 = (ray_boundary_point(domain, c, d, 0.0) - c).norm() / d.norm();
    const double r1 = (ray_boundary_point(domain, c, d, eps) - c).norm() / d.norm();
    double acc = 0.0;
    for (std::size_t m = 0; m < rr.size(); ++m) {
      const double r = r0 + (r1 - r0) * rr.x[m];
      acc += f(CVec(c + r * d)) * r * r * r * (r1 - r0) * rr.w[m];
    }
    terms[idx] = acc * det_l * th.w[i] * ph.w[j] * ph.w[k] * st * ct;
  }
  return pairwise_sum(terms);
}

struct RuleBand {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

}  // namespace

VerificationReport integration_rules_report(const DefiningFunction& domain, double eta, double eps,
                                            int vertices, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  validate({RegionKind::external, CVec::Zero(), eta, eps});
  VerificationReport rep;
  rep.probe = "regions.integration_rules";
  rep.inputs = {{"domain", domain.tag()}, {"eta", eta}, {"eps", eps}, {"vertices", vertices},
                {"seed", seed}};
  const RegionResolution coarse{8, 3, 6, 3, 7.0};
  const RegionResolution fine{12, 4, 8, 4, 8.0};

  // Radial rule.
  RuleBand radial[2];
  for (int v = 0; v < vertices; ++v) {
    const CVec xi = random_boundary_point(domain, seed, 41, v);
    for (double power : {0.0, 1.0}) {
      radial[0].add(radial_rule_ratio(domain, xi, eta, eps, power, coarse));
      radial[1].add(radial_rule_ratio(domain, xi, eta, eps, power, fine));
    }
  }

  // Fubini rule for three integrands.
  using Fn = std::function<double(const CVec&)>;
  const std::vector<std::pair<std::string, Fn>> fs = {
      {"one", [](const CVec&) { return 1.0; }},
      {"rho", [&](const CVec& z) { return domain.value(z); }},
      {"one_plus_z1sq", [](const CVec& z) { return 1.0 + std::norm(z[0]); }}};
  RuleBand fubini[2];
  json fub = json::array();
  for (const auto& [name, f] : fs) {
    const double lhs = shell_integral(domain, eps, f, 24, 48, 8);
    double rhs[2];
    for (int level = 0; level < 2; ++level) {
      const SurfaceGrid sg = build_surface_grid(domain, 0.0, level == 0 ? SurfaceResolution{6, 12}
                                                                        : SurfaceResolution{8, 16});
      const RegionResolution& rr = level == 0 ? coarse : fine;
      std::vector<double> outer(sg.size());
#pragma omp parallel for schedule(dynamic)
      for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(sg.size()); ++k) {
        const RegionGrid g = build_region_grid(domain, {RegionKind::external, sg.points[k], eta, eps},
                                               1, rr);
        double acc = 0.0;
        for (std::size_t m = 0; m < g.size(); ++m)
          acc += f(g.nodes[m]) * g.mu[m] / ipow(g.height[m], kDim).real();
        outer[k] = acc * sg.sigma[k];
      }
      rhs[level] = pairwise_sum(outer);
      fubini[level].add(rhs[level] / lhs);
    }
    fub.push_back({{"integrand", name}, {"shell", lhs}, {"fibered", rhs[1]},
                   {"ratio", rhs[1] / lhs}, {"ratio_coarse", rhs[0] / lhs}});
  }

  auto band_json = [](const RuleBand& b) { return json{b.lo, b.hi}; };
  rep.metrics["radial_band"] = band_json(radial[1]);
  rep.metrics["radial_band_coarse"] = band_json(radial[0]);
  rep.metrics["radial_spread"] = radial[1].hi / radial[1].lo;
  rep.metrics["radial_model_constant"] = kPi * eta * eta;  // slice volume over t^2, times |d rho|
  rep.metrics["fubini_band"] = band_json(fubini[1]);
  rep.metrics["fubini_band_coarse"] = band_json(fubini[0]);
  rep.metrics["fubini"] = fub;
  const double d1 = std::max(relative_change(radial[0].lo, radial[1].lo),
                             relative_change(radial[0].hi, radial[1].hi));
  const double d2 = std::max(relative_change(fubini[0].lo, fubini[1].lo),
                             relative_change(fubini[0].hi, fubini[1].hi));
  rep.stability["radial_endpoint_drift"] = d1;
  rep.stability["fubini_endpoint_drift"] = d2;
  const bool finite = std::isfinite(radial[1].hi) && radial[1].lo > 0.0 &&
                      std::isfinite(fubini[1].hi) && fubini[1].lo > 0.0;
  rep.pass = finite && d1 < 0.1 && d2 < 0.1;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

InclusionConstants inclusion_constants(const DefiningFunction& domain, const CVec& xi, double eta,
                                       double eps, int samples, std::uint64_t seed) {
  const TangentFrame f = tangent_frame(domain, xi);
  const NormalFormChart chart = normal_form_chart(domain, xi);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cf(samples), cr(samples);
  std::vector<CVec> img(samples), pre(samples);
  std::vector<double> rho_pre(samples);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < samples; ++k) {
    // log-uniform heights so that the small-scale end is populated
    const double s = eps * std::exp(std::log(1e-4) * uniform01(seed, 51, k));
    const double u = eta * s * uniform01(seed, 52, k);
    const cplx w = std::polar(std::sqrt(u), 2.0 * kPi * uniform01(seed, 53, k));
    const double b = eta * s * (2.0 * uniform01(seed, 54, k) - 1.0);
    const auto [tau, da] = external_slice_point(domain, f, w, b, s);
    if (!(da > 0.0)) {
      cf[k] = inf;
    } else {
      const CVec z = chart.forward(tau);
      img[k] = z;
      const double x = z[1].real();
      cf[k] = x > 0.0 ? std::max({1.0, std::norm(z[0]) / (eta * x), std::abs(z[1].imag()) / (eta * x),
                                  x / eps})
                      : inf;
    }
    // reverse: model region point pulled back through psi
    const double x = eps * std::exp(std::log(1e-4) * uniform01(seed, 55, k));
    CVec zeta;
    zeta[0] = std::polar(std::sqrt(eta * x * uniform01(seed, 56, k)),
                         2.0 * kPi * uniform01(seed, 57, k));
    zeta[1] = cplx(x, eta * x * (2.0 * uniform01(seed, 58, k) - 1.0));
    const CVec tau2 = chart.inverse(zeta);
    pre[k] = tau2;
    const double r = domain.value(tau2);
    rho_pre[k] = r;
    const TangentSplit sp = tangent_decompose(f, tau2);
    cr[k] = (r > 0.0 && sp.t.real() > 0.0)
                ? std::max({1.0, std::norm(sp.w) / (eta * r), std::abs(sp.t.imag()) / (eta * r),
                            r / eps})
                : inf;
  }
  InclusionConstants out;
  out.forward = *std::max_element(cf.begin(), cf.end()) * (1.0 + 1e-9);
  out.reverse = *std::max_element(cr.begin(), cr.end()) * (1.0 + 1e-9);
  int inf_ok = 0, inr_ok = 0;
  for (int k = 0; k < samples; ++k) {
    if (std::isfinite(cf[k]) &&
        in_model_region({RegionKind::model, CVec::Zero(), out.forward * eta, out.forward * eps},
                        img[k]))
      ++inf_ok;
    if (std::isfinite(cr[k]) &&
        in_external_region(domain, {RegionKind::external, xi, out.reverse * eta, out.reverse * eps},
                           pre[k]))
      ++inr_ok;
  }
  out.forward_contained = static_cast<double>(inf_ok) / samples;
  out.reverse_contained = static_cast<double>(inr_ok) / samples;
  return out;
}

VerificationReport region_inclusion_probe(const DefiningFunction& domain, const CVec& xi,
                                          double eta, double eps, int samples, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  validate({RegionKind::external, xi, eta, eps});
  VerificationReport rep;
  rep.probe = "regions.inclusion";
  rep.inputs = {{"domain", domain.tag()},
                {"xi", {xi[0].real(), xi[0].imag(), xi[1].real(), xi[1].imag()}},
                {"eta", eta}, {"eps", eps}, {"samples", samples}, {"seed", seed}};
  const InclusionConstants a = inclusion_constants(domain, xi, eta, eps, samples, seed);
  const InclusionConstants b = inclusion_constants(domain, xi, eta, eps, 2 * samples, seed);
  rep.metrics["forward_c"] = b.forward;
  rep.metrics["reverse_c"] = b.reverse;
  rep.metrics["forward_contained"] = b.forward_contained;
  rep.metrics["reverse_contained"] = b.reverse_contained;
  rep.stability["forward_c_half"] = a.forward;
  rep.stability["reverse_c_half"] = a.reverse;
  const double df = relative_change(a.forward, b.forward), dr = relative_change(a.reverse, b.reverse);
  rep.stability["forward_drift"] = df;
  rep.stability["reverse_drift"] = dr;
  rep.pass = std::isfinite(b.forward) && std::isfinite(b.reverse) && b.forward_contained == 1.0 &&
             b.reverse_contained == 1.0 && df < 0.1 && dr < 0.1;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace clf
