#include "clf/normal_form.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "clf/numerics.hpp"

namespace clf {

CVec NormalFormChart::forward(const CVec& z) const {
  const CVec u = z - base;
  CVec out = Phi * u;
  out[kDim - 1] += (u.transpose() * B * u)(0, 0);
  return out;
}

CMat NormalFormChart::forward_derivative(const CVec& z) const {
  const CVec u = z - base;
  CMat d = Phi;
  d.row(kDim - 1) += 2.0 * (u.transpose() * B);
  return d;
}

std::pair<CVec, cplx> NormalFormChart::inverse_with_jacobian(const CVec& tau) const {
  CVec z = base + Phi_inv * tau;
  CVec r = forward(z) - tau;
  const double tol = 1e-14 * std::max(1.0, tau.norm());
  for (int it = 0; it < 60 && r.norm() > tol; ++it) {
    const CVec step = forward_derivative(z).fullPivLu().solve(-r);
    double damp = 1.0;
    for (int ls = 0; ls < 40; ++ls) {
      const CVec trial = z + damp * step;
      const CVec rt = forward(trial) - tau;
      if (rt.norm() < r.norm() || rt.norm() <= tol) {
        z = trial;
        r = rt;
        break;
      }
      damp *= 0.5;
    }
    if (damp < 1e-10) break;
  }
  if (r.norm() > 1e-12 * std::max(1.0, tau.norm()))
    throw NoConvergence("normal-form inverse did not converge");
  return {z, 1.0 / forward_derivative(z).determinant()};
}

CVec NormalFormChart::inverse(const CVec& tau) const { return inverse_with_jacobian(tau).first; }
cplx NormalFormChart::jacobian(const CVec& tau) const { return inverse_with_jacobian(tau).second; }

NormalFormChart normal_form_chart(const DefiningFunction& domain, const CVec& xi,
                                  const CVec* tangent_seed) {
  const TangentFrame f = tangent_frame(domain, xi, tangent_seed);
  const CJet j = domain.jet(xi);
  NormalFormChart c;
  c.base = xi;
  c.Phi.row(0) = f.tangent.adjoint();
  c.Phi.row(1) = j.gradient.transpose();
  c.Phi_inv = c.Phi.inverse();
  c.B = 0.5 * j.holomorphic_hessian;
  return c;
}

CVec random_boundary_point(const DefiningFunction& domain, std::uint64_t seed,
                           std::uint64_t stream, std::uint64_t index) {
  CVec d = random_unit_vector(seed, stream, index);
  for (int k = 0; k < kDim; ++k) d[k] *= domain.shape(k);
  return radial_boundary_point(domain, d, 0.0);
}

namespace {

// Points on the unit sphere of C^2, closed under zeta -> -zeta so that odd
// (cubic) terms drop out of the quadratic fit.
std::vector<CVec> symmetric_sphere(int count) {
  std::vector<CVec> out;
  for (int i = 0; i < count / 2; ++i) {
    const CVec z = hopf_direction(halton(i + 1, 2), halton(i + 1, 3), halton(i + 1, 5));
    out.push_back(z);
    out.push_back(-z);
  }
  return out;
}

}  // namespace

StandardFormFit standard_form_residual(const DefiningFunction& domain, const NormalFormChart& chart,
                                       const std::vector<double>& radii, int samples_per_sphere) {
  StandardFormFit fit;
  fit.radii = radii;
  const std::vector<CVec> dirs = symmetric_sphere(samples_per_sphere);
  double smallest = std::numeric_limits<double>::infinity();
  bool all_exact = true;
  for (double r : radii) {
    const int m = static_cast<int>(dirs.size());
    Eigen::MatrixXd a(m, 4);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
      const CVec zeta = r * dirs[i];
      const double val = domain.value(chart.inverse(zeta)) - 2.0 * zeta[1].real();
      const cplx cross = zeta[0] * std::conj(zeta[1]);
      a(i, 0) = std::norm(zeta[0]);
      a(i, 1) = std::norm(zeta[1]);
      a(i, 2) = 2.0 * cross.real();
      a(i, 3) = -2.0 * cross.imag();
      b[i] = val;
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    const double res = (a * c - b).cwiseAbs().maxCoeff();
    fit.max_residual.push_back(res);
    // roundoff floor of rho o psi, whose values are O(r)
    if (res > 1e-11 * r) all_exact = false;
    if (r < smallest) {
      smallest = r;
      // zeta^T A conj(zeta) with A12 = c2 + i c3, A21 = conj(A12)
      fit.hermitian << c[0], cplx(c[2], c[3]), cplx(c[2], -c[3]), c[1];
    }
  }
  fit.exact = all_exact;
  Eigen::SelfAdjointEigenSolver<CMat> es(fit.hermitian, Eigen::EigenvaluesOnly);
  fit.min_eigenvalue = es.eigenvalues()[0];
  if (!fit.exact) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      lx.push_back(std::log(radii[i]));
      ly.push_back(std::log(std::max(fit.max_residual[i], 1e-300)));
    }
    const LineFit lf = fit_line(lx, ly);
    fit.slope = lf.slope;
    fit.r2 = lf.r2;
  }
  return fit;
}

VerificationReport standard_form_report(const DefiningFunction& domain,
                                        const std::vector<CVec>& base_points) {
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.probe = "normal_form.standard_form";
  rep.inputs["domain"] = domain.tag();
  rep.inputs["base_points"] = base_points.size();
  double min_slope = std::numeric_limits<double>::infinity(), min_eig = min_slope;
  double worst_roundtrip = 0.0;
  bool pass = true;
  json per = json::array();
  for (const CVec& xi : base_points) {
    const NormalFormChart ch = normal_form_chart(domain, xi);
    const StandardFormFit f = standard_form_residual(domain, ch);
    // Round trip on the shell near xi.
    double rt = 0.0;
    for (int i = 0; i < 32; ++i) {
      const CVec u = 0.3 * halton(i + 1, 7) * hopf_direction(halton(i + 1, 2), halton(i + 1, 3),
                                                            halton(i + 1, 5));
      const CVec z = xi + u;
      if (std::abs(domain.value(z)) > 0.1) continue;
      rt = std::max(rt, (ch.inverse(ch.forward(z)) - z).norm());
    }
    worst_roundtrip = std::max(worst_roundtrip, rt);
    const double slope = f.exact ? std::numeric_limits<double>::infinity() : f.slope;
    min_slope = std::min(min_slope, slope);
    min_eig = std::min(min_eig, f.min_eigenvalue);
    pass = pass && (f.exact || f.slope >= 2.7) && f.min_eigenvalue > 0.0 && rt <= 1e-10;
    per.push_back({{"xi", {xi[0].real(), xi[0].imag(), xi[1].real(), xi[1].imag()}},
                   {"slope", f.exact ? json("exact") : json(f.slope)},
                   {"r2", f.r2},
                   {"min_eigenvalue", f.min_eigenvalue},
                   {"roundtrip", rt}});
  }
  rep.metrics["min_slope"] = std::isfinite(min_slope) ? json(min_slope) : json("exact");
  rep.metrics["min_fitted_eigenvalue"] = min_eig;
  rep.metrics["worst_roundtrip"] = worst_roundtrip;
  rep.metrics["per_point"] = per;
  rep.pass = pass;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace {

struct LipschitzMax {
  double jac = 0.0;
  double inv = 0.0;
};

LipschitzMax lipschitz_pairs(const DefiningFunction& domain, int begin, int end, int shell_samples,
                             std::uint64_t seed) {
  std::vector<LipschitzMax> out(end - begin);
#pragma omp parallel for schedule(dynamic)
  for (int p = begin; p < end; ++p) {
    const CVec xi = random_boundary_point(domain, seed, 31, p);
    const TangentFrame f = tangent_frame(domain, xi);
    // Displace along a random real tangent direction, then project back.
    const double len = std::exp(std::log(2e-3) + (std::log(0.15) - std::log(2e-3)) *
                                                     uniform01(seed, 32, p));
    RVec c;
    for (int k = 0; k < 3; ++k) c[k] = normal01(seed, 33, 3 * p + k);
    const CVec dir = c[0] * f.real_tangent[0] + c[1] * f.real_tangent[1] + c[2] * f.real_tangent[2];
    const CVec xi2 = project_to_boundary(domain, xi + len * dir / dir.norm());
    const double dx = (xi - xi2).norm();
    LipschitzMax m;
    if (dx < 1e-3 || dx > 0.2) {
      out[p - begin] = m;
      continue;
    }
    const NormalFormChart a = normal_form_chart(domain, xi, &f.tangent);
    const NormalFormChart b = normal_form_chart(domain, xi2, &f.tangent);
    for (int s = 0; s < shell_samples; ++s) {
      const CVec u = random_unit_vector(seed, 34, static_cast<std::uint64_t>(p) * 4096 + s);
      const CVec tau = 0.1 * uniform01(seed, 35, static_cast<std::uint64_t>(p) * 4096 + s) * u;
      const auto [za, ja] = a.inverse_with_jacobian(tau);
      const auto [zb, jb] = b.inverse_with_jacobian(tau);
      m.jac = std::max(m.jac, std::abs(ja - jb) / dx);
      m.inv = std::max(m.inv, (za - zb).norm() / dx);
    }
    out[p - begin] = m;
  }
  LipschitzMax r;
  for (const auto& m : out) {
    r.jac = std::max(r.jac, m.jac);
    r.inv = std::max(r.inv, m.inv);
  }
  return r;
}

}  // namespace

VerificationReport chart_lipschitz_probe(const DefiningFunction& domain, int pairs,
                                         int shell_samples, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.probe = "normal_form.chart_lipschitz";
  rep.inputs = {{"domain", domain.tag()}, {"pairs", pairs}, {"shell_samples", shell_samples},
                {"seed", seed}};
  const LipschitzMax half = lipschitz_pairs(domain, 0, pairs, shell_samples, seed);
  const LipschitzMax rest = lipschitz_pairs(domain, pairs, 2 * pairs, shell_samples, seed);
  const LipschitzMax full{std::max(half.jac, rest.jac), std::max(half.inv, rest.inv)};
  rep.metrics["jacobian_lipschitz"] = full.jac;
  rep.metrics["inverse_lipschitz"] = full.inv;
  rep.stability["jacobian_lipschitz_half"] = half.jac;
  rep.stability["inverse_lipschitz_half"] = half.inv;
  const double dj = relative_change(half.jac, full.jac, 1e-12);
  const double di = relative_change(half.inv, full.inv, 1e-12);
  rep.stability["jacobian_drift"] = dj;
  rep.stability["inverse_drift"] = di;
  rep.pass = std::isfinite(full.jac) && std::isfinite(full.inv) && dj < 0.1 && di < 0.1;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace clf
