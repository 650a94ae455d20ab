#pragma once

#include <cstdint>
#include <vector>

#include "clf/domain.hpp"
#include "clf/report.hpp"

namespace clf {

/// Holomorphic quadratic chart at a boundary point xi:
///   phi(z) = Phi u + (u^T B u) e_n,  u = z - xi,
/// with rows of Phi = (conj tangent, d rho(xi)) so that rho(psi(zeta)) =
/// 2 Re zeta_n + hermitian form + O(|zeta|^3). B is half the holomorphic
/// Hessian of rho at xi in the u coordinates.
struct NormalFormChart {
  CVec base;
  CMat Phi;
  CMat Phi_inv;
  CMat B;

  CVec forward(const CVec& z) const;
  /// Complex derivative of phi at z.
  CMat forward_derivative(const CVec& z) const;
  /// psi = phi^{-1} by damped Newton from xi + Phi^{-1} tau. Throws NoConvergence.
  CVec inverse(const CVec& tau) const;
  /// Complex Jacobian determinant of psi at tau.
  cplx jacobian(const CVec& tau) const;
  /// psi and its Jacobian together (one Newton solve).
  std::pair<CVec, cplx> inverse_with_jacobian(const CVec& tau) const;
};

NormalFormChart normal_form_chart(const DefiningFunction& domain, const CVec& xi,
                                  const CVec* tangent_seed = nullptr);

struct StandardFormFit {
  std::vector<double> radii;
  std::vector<double> max_residual;
  CMat hermitian;  // fitted A at the smallest radius
  double min_eigenvalue = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
  bool exact = false;  // residual at roundoff on every sphere
};

/// Least-squares fit of rho o psi - 2 Re zeta_n by a Hermitian form on spheres
/// |zeta| = r, and the log-log slope of the worst residual against r.
StandardFormFit standard_form_residual(const DefiningFunction& domain, const NormalFormChart& chart,
                                       const std::vector<double>& radii = {1e-1, 3.1622776601683794e-2,
                                                                          1e-2, 3.1622776601683794e-3},
                                       int samples_per_sphere = 64);

VerificationReport standard_form_report(const DefiningFunction& domain,
                                        const std::vector<CVec>& base_points);

/// Lipschitz quotients of xi -> J(xi, .) and xi -> psi(xi, .) over sampled
/// pairs with 1e-3 <= |xi - xi'| <= 0.2, at `pairs` and 2 * `pairs`.
VerificationReport chart_lipschitz_probe(const DefiningFunction& domain, int pairs,
                                         int shell_samples, std::uint64_t seed);

/// Random boundary point: radial projection of a uniform direction.
CVec random_boundary_point(const DefiningFunction& domain, std::uint64_t seed,
                           std::uint64_t stream, std::uint64_t index);

}  // namespace clf
