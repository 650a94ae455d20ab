#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "clf/domain.hpp"
#include "clf/report.hpp"
#include "clf/surface.hpp"

namespace clf {

enum class TestKind { monomial, exterior_pole, random_poly, rough, real_coordinate };

/// Function on a neighborhood of the closed domain. `holomorphic` marks
/// members the reproducing formula applies to; the evaluator is itself the
/// exact value oracle for every catalog kind.
struct HoloTestFunction {
  TestKind kind = TestKind::monomial;
  std::string name;
  bool holomorphic = true;
  bool has_oracle = true;
  std::function<cplx(const CVec&)> eval;

  cplx operator()(const CVec& z) const { return eval(z); }
};

HoloTestFunction monomial(int a1, int a2);
/// <d rho(a), a - z>^{-m} for a outside the closed domain.
HoloTestFunction exterior_pole(const DefiningFunction& domain, const CVec& a, int m);
/// Polynomial with normal random coefficients, all monomials of total degree <= degree.
HoloTestFunction random_poly(std::uint64_t seed, int degree);
/// Non-holomorphic smooth function (mix of z, conj z and |z|^2 terms).
HoloTestFunction rough(std::uint64_t seed);
/// Re z_k: the standard negative control.
HoloTestFunction real_coordinate(int k);

/// Monomials of total degree <= max_degree plus exterior poles.
std::vector<HoloTestFunction> default_suite(const DefiningFunction& domain, int max_degree = 4);

/// <d rho(xi), xi - z>^{-n}. Throws SingularPairing when the pairing is below 1e-14.
cplx clf_kernel(const DefiningFunction& domain, const CVec& xi, const CVec& z);

/// Euclidean distance from z to the boundary (nearest point by projection).
double boundary_distance(const DefiningFunction& domain, const CVec& z);

/// sum_i f(xi_i) K(xi_i, z) S_i. Throws TooCloseToBoundary when dist(z, bd) < delta_min.
cplx clf_apply(const DefiningFunction& domain, const SurfaceGrid& grid, const HoloTestFunction& f,
               const CVec& z, double delta_min = 0.1);

/// Interior points with boundary distance >= min_dist (deterministic in seed).
std::vector<CVec> interior_sample(const DefiningFunction& domain, int count, double min_dist,
                                  std::uint64_t seed);

/// Reproduction errors over suite x points x ladder.
VerificationReport reproduction_report(const DefiningFunction& domain,
                                       const std::vector<HoloTestFunction>& suite,
                                       const std::vector<CVec>& points,
                                       const std::vector<SurfaceResolution>& ladder,
                                       double tolerance, const std::string& cache_dir = "");

/// V(tau, w) = <d rho(tau), tau - w>.
inline cplx pairing_V(const CVec& grad_tau, const CVec& tau, const CVec& w) {
  return pairing(grad_tau, tau - w);
}

struct StokesResult {
  cplx surface = 0.0;  // A = int_bd V^{-(n+l)} dS
  cplx volume = 0.0;   // B = int_Omega V^{-(n+l)} dV
};

/// A and B at one exterior point at two resolutions (coarse first).
std::array<StokesResult, 2> stokes_pair(const DefiningFunction& domain, const CVec& tau, int l);

/// Fits kappa in A = kappa B over exterior points with rho(tau) in
/// [rho_min, rho_max] (rho_max <= eps), l >= 0.
VerificationReport stokes_identity_check(const DefiningFunction& domain, int l, int samples,
                                         double rho_min, double rho_max, std::uint64_t seed);

}  // namespace clf
