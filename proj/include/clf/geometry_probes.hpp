#pragma once

#include <cstdint>

#include "clf/domain.hpp"
#include "clf/report.hpp"

namespace clf {

enum class ComparabilityMode { lemma1, lemma2 };

/// Boundary point at quasimetric distance about `r` from xi: complex-tangential
/// offset sqrt(r) u, imaginary-normal offset r b, projected back to the boundary.
CVec nearby_boundary_point(const DefiningFunction& domain, const CVec& xi, double r, cplx u,
                           double b);

/// lemma1: d(w,z) / (rho(w) + d(pr w, z)) for w outside, z on the boundary.
/// lemma2: d(tau,w) / (rho(tau) + d(z,w)) for tau in D^e(z, eta, eps).
/// Band constant c = max(max ratio, 1 / min ratio) at `samples` and 2 * `samples`.
VerificationReport qm_comparability_probe(const DefiningFunction& domain, ComparabilityMode mode,
                                          double eta, double eps, int samples, std::uint64_t seed);

/// Quasi-triangle constant sup d(x,z) / (d(x,y) + d(y,z)) and the symmetry band
/// of d(w,z) / d(z,w), each at `samples` and 2 * `samples` multiscale triples.
VerificationReport quasimetric_structure_probe(const DefiningFunction& domain, int samples,
                                               std::uint64_t seed);

/// sigma(B(z, delta)) on focused grids for delta in [1e-3, 1e-1]: log-log slope,
/// doubling constant sup sigma(B(z,2 delta)) / sigma(B(z,delta)), at `centers`
/// and 2 * `centers`.
VerificationReport doubling_probe(const DefiningFunction& domain, int centers, std::uint64_t seed);

/// Analytic jets against central differences (h = 1e-5), Hermitian/symmetric
/// structure, and the strong convexity margin on the shell.
VerificationReport jet_probe(const DefiningFunction& domain, double eps, int samples,
                             std::uint64_t seed);

/// dS normalization: int K(xi, 0) dS = 1, raw dS mass, density positivity,
/// ball density constant and the sigma ladder order on the ball.
VerificationReport measures_probe(const DefiningFunction& domain, std::uint64_t seed);

}  // namespace clf
