#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clf/domain.hpp"
#include "clf/report.hpp"

namespace clf {

enum class RegionKind { internal, external, model };

struct RegionSpec {
  RegionKind kind = RegionKind::external;
  CVec vertex = CVec::Zero();  // unused for the model region
  double eta = 0.1;
  double eps = 0.1;
};

/// Largest eta, eps accepted by the probes.
inline constexpr double kEps0 = 0.1;

void validate(const RegionSpec& spec, double eps0 = kEps0);

/// D^i: tau in Omega, pr(tau) in B(xi, -eta rho(tau)), rho(tau) > -eps.
bool in_internal_region(const DefiningFunction& domain, const RegionSpec& spec, const CVec& tau);
/// D^e: tau - xi = w v + t n with |w|^2 < eta rho, |Im t| < eta rho, 0 < rho < eps,
/// restricted to the sheet Re t > 0 on the outer side of xi.
bool in_external_region(const DefiningFunction& domain, const RegionSpec& spec, const CVec& tau);
/// D_0: |tau'|^2 < eta Re tau_n, |Im tau_n| < eta Re tau_n, Re tau_n < eps.
bool in_model_region(const RegionSpec& spec, const CVec& tau);

/// Exponent of rho in dnu_l = dmu / rho^e. Default n - 2l + 1; `printed` gives
/// the n - 2l - 1 variant.
int nu_exponent(int l, bool printed = false);

struct RegionResolution {
  int n_levels = 10;   // Gauss nodes in x = log(eps / s)
  int n_radial = 4;    // Gauss nodes in |w|^2
  int n_angle = 6;     // trapezoid nodes in arg w
  int n_imag = 4;      // Gauss nodes in Im t
  double x_max = 7.0;  // smallest level is eps * exp(-x_max)
};

/// Fibered quadrature over a region: levels s (rho = s, -s, or Re tau_n = s),
/// slices over the tangential disc and the imaginary normal segment.
struct RegionGrid {
  RegionSpec spec;
  int l = 1;
  int exponent = 1;
  std::vector<CVec> nodes;
  std::vector<double> mu;   // Lebesgue weights
  std::vector<double> nu;   // mu / height^exponent
  std::vector<double> height;  // rho(tau) for D^e / D^i (signed), Re tau_n for D_0
  std::vector<double> levels;
  std::vector<std::size_t> level_offset;  // nodes of level k: [offset[k], offset[k+1])

  std::size_t size() const { return nodes.size(); }
};

RegionGrid build_region_grid(const DefiningFunction& domain, const RegionSpec& spec, int l,
                             const RegionResolution& res = {},
                             std::optional<int> exponent_override = std::nullopt);

/// Point of D^e(xi) with coordinates (w, Im t) on the level rho = s; Re t is
/// solved. Returns the point and d rho / d Re t there.
std::pair<CVec, double> external_slice_point(const DefiningFunction& domain,
                                             const TangentFrame& frame, cplx w, double im_t,
                                             double s);

/// Ratio of the D^e integral of rho^power to int_0^eps t^(power + n) dt.
double radial_rule_ratio(const DefiningFunction& domain, const CVec& xi, double eta, double eps,
                         double power, const RegionResolution& res = {});

/// Integration rules of the region geometry: radial rule over sampled vertices
/// and powers, Fubini rule for a few integrands, each at two resolutions.
VerificationReport integration_rules_report(const DefiningFunction& domain, double eta, double eps,
                                            int vertices, std::uint64_t seed);

/// Forward (D^e -> D_0 through phi) and reverse (D_0 -> D^e through psi)
/// inclusion constants at xi, at `samples` and 2 * `samples`.
VerificationReport region_inclusion_probe(const DefiningFunction& domain, const CVec& xi,
                                          double eta, double eps, int samples, std::uint64_t seed);

/// Inclusion constants for one sample size.
struct InclusionConstants {
  double forward = 0.0;
  double reverse = 0.0;
  double forward_contained = 0.0;  // fraction inside D_0(c eta, c eps) at the fitted c
  double reverse_contained = 0.0;
};
InclusionConstants inclusion_constants(const DefiningFunction& domain, const CVec& xi, double eta,
                                       double eps, int samples, std::uint64_t seed);

}  // namespace clf
