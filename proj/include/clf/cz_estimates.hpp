#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "clf/domain.hpp"
#include "clf/regions.hpp"
#include "clf/report.hpp"
#include "clf/surface.hpp"

namespace clf {

/// Region quadrature used for kernel norms. x_max is widened per pair so the
/// smallest level sits well below d(z, w).
struct KernelResolution {
  RegionResolution region{16, 2, 4, 2, 8.0};
  double level_margin = 100.0;  // smallest level <= d(z,w) / level_margin
};
KernelResolution kernel_production();
KernelResolution kernel_refined();

/// ||K(z,w)|| = (int_{D^e(z)} |V(tau,w)|^{-2(n+l)} dnu_l)^{1/2}.
/// Throws ResolutionTooCoarse when d(z,w) < 10 * smallest level.
double kernel_l2_norm(const DefiningFunction& domain, const CVec& z, const CVec& w, int l,
                      double eta, double eps, const KernelResolution& res = kernel_production());

struct KernelProbeResult {
  std::string mode;  // size, first_arg, second_arg
  int samples = 0;
  json pairs = json::array();  // per-sample d values and norms
  double size_constant = 0.0;  // sup N d^n (size mode)
  double size_constant_doubled = 0.0;
  double exponent = 0.0;       // size slope or Hoelder gamma
  double exponent_halfwidth = 0.0;
  double separation_exponent = 0.0;  // coefficient of log d(z,w)
  double r2 = 0.0;
  double residual_spread = 0.0;
  bool pass = false;
  double wall_seconds = 0.0;

  VerificationReport to_report(const DefiningFunction& domain, std::uint64_t seed) const;
};

/// KZ1: N(z,w) d(z,w)^n over `samples` pairs with d in [1e-2, 1] and over
/// 2 * `samples`; slope of log N against log d for d in [10^-3.5, 1e-2].
KernelProbeResult kernel_size_probe(const DefiningFunction& domain, int l, int samples,
                                    std::uint64_t seed, double eta = 0.1, double eps = 0.1);

enum class HolderMode { first_arg, second_arg };

/// KZ2 / KZ3: L^2(nu_l) norms of kernel differences under complex-tangential
/// displacements, regressed on log d(displacement) and log d(z, w).
/// Separation d(z,w) > `separation` * d(displacement) or InsufficientSeparation.
KernelProbeResult kernel_holder_probe(const DefiningFunction& domain, HolderMode mode, int l,
                                      int samples, std::uint64_t seed, double separation = 8.0,
                                      double eta = 0.1, double eps = 0.1);

/// Difference norms for one triple. first_arg: ||K(z,w) - K(xi,w)|| on a D_0
/// grid through the charts at z and xi (shared tangent seed). second_arg:
/// ||K(z,w) - K(z,w')|| on the D^e(z) grid.
double kernel_difference_norm(const DefiningFunction& domain, HolderMode mode, const CVec& z,
                              const CVec& other, const CVec& w, int l, double eta, double eps,
                              const RegionResolution& res);

enum class T1Side { T1, T1_adjoint };

struct T1Options {
  int l = 1;
  int base_points = 12;
  double eta = 0.1;
  double eps = 0.1;
  std::uint64_t seed = 1;
};
/// T1: I_l(1, z) over base points at two resolutions and the pointwise ratio
/// |F_1(tau)| / (rho^{1-l} ln(1 + 1/rho)) for rho in [1e-3, 1e-1].
/// T1_adjoint: for fixed w, G(zeta) = int J_z(zeta) V(psi_z zeta, w)^{-(n+l)} dS(z)
/// on a D_0 grid and its L^2(nu_l) norm.
VerificationReport t1_norm_probe(const DefiningFunction& domain, T1Side side, const T1Options& opt);

/// L^2(nu_l) norm over D_0 of the adjoint field at w.
double t1_adjoint_norm(const DefiningFunction& domain, const CVec& w, int l, double eta,
                       double eps, const RegionResolution& region, const FocusOptions& inner);

struct BumpFunction {
  CVec center;
  double radius = 0.0;
  double gamma = 0.5;
  double class_constant = 0.0;  // sampled sup |f(a)-f(b)| r^gamma / d(a,b)^gamma
  std::function<double(const CVec&)> eval;

  double operator()(const CVec& w) const { return eval(w); }
};
/// f = max(0, 1 - d(., w0) / r)^gamma, Hoelder quotient sampled on 1000 pairs.
BumpFunction make_bump(const DefiningFunction& domain, const CVec& w0, double r, double gamma = 0.5,
                       std::uint64_t seed = 1);

struct WeakBoundOptions {
  int l = 1;
  std::vector<double> radii{0.4, 0.2, 0.1, 0.05};
  int centers = 4;
  double eta = 0.1;
  double eps = 0.1;
  std::uint64_t seed = 1;
};
/// || <g, T f> ||_{L^2(nu_l)} for bumps f = g at each center and radius, on
/// D_0 levels in [r/8, eps]. Reports the log-log slope against r at `centers`
/// and 2 * `centers`, and its distance to the r^-n and r^{2n} normalizations.
VerificationReport weak_boundedness_probe(const DefiningFunction& domain,
                                          const WeakBoundOptions& opt);

/// One pairing norm (f and g on patch grids around the common center).
double bump_pairing_norm(const DefiningFunction& domain, const BumpFunction& f,
                         const BumpFunction& g, int l, double eta, double eps);

/// ||J_z F_1(psi_z .) - J_xi F_1(psi_xi .)||_{L^2(nu_l, D_0)}. F_1 is the
/// closed form on the ball and a focused quadrature elsewhere.
double t1_field_difference(const DefiningFunction& domain, const CVec& z, const CVec& xi, int l,
                           double eta, double eps, const RegionResolution& region);

/// Hoelder exponent of T1 over `pairs` complex-tangential pairs with
/// d(z, xi) in [1e-3, 1e-1].
VerificationReport t1_holder_probe(const DefiningFunction& domain, int l, int pairs,
                                   std::uint64_t seed, double eta = 0.1, double eps = 0.1);

}  // namespace clf
