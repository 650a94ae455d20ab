#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "clf/domain.hpp"
#include "clf/regions.hpp"
#include "clf/report.hpp"
#include "clf/surface.hpp"

namespace clf {

enum class BoundaryClass { smooth, rough_random, log_singular, indicator_smoothed, constant };

std::string to_string(BoundaryClass c);

struct BoundaryFunction {
  std::string name;
  BoundaryClass cls = BoundaryClass::smooth;
  std::function<cplx(const CVec&)> eval;

  cplx operator()(const CVec& w) const { return eval(w); }
};

/// k-th member of a fixed list of polynomials in z and conj z.
BoundaryFunction smooth_function(int k);
/// Random trigonometric sum in the real coordinates, frequencies up to 8.
BoundaryFunction rough_random(std::uint64_t seed);
/// log d(w, anchor), floored at d = 1e-14.
BoundaryFunction log_singular(const DefiningFunction& domain, const CVec& anchor);
/// Smoothed indicator of the quasiball B(center, radius), transition width `width`.
BoundaryFunction indicator_smoothed(const DefiningFunction& domain, const CVec& center,
                                    double radius, double width);
BoundaryFunction constant_function(cplx c);
/// c * g.
BoundaryFunction scaled(const BoundaryFunction& g, cplx c);
/// g + c.
BoundaryFunction shifted(const BoundaryFunction& g, cplx c);

/// `size` members cycling smooth, rough random and smoothed indicators.
std::vector<BoundaryFunction> default_family(const DefiningFunction& domain, int size,
                                             std::uint64_t seed);

/// V(tau, w)^{-(n+l)}. Throws SingularPairing below 1e-14.
cplx area_integrand(const DefiningFunction& domain, const CVec& tau, const CVec& w, int l);

/// Region grid of D^e(z) and the inner boundary grids (one focused grid per
/// level, refined to the level height).
struct AreaResolution {
  RegionResolution region{6, 2, 4, 2, 6.0};
  FocusOptions inner{6, 12, 0.5};
  /// Largest inner grid allowed; ResolutionBudgetExceeded beyond it.
  std::size_t max_inner_nodes = 2000000;
};
AreaResolution area_production();
AreaResolution area_refined();

/// Inner integrals F_m(tau) = sum_i g_m(w_i) V(tau, w_i)^{-(n+l)} S_i for every
/// node of `region` (row index) and family member (column index). Nodes of one
/// level share the focused grid of that level.
Eigen::MatrixXcd inner_integrals(const DefiningFunction& domain, const RegionGrid& region,
                                 const std::vector<BoundaryFunction>& family, int l,
                                 const AreaResolution& res);

/// I_l(g_m, z) for every family member at one boundary point.
std::vector<double> area_integral_family(const DefiningFunction& domain,
                                         const std::vector<BoundaryFunction>& family,
                                         const CVec& z, int l, double eta, double eps,
                                         const AreaResolution& res);
double area_integral_Il(const DefiningFunction& domain, const BoundaryFunction& g, const CVec& z,
                        int l, double eta, double eps, const AreaResolution& res);

enum class MeasureKind { sigma, S };

/// (sum |g(xi_i)|^p weight_i)^{1/p}.
double lp_norm(const SurfaceGrid& grid, const BoundaryFunction& g, double p,
               MeasureKind measure = MeasureKind::sigma);

/// Boundary design: radial images of `count` Halton directions, with sigma
/// weights (2 pi^2 / count) dsigma/dOmega.
struct BoundaryDesign {
  std::vector<CVec> points;
  std::vector<double> weights;
};
BoundaryDesign boundary_design(const DefiningFunction& domain, int count);

struct QuasiballFamily {
  std::vector<CVec> centers;
  std::vector<double> radii;
};
/// Halton centers x radii 2^-1 .. 2^-levels.
QuasiballFamily default_ball_family(const DefiningFunction& domain, int centers, int levels);

struct BmoResult {
  double value = 0.0;
  int balls_used = 0;
  int balls_skipped = 0;  // fewer than 50 grid nodes inside
};
/// Max over the family of (1/sigma(B)) int_B |g - g_B| dsigma on grid nodes.
BmoResult bmo_seminorm(const DefiningFunction& domain, const SurfaceGrid& grid,
                       const BoundaryFunction& g, const QuasiballFamily& family);
/// Same on precomputed node values (grid order).
BmoResult bmo_seminorm_values(const DefiningFunction& domain, const SurfaceGrid& grid,
                              const std::vector<double>& values, const QuasiballFamily& family,
                              int min_nodes = 50);

struct LpOptions {
  std::vector<double> p_list{2.0, 4.0};
  int l = 1;
  double eta = 0.1;
  double eps = 0.1;
  int design_points = 48;
  std::vector<int> growth_sizes{10, 15, 20, 25, 30};
};
/// Theorem-level L^p check: ratios ||I_l g||_p / ||g||_p at production and
/// refined resolution, refinement stability, and the family-growth trend.
VerificationReport lp_inequality_report(const DefiningFunction& domain,
                                        const std::vector<BoundaryFunction>& family,
                                        const LpOptions& opt);

struct BmoOptions {
  int l = 1;
  double eta = 0.1;
  double eps = 0.1;
  int centers = 6;          // balls for the BMO seminorm of I_l g
  std::vector<double> radii{0.5, 0.25, 0.125};
  double design_spacing = 0.5;  // patch spacing relative to the radius, midpoint rule
};
/// BMO check: bmo(I_l g) / bmo(g) for non-constant members, the constant
/// control, and the g -> g + 1 shift.
VerificationReport bmo_inequality_report(const DefiningFunction& domain,
                                         const std::vector<BoundaryFunction>& family,
                                         const BmoOptions& opt);

}  // namespace clf
