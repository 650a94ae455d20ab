#pragma once

#include <string>
#include <vector>

#include "clf/domain.hpp"

namespace clf {

/// Per-axis node counts of the Hopf-angle product grid on S^3.
struct SurfaceResolution {
  int n_theta = 48;  // Gauss-Legendre in theta
  int n_phi = 160;   // trapezoid in each of phi1, phi2
};

/// Quadrature on the level set {rho = t}: Euclidean weights sigma and
/// Leray-Levy weights S = sigma * leray_levy_density.
struct SurfaceGrid {
  double level = 0.0;
  SurfaceResolution resolution;
  std::vector<CVec> points;
  std::vector<double> sigma;
  std::vector<double> S;

  std::size_t size() const { return points.size(); }
  double total_sigma() const;
  double total_S() const;
};

/// Density of dS against dsigma at a point of a level set: |omega| on an
/// orthonormal real tangent frame.
double leray_levy_density(const DefiningFunction& domain, const CVec& xi);

/// |(ddbar rho)^n| against the standard volume element of R^4.
double volume_density(const DefiningFunction& domain, const CVec& z);

/// Normalization turning the (2n-1)- and 2n-forms into dS and dV.
inline constexpr double kFormScale = 1.0 / (4.0 * kPi * kPi);

SurfaceGrid build_surface_grid(const DefiningFunction& domain, double t,
                               const SurfaceResolution& res = {});

/// Grid refined geometrically around a boundary point. Rays are cast from an
/// interior point below `focus`; the angular rules are graded so that panels
/// near the focus have quasimetric size about `scale`.
struct FocusOptions {
  int q = 6;          // Gauss points per panel
  int n_phi2 = 12;    // trapezoid nodes in the tangential phase
  double cap = 0.5;   // widest panel (radians)
};

SurfaceGrid build_focused_grid(const DefiningFunction& domain, double t, const CVec& focus,
                               double scale, const FocusOptions& opt = {});

/// Local grid over a box of Hopf angles covering the quasiball B(center, radius)
/// on the boundary, with uniform panels of quasimetric size about `spacing`.
/// The box covers the quasiball, so functions supported there need no other nodes.
SurfaceGrid build_patch_grid(const DefiningFunction& domain, const CVec& center, double radius,
                             double spacing, int q = 4, int n_phi2 = 12);

/// Quadrature of dV over Omega_t (or Lebesgue measure when `lebesgue` is read).
struct VolumeGrid {
  std::vector<CVec> points;
  std::vector<double> lebesgue;
  std::vector<double> dV;
  std::size_t size() const { return points.size(); }
};

VolumeGrid build_volume_grid(const DefiningFunction& domain, double t, const CVec& focus,
                             double scale, const FocusOptions& opt = {}, int n_radial_q = 8);

/// sigma-measure of the quasiball {w : d(w, center) < radius} on the grid.
/// Throws ResolutionTooCoarse when fewer than 50 nodes fall inside.
double quasiball_measure(const DefiningFunction& domain, const SurfaceGrid& grid,
                         const Quasiball& ball, int min_nodes = 50);

// Node-table cache. The key encodes (domain, t, resolution); the file carries
// an FNV-1a checksum over its numeric payload.
std::string surface_cache_key(const DefiningFunction& domain, double t,
                              const SurfaceResolution& res);
void write_surface_grid(const SurfaceGrid& grid, const std::string& path, const std::string& key);
SurfaceGrid read_surface_grid(const std::string& path, const std::string& expected_key);
/// Build, or load from `cache_dir` when a matching table exists. Empty dir disables caching.
SurfaceGrid cached_surface_grid(const DefiningFunction& domain, double t,
                                const SurfaceResolution& res, const std::string& cache_dir);

}  // namespace clf
