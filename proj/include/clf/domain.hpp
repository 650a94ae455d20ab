#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "clf/types.hpp"

namespace clf {

enum class DomainKind { ball, ellipsoid, perturbed_ball };

/// Configuration record selecting a catalog domain.
struct DomainConfig {
  DomainKind kind = DomainKind::ball;
  std::vector<double> params;  // ellipsoid: semi-axes; perturbed_ball: {delta}
  CVec center = CVec::Zero();
  double epsilon = 0.1;  // shell half-width
  double eta = 0.1;      // Koranyi aperture
};

DomainKind parse_domain_kind(const std::string& name);
std::string to_string(DomainKind kind);

/// Value and analytic derivatives of rho at a point.
struct CJet {
  double value = 0.0;
  CVec gradient;  // component k is d rho / d z_k
  CMat hermitian_hessian;    // (j,k) = d^2 rho / dz_j dzbar_k
  CMat holomorphic_hessian;  // (j,k) = d^2 rho / dz_j dz_k

  /// Gradient of rho in R^4 packed as a complex vector (x_k + i y_k components).
  CVec real_gradient() const { return 2.0 * gradient.conjugate(); }
  /// Full 4x4 real Hessian d^2 rho in coordinates (x1, y1, x2, y2).
  RMat real_hessian() const;
};

/// Strongly convex defining function from the catalog:
///   ball            |u|^2 - 1
///   ellipsoid       sum |u_k|^2 / a_k^2 - 1
///   perturbed_ball  |u|^2 - 1 + delta Re(u_1^3)
/// with u = z - center.
class DefiningFunction {
 public:
  static DefiningFunction ball(const CVec& center = CVec::Zero());
  static DefiningFunction ellipsoid(std::array<double, kDim> axes, const CVec& center = CVec::Zero());
  static DefiningFunction perturbed_ball(double delta, const CVec& center = CVec::Zero());
  static DefiningFunction from_config(const DomainConfig& config);

  int dimension() const { return kDim; }
  DomainKind kind() const { return kind_; }
  std::string tag() const;
  const CVec& center() const { return center_; }
  const std::array<double, kDim>& axes() const { return axes_; }
  double delta() const { return delta_; }

  double value(const CVec& z) const;
  CJet jet(const CVec& z) const;

  /// Linear shape map used to precondition ray parametrizations (diag of axes).
  double shape(int k) const { return axes_[k]; }
  /// Radius beyond which rho is positive along every ray from the center.
  double search_radius() const;

 private:
  DomainKind kind_ = DomainKind::ball;
  std::array<double, kDim> axes_{1.0, 1.0};
  double delta_ = 0.0;
  CVec center_ = CVec::Zero();
};

CJet eval_jet(const DefiningFunction& domain, const CVec& z);

/// Minimum over sampled shell points |rho| <= eps of the smallest eigenvalue of
/// the real Hessian. Throws NonConvexShell when the minimum is not positive.
double strong_convexity_margin(const DefiningFunction& domain, double eps, int samples,
                               std::uint64_t seed);

/// Point origin + r * dir with rho = t (r > 0). Throws RootNotBracketed.
CVec ray_boundary_point(const DefiningFunction& domain, const CVec& origin, const CVec& dir,
                        double t);

/// Point on the ray from the domain center in direction omega with rho = t.
CVec radial_boundary_point(const DefiningFunction& domain, const CVec& omega, double t);

/// Nearest point of the boundary {rho = 0} to z (|rho(z)| <= eps).
CVec project_to_boundary(const DefiningFunction& domain, const CVec& z);
/// Same stationarity solve started from the boundary point w0.
CVec project_to_boundary_from(const DefiningFunction& domain, const CVec& z, const CVec& w0);

struct TangentFrame {
  CVec base;
  CVec normal;   // complex normal dbar rho / |dbar rho|
  CVec tangent;  // unit complex tangent vector, <d rho, tangent> = 0
  std::array<CVec, kRealDim - 1> real_tangent;  // i*normal, tangent, i*tangent
  double grad_norm = 0.0;                       // |d rho(base)|
};

/// Frame at a boundary point. `seed` fixes the Gram-Schmidt starting vector so
/// that nearby frames vary smoothly; by default the best-conditioned basis vector.
TangentFrame tangent_frame(const DefiningFunction& domain, const CVec& xi,
                           const CVec* seed = nullptr);
/// Same construction without the on-boundary precondition (level sets, tests).
TangentFrame frame_at(const DefiningFunction& domain, const CVec& xi, const CVec* seed = nullptr);

struct TangentSplit {
  cplx w;  // coefficient along the complex tangent vector
  cplx t;  // coefficient along the complex normal
};

/// tau - base = w * tangent + t * normal.
TangentSplit tangent_decompose(const TangentFrame& frame, const CVec& tau);

/// d(w, z) = |<d rho(w), w - z>|.
double quasimetric(const DefiningFunction& domain, const CVec& w, const CVec& z);
inline double quasimetric_with_gradient(const CVec& grad_w, const CVec& w, const CVec& z) {
  return std::abs(pairing(grad_w, w - z));
}

struct Quasiball {
  CVec center;
  double radius = 0.0;
  bool contains(const DefiningFunction& domain, const CVec& w) const {
    return quasimetric(domain, w, center) < radius;
  }
};

}  // namespace clf
