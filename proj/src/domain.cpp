#include "clf/domain.hpp"

#include <algorithm>
#include <cmath>

#include "clf/numerics.hpp"

namespace clf {

DomainKind parse_domain_kind(const std::string& name) {
  if (name == "ball") return DomainKind::ball;
  if (name == "ellipsoid") return DomainKind::ellipsoid;
  if (name == "perturbed_ball") return DomainKind::perturbed_ball;
  throw ConfigError("unknown domain kind '" + name + "'");
}

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::ball: return "ball";
    case DomainKind::ellipsoid: return "ellipsoid";
    case DomainKind::perturbed_ball: return "perturbed_ball";
  }
  return "?";
}

RMat CJet::real_hessian() const {
  // d^2 rho(a, b) = 2 Re(a^T A b) + 2 Re(sum_jk H_jk a_j conj(b_k)) for real
  // tangent vectors a, b written as complex vectors.
  std::array<CVec, kRealDim> e;
  for (int k = 0; k < kRealDim; ++k) {
    RVec x = RVec::Zero();
    x[k] = 1.0;
    e[k] = to_complex(x);
  }
  RMat m;
  for (int i = 0; i < kRealDim; ++i) {
    for (int j = 0; j < kRealDim; ++j) {
      cplx hol = (e[i].transpose() * holomorphic_hessian * e[j])(0, 0);
      cplx herm = (e[i].transpose() * hermitian_hessian * e[j].conjugate())(0, 0);
      m(i, j) = 2.0 * hol.real() + 2.0 * herm.real();
    }
  }
  return m;
}

DefiningFunction DefiningFunction::ball(const CVec& center) {
  DefiningFunction f;
  f.kind_ = DomainKind::ball;
  f.center_ = center;
  return f;
}

DefiningFunction DefiningFunction::ellipsoid(std::array<double, kDim> axes, const CVec& center) {
  for (double a : axes)
    if (!(a > 0.0)) throw ConfigError("ellipsoid semi-axes must be positive");
  DefiningFunction f;
  f.kind_ = DomainKind::ellipsoid;
  f.axes_ = axes;
  f.center_ = center;
  return f;
}

DefiningFunction DefiningFunction::perturbed_ball(double delta, const CVec& center) {
  DefiningFunction f;
  f.kind_ = DomainKind::perturbed_ball;
  f.delta_ = delta;
  f.center_ = center;
  return f;
}

DefiningFunction DefiningFunction::from_config(const DomainConfig& config) {
  switch (config.kind) {
    case DomainKind::ball:
      return ball(config.center);
    case DomainKind::ellipsoid: {
      if (config.params.size() != kDim) throw ConfigError("ellipsoid needs 2 semi-axes");
      return ellipsoid({config.params[0], config.params[1]}, config.center);
    }
    case DomainKind::perturbed_ball: {
      if (config.params.size() != 1) throw ConfigError("perturbed_ball needs {delta}");
      return perturbed_ball(config.params[0], config.center);
    }
  }
  throw ConfigError("unknown domain");
}

std::string DefiningFunction::tag() const {
  switch (kind_) {
    case DomainKind::ball: return "ball";
    case DomainKind::ellipsoid:
      return "ellipsoid(" + std::to_string(axes_[0]) + "," + std::to_string(axes_[1]) + ")";
    case DomainKind::perturbed_ball: return "perturbed_ball(" + std::to_string(delta_) + ")";
  }
  return "?";
}

double DefiningFunction::search_radius() const {
  return 3.0 * std::max(axes_[0], axes_[1]);
}

double DefiningFunction::value(const CVec& z) const {
  const CVec u = z - center_;
  switch (kind_) {
    case DomainKind::ball: return u.squaredNorm() - 1.0;
    case DomainKind::ellipsoid:
      return std::norm(u[0]) / (axes_[0] * axes_[0]) + std::norm(u[1]) / (axes_[1] * axes_[1]) - 1.0;
    case DomainKind::perturbed_ball:
      return u.squaredNorm() - 1.0 + delta_ * (u[0] * u[0] * u[0]).real();
  }
  return 0.0;
}

CJet DefiningFunction::jet(const CVec& z) const {
  const CVec u = z - center_;
  CJet j;
  j.value = value(z);
  j.holomorphic_hessian = CMat::Zero();
  switch (kind_) {
    case DomainKind::ball:
      j.gradient = u.conjugate();
      j.hermitian_hessian = CMat::Identity();
      break;
    case DomainKind::ellipsoid:
      j.hermitian_hessian = CMat::Zero();
      for (int k = 0; k < kDim; ++k) {
        const double s = 1.0 / (axes_[k] * axes_[k]);
        j.gradient[k] = s * std::conj(u[k]);
        j.hermitian_hessian(k, k) = s;
      }
      break;
    case DomainKind::perturbed_ball:
      // Re(u1^3) = (u1^3 + conj(u1)^3) / 2
      j.gradient = u.conjugate();
      j.gradient[0] += 1.5 * delta_ * u[0] * u[0];
      j.hermitian_hessian = CMat::Identity();
      j.holomorphic_hessian(0, 0) = 3.0 * delta_ * u[0];
      break;
  }
  return j;
}

CJet eval_jet(const DefiningFunction& domain, const CVec& z) { return domain.jet(z); }

CVec ray_boundary_point(const DefiningFunction& domain, const CVec& origin, const CVec& dir,
                        double t) {
  auto f = [&](double r) { return domain.value(origin + r * dir) - t; };
  double lo = 0.0, hi = domain.search_radius() / std::max(dir.norm(), 1e-300);
  double flo = f(lo), fhi = f(hi);
  if (!(flo < 0.0)) throw RootNotBracketed("ray origin is not inside the level set");
  if (!(fhi > 0.0)) throw RootNotBracketed("level set not reached within the search radius");
  // Start Newton from the secant estimate; keep the bracket for safety.
  double r = lo - flo * (hi - lo) / (fhi - flo);
  for (int it = 0; it < 200; ++it) {
    const CVec x = origin + r * dir;
    const CJet jt = domain.jet(x);
    const double fr = jt.value - t;
    if (fr < 0.0) lo = r; else hi = r;
    if (std::abs(fr) <= 1e-14) return x;
    const double df = 2.0 * pairing(jt.gradient, dir).real();
    double next = r - fr / df;
    if (!(df > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= 1e-16 * std::max(1.0, r) || hi - lo <= 1e-15 * std::max(1.0, r)) {
      r = next;
      break;
    }
    r = next;
  }
  return origin + r * dir;
}

CVec radial_boundary_point(const DefiningFunction& domain, const CVec& omega, double t) {
  return ray_boundary_point(domain, domain.center(), omega, t);
}

double strong_convexity_margin(const DefiningFunction& domain, double eps, int samples,
                               std::uint64_t seed) {
  if (!(eps > 0.0)) throw ConfigError("shell width must be positive");
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const CVec omega = random_unit_vector(seed, 11, i);
    const double t = eps * (2.0 * uniform01(seed, 12, i) - 1.0);
    CVec x;
    try {
      x = radial_boundary_point(domain, omega, t);
    } catch (const RootNotBracketed&) {
      throw NonConvexShell("shell level set is not star-shaped about the center");
    }
    Eigen::SelfAdjointEigenSolver<RMat> es(domain.jet(x).real_hessian(), Eigen::EigenvaluesOnly);
    margin = std::min(margin, es.eigenvalues()[0]);
  }
  if (!(margin > 0.0)) throw NonConvexShell("real Hessian is not positive definite on the shell");
  return margin;
}

CVec project_to_boundary(const DefiningFunction& domain, const CVec& z) {
  CVec dir = z - domain.center();
  if (dir.norm() < 1e-12) dir = CVec::Unit(0);
  return project_to_boundary_from(domain, z, radial_boundary_point(domain, dir / dir.norm(), 0.0));
}

CVec project_to_boundary_from(const DefiningFunction& domain, const CVec& z, const CVec& w0) {
  // Unknowns (w, lambda) in R^5: w - z + lambda grad rho(w) = 0, rho(w) = 0.
  using Vec5 = Eigen::Matrix<double, kRealDim + 1, 1>;
  using Mat5 = Eigen::Matrix<double, kRealDim + 1, kRealDim + 1>;
  const RVec zr = to_real(z);

  auto residual = [&](const Vec5& s) {
    const CJet jt = domain.jet(to_complex(s.head<kRealDim>()));
    const RVec g = to_real(jt.real_gradient());
    Vec5 r;
    r.head<kRealDim>() = s.head<kRealDim>() - zr + s[kRealDim] * g;
    r[kRealDim] = jt.value;
    return r;
  };

  Vec5 s;
  s.head<kRealDim>() = to_real(w0);
  {
    const RVec g = to_real(domain.jet(w0).real_gradient());
    s[kRealDim] = (zr - s.head<kRealDim>()).dot(g) / g.squaredNorm();
  }
  Vec5 r = residual(s);
  for (int it = 0; it < 60; ++it) {
    if (r.norm() < 1e-14) break;
    const CJet jt = domain.jet(to_complex(s.head<kRealDim>()));
    const RVec g = to_real(jt.real_gradient());
    Mat5 jac = Mat5::Zero();
    jac.topLeftCorner<kRealDim, kRealDim>() = RMat::Identity() + s[kRealDim] * jt.real_hessian();
    jac.block<kRealDim, 1>(0, kRealDim) = g;
    jac.block<1, kRealDim>(kRealDim, 0) = g.transpose();
    const Vec5 step = jac.fullPivLu().solve(-r);
    double damp = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      Vec5 trial = s + damp * step;
      Vec5 rt = residual(trial);
      if (rt.norm() < r.norm() || rt.norm() < 1e-14) {
        s = trial;
        r = rt;
        accepted = true;
        break;
      }
      damp *= 0.5;
    }
    if (!accepted) break;
  }
  CVec w = to_complex(s.head<kRealDim>());
  if (r.norm() > 1e-10) {
    // Fallback: alternate the gradient line through z with bisection onto the level set.
    const double rz = domain.value(z);
    bool done = false;
    for (int it = 0; it < 200 && !done; ++it) {
      CVec g = domain.jet(w).real_gradient();
      g /= g.norm();
      const double side = rz > 0.0 ? -1.0 : 1.0;
      auto f = [&](double s) { return domain.value(z + side * s * g); };
      double lo = 0.0, hi = domain.search_radius();
      if (f(lo) * f(hi) > 0.0) break;
      for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) > 0.0) == (f(lo) > 0.0)) lo = mid; else hi = mid;
      }
      const CVec next = z + side * 0.5 * (lo + hi) * g;
      done = (next - w).norm() < 1e-13;
      w = next;
    }
    if (!done) throw NoConvergence("projection to the boundary did not converge");
  }
  // Polish: put w exactly on the level set along its own gradient.
  const CJet jt = domain.jet(w);
  const CVec g = jt.real_gradient();
  w -= (jt.value / g.squaredNorm()) * g;
  return w;
}

TangentFrame frame_at(const DefiningFunction& domain, const CVec& xi, const CVec* seed) {
  const CJet jt = domain.jet(xi);
  const double gn = jt.gradient.norm();
  if (gn < 1e-10) throw DegenerateGradient("complex gradient vanishes at the base point");
  TangentFrame f;
  f.base = xi;
  f.grad_norm = gn;
  f.normal = jt.gradient.conjugate() / gn;
  CVec start;
  if (seed != nullptr) {
    start = *seed;
  } else {
    // Basis vector with the largest component orthogonal to the normal.
    int best = 0;
    double best_res = -1.0;
    for (int k = 0; k < kDim; ++k) {
      const double res = 1.0 - std::norm(f.normal[k]);
      if (res > best_res + 1e-12) best_res = res, best = k;
    }
    start = CVec::Unit(best);
  }
  CVec v = start - hdot(f.normal, start) * f.normal;
  if (v.norm() < 1e-8) throw DegenerateGradient("tangent seed is parallel to the normal");
  f.tangent = v / v.norm();
  const cplx i(0.0, 1.0);
  f.real_tangent = {i * f.normal, f.tangent, i * f.tangent};
  return f;
}

TangentFrame tangent_frame(const DefiningFunction& domain, const CVec& xi, const CVec* seed) {
  if (std::abs(domain.value(xi)) > 1e-10)
    throw Error("tangent_frame requires a boundary point");
  return frame_at(domain, xi, seed);
}

TangentSplit tangent_decompose(const TangentFrame& frame, const CVec& tau) {
  const CVec d = tau - frame.base;
  return {hdot(frame.tangent, d), hdot(frame.normal, d)};
}

double quasimetric(const DefiningFunction& domain, const CVec& w, const CVec& z) {
  return std::abs(pairing(domain.jet(w).gradient, w - z));
}

}  // namespace clf
