#include "clf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "clf/numerics.hpp"

namespace clf {

double SurfaceGrid::total_sigma() const { return pairwise_sum(sigma); }
double SurfaceGrid::total_S() const { return pairwise_sum(S); }

namespace {

// (ddbar rho)(a, b) = sum_jk H_kj (conj(a_j) b_k - conj(b_j) a_k)
cplx levi_form(const CMat& h, const CVec& a, const CVec& b) {
  cplx s = 0.0;
  for (int j = 0; j < kDim; ++j)
    for (int k = 0; k < kDim; ++k)
      s += h(k, j) * (std::conj(a[j]) * b[k] - std::conj(b[j]) * a[k]);
  return s;
}

}  // namespace

double leray_levy_density(const DefiningFunction& domain, const CVec& xi) {
  const CJet j = domain.jet(xi);
  const TangentFrame f = frame_at(domain, xi);
  const auto& t = f.real_tangent;
  const CMat& h = j.hermitian_hessian;
  auto alpha = [&](const CVec& a) { return pairing(j.gradient, a); };
  // 1-form wedge 2-form on three vectors; the 6-term sum collapses pairwise
  // because the 2-form is alternating.
  const cplx w = alpha(t[0]) * levi_form(h, t[1], t[2]) - alpha(t[1]) * levi_form(h, t[0], t[2]) +
                 alpha(t[2]) * levi_form(h, t[0], t[1]);
  return std::abs(w) * kFormScale;
}

double volume_density(const DefiningFunction& domain, const CVec& z) {
  const CMat h = domain.jet(z).hermitian_hessian;
  std::array<CVec, kRealDim> e;
  for (int k = 0; k < kRealDim; ++k) {
    RVec x = RVec::Zero();
    x[k] = 1.0;
    e[k] = to_complex(x);
  }
  auto b = [&](int i, int j) { return levi_form(h, e[i], e[j]); };
  // (beta ^ beta)(e1..e4) = 2 (b12 b34 - b13 b24 + b14 b23)
  const cplx w = 2.0 * (b(0, 1) * b(2, 3) - b(0, 2) * b(1, 3) + b(0, 3) * b(1, 2));
  return std::abs(w);
}

SurfaceGrid build_surface_grid(const DefiningFunction& domain, double t,
                               const SurfaceResolution& res) {
  if (res.n_theta < 1 || res.n_phi < 1) throw ConfigError("surface resolution must be positive");
  const Rule th = gauss_legendre(res.n_theta, 0.0, 0.5 * kPi);
  const Rule ph = periodic_trapezoid(res.n_phi, 0.0, 2.0 * kPi);
  const std::size_t nphi = res.n_phi;
  const std::size_t n = th.size() * nphi * nphi;
  const double a1 = domain.shape(0), a2 = domain.shape(1);
  const double det_l = a1 * a1 * a2 * a2;

  SurfaceGrid g;
  g.level = t;
  g.resolution = res;
  g.points.resize(n);
  g.sigma.resize(n);
  g.S.resize(n);
  const CVec c = domain.center();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(n); ++idx) {
    const std::size_t i = idx / (nphi * nphi);
    const std::size_t j = (idx / nphi) % nphi;
    const std::size_t k = idx % nphi;
    const double ct = std::cos(th.x[i]), st = std::sin(th.x[i]);
    CVec d;
    d[0] = a1 * std::polar(ct, ph.x[j]);
    d[1] = a2 * std::polar(st, ph.x[k]);
    const CVec x = ray_boundary_point(domain, c, d, t);
    const CJet jt = domain.jet(x);
    const double rr = (x - c).norm();
    const CVec om = (x - c) / rr;
    const double gn = 2.0 * jt.gradient.norm();
    const double gdot = 2.0 * pairing(jt.gradient, om).real();
    const double dn = d.norm();
    const double w = th.w[i] * ph.w[j] * ph.w[k] * st * ct;
    g.points[idx] = x;
    g.sigma[idx] = rr * rr * rr * gn / gdot * det_l / (dn * dn * dn * dn) * w;
    g.S[idx] = g.sigma[idx] * leray_levy_density(domain, x);
  }
  return g;
}

namespace {

struct FocusGeometry {
  CVec origin;
  CVec a, b;  // Hopf frame: a = outward normal at the focus, b = complex tangent
  double h = 0.0;
  double grad_norm = 1.0;
};

FocusGeometry focus_geometry(const DefiningFunction& domain, double t, const CVec& focus) {
  const TangentFrame f = frame_at(domain, focus);
  FocusGeometry g;
  g.a = f.normal;
  g.b = f.tangent;
  g.grad_norm = f.grad_norm;
  // Half the support distance from the center, shrunk until the origin sits
  // well inside the level set.
  g.h = 0.5 * hdot(f.normal, focus - domain.center()).real();
  if (!(g.h > 0.0)) throw Error("focus is not star-shaped about the center");
  for (int it = 0; it < 60; ++it) {
    g.origin = focus - g.h * g.a;
    if (domain.value(g.origin) < t - 1e-3) return g;
    g.h *= 0.5;
  }
  throw Error("could not place an interior origin below the focus");
}

struct AngularRules {
  Rule theta, phi1, phi2;
};

AngularRules focus_rules(const FocusGeometry& fg, double scale, const FocusOptions& opt) {
  AngularRules r;
  // Normal phase: quasimetric grows linearly, d ~ |d rho| h phi1.
  const double s1 = std::clamp(scale / (fg.grad_norm * fg.h), 1e-12, opt.cap);
  // Tangential angle: d grows quadratically, d ~ (h theta)^2.
  const double s0 = std::clamp(std::sqrt(scale) / fg.h, 1e-9, opt.cap);
  r.phi1 = graded_rule(-kPi, kPi, 0.0, s1, opt.q, opt.cap);
  r.theta = graded_rule(0.0, 0.5 * kPi, 0.0, s0, opt.q, opt.cap);
  r.phi2 = periodic_trapezoid(opt.n_phi2, 0.0, 2.0 * kPi);
  return r;
}

}  // namespace

namespace {

SurfaceGrid fill_focused(const DefiningFunction& domain, double t, const FocusGeometry& fg,
                         const AngularRules& ar) {
  const std::size_t n0 = ar.theta.size(), n1 = ar.phi1.size(), n2 = ar.phi2.size();
  const std::size_t n = n0 * n1 * n2;
  SurfaceGrid g;
  g.level = t;
  g.resolution = {static_cast<int>(n0), static_cast<int>(n1)};
  g.points.resize(n);
  g.sigma.resize(n);
  g.S.resize(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(n); ++idx) {
    const std::size_t i = idx / (n1 * n2);
    const std::size_t j = (idx / n2) % n1;
    const std::size_t k = idx % n2;
    const double ct = std::cos(ar.theta.x[i]), st = std::sin(ar.theta.x[i]);
    const CVec zeta = std::polar(ct, ar.phi1.x[j]) * fg.a + std::polar(st, ar.phi2.x[k]) * fg.b;
    const CVec x = ray_boundary_point(domain, fg.origin, zeta, t);
    const CJet jt = domain.jet(x);
    const double rr = (x - fg.origin).norm();
    const double gn = 2.0 * jt.gradient.norm();
    const double gdot = 2.0 * pairing(jt.gradient, zeta).real();
    const double w = ar.theta.w[i] * ar.phi1.w[j] * ar.phi2.w[k] * st * ct;
    g.points[idx] = x;
    g.sigma[idx] = rr * rr * rr * gn / gdot * w;
    g.S[idx] = g.sigma[idx] * leray_levy_density(domain, x);
  }
  return g;
}

}  // namespace

SurfaceGrid build_focused_grid(const DefiningFunction& domain, double t, const CVec& focus,
                               double scale, const FocusOptions& opt) {
  if (!(scale > 0.0)) throw ConfigError("focus scale must be positive");
  const FocusGeometry fg = focus_geometry(domain, t, focus);
  return fill_focused(domain, t, fg, focus_rules(fg, scale, opt));
}

SurfaceGrid build_patch_grid(const DefiningFunction& domain, const CVec& center, double radius,
                             double spacing, int q, int n_phi2) {
  if (!(radius > 0.0) || !(spacing > 0.0)) throw ConfigError("patch radius and spacing must be positive");
  const FocusGeometry fg = focus_geometry(domain, 0.0, center);
  Eigen::SelfAdjointEigenSolver<CMat> es(domain.jet(center).hermitian_hessian, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()[0];
  // d ~ |d rho| h |phi1| in the normal phase, d ~ lmin (h theta)^2 tangentially;
  // the box is twice the quasiball in both.
  const double phi_max = std::min(kPi, 2.0 * radius / (fg.grad_norm * fg.h));
  const double theta_max = std::min(0.5 * kPi, 2.0 * std::sqrt(radius / lmin) / fg.h);
  const double s1 = spacing / (fg.grad_norm * fg.h);
  const double s0 = std::sqrt(spacing / lmin) / fg.h;
  AngularRules ar;
  ar.phi1 = graded_rule(-phi_max, phi_max, 0.0, s1, q, s1);
  ar.theta = graded_rule(0.0, theta_max, 0.0, s0, q, s0);
  ar.phi2 = periodic_trapezoid(n_phi2, 0.0, 2.0 * kPi);
  return fill_focused(domain, 0.0, fg, ar);
}

VolumeGrid build_volume_grid(const DefiningFunction& domain, double t, const CVec& focus,
                             double scale, const FocusOptions& opt, int n_radial_q) {
  const FocusGeometry fg = focus_geometry(domain, t, focus);
  const AngularRules ar = focus_rules(fg, scale, opt);
  // Radial fraction lambda in (0,1), graded towards the boundary.
  const Rule lam = graded_rule(0.0, 1.0, 1.0, std::clamp(scale / fg.h, 1e-12, 0.25), n_radial_q,
                               0.25);
  const std::size_t n0 = ar.theta.size(), n1 = ar.phi1.size(), n2 = ar.phi2.size();
  const std::size_t na = n0 * n1 * n2, nl = lam.size();

  VolumeGrid v;
  v.points.resize(na * nl);
  v.lebesgue.resize(na * nl);
  v.dV.resize(na * nl);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(na); ++idx) {
    const std::size_t i = idx / (n1 * n2);
    const std::size_t j = (idx / n2) % n1;
    const std::size_t k = idx % n2;
    const double ct = std::cos(ar.theta.x[i]), st = std::sin(ar.theta.x[i]);
    const CVec zeta = std::polar(ct, ar.phi1.x[j]) * fg.a + std::polar(st, ar.phi2.x[k]) * fg.b;
    const CVec xb = ray_boundary_point(domain, fg.origin, zeta, t);
    const double rb = (xb - fg.origin).norm();
    const double w = ar.theta.w[i] * ar.phi1.w[j] * ar.phi2.w[k] * st * ct;
    for (std::size_t m = 0; m < nl; ++m) {
      const double l = lam.x[m];
      const CVec x = fg.origin + (l * rb) * zeta;
      const std::size_t out = idx * nl + m;
      v.points[out] = x;
      v.lebesgue[out] = l * l * l * rb * rb * rb * rb * lam.w[m] * w;
      v.dV[out] = v.lebesgue[out] * volume_density(domain, x) * kFormScale;
    }
  }
  return v;
}

double quasiball_measure(const DefiningFunction& domain, const SurfaceGrid& grid,
                         const Quasiball& ball, int min_nodes) {
  if (!(ball.radius > 0.0)) return 0.0;
  std::vector<double> in(grid.size(), 0.0);
  std::ptrdiff_t count = 0;
#pragma omp parallel for reduction(+ : count)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(grid.size()); ++i) {
    if (quasimetric(domain, grid.points[i], ball.center) < ball.radius) {
      in[i] = grid.sigma[i];
      ++count;
    }
  }
  if (count < min_nodes)
    throw ResolutionTooCoarse("quasiball holds " + std::to_string(count) + " grid nodes");
  return pairwise_sum(in);
}

// ---------------------------------------------------------------- cache I/O

namespace {

constexpr char kMagic[8] = {'C', 'L', 'F', 'G', 'R', 'I', 'D', '1'};

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t grid_checksum(const SurfaceGrid& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(&g.level, sizeof(double), h);
  h = fnv1a(g.points.data(), g.points.size() * sizeof(CVec), h);
  h = fnv1a(g.sigma.data(), g.sigma.size() * sizeof(double), h);
  h = fnv1a(g.S.data(), g.S.size() * sizeof(double), h);
  return h;
}

template <class T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
void get(std::ifstream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw CacheCorruption("truncated grid file");
}

}  // namespace

std::string surface_cache_key(const DefiningFunction& domain, double t,
                              const SurfaceResolution& res) {
  std::ostringstream os;
  os.precision(17);
  os << domain.tag() << "|c=" << domain.center()[0] << domain.center()[1] << "|t=" << t
     << "|res=" << res.n_theta << "x" << res.n_phi;
  return os.str();
}

void write_surface_grid(const SurfaceGrid& grid, const std::string& path, const std::string& key) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write grid cache " + path);
  os.write(kMagic, sizeof(kMagic));
  put(os, static_cast<std::uint64_t>(key.size()));
  os.write(key.data(), static_cast<std::streamsize>(key.size()));
  put(os, grid.level);
  put(os, grid.resolution.n_theta);
  put(os, grid.resolution.n_phi);
  put(os, static_cast<std::uint64_t>(grid.size()));
  os.write(reinterpret_cast<const char*>(grid.points.data()),
           static_cast<std::streamsize>(grid.size() * sizeof(CVec)));
  os.write(reinterpret_cast<const char*>(grid.sigma.data()),
           static_cast<std::streamsize>(grid.size() * sizeof(double)));
  os.write(reinterpret_cast<const char*>(grid.S.data()),
           static_cast<std::streamsize>(grid.size() * sizeof(double)));
  put(os, grid_checksum(grid));
}

SurfaceGrid read_surface_grid(const std::string& path, const std::string& expected_key) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open grid cache " + path);
  char magic[sizeof(kMagic)];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw CacheCorruption("bad grid file header");
  std::uint64_t klen = 0;
  get(is, klen);
  if (klen > 4096) throw CacheCorruption("bad key length");
  std::string key(klen, '\0');
  is.read(key.data(), static_cast<std::streamsize>(klen));
  if (key != expected_key) throw CacheCorruption("grid cache key mismatch");
  SurfaceGrid g;
  get(is, g.level);
  get(is, g.resolution.n_theta);
  get(is, g.resolution.n_phi);
  std::uint64_t n = 0;
  get(is, n);
  if (n > (1ULL << 32)) throw CacheCorruption("bad node count");
  g.points.resize(n);
  g.sigma.resize(n);
  g.S.resize(n);
  is.read(reinterpret_cast<char*>(g.points.data()), static_cast<std::streamsize>(n * sizeof(CVec)));
  is.read(reinterpret_cast<char*>(g.sigma.data()), static_cast<std::streamsize>(n * sizeof(double)));
  is.read(reinterpret_cast<char*>(g.S.data()), static_cast<std::streamsize>(n * sizeof(double)));
  std::uint64_t sum = 0;
  get(is, sum);
  if (sum != grid_checksum(g)) throw CacheCorruption("grid checksum mismatch in " + path);
  return g;
}

SurfaceGrid cached_surface_grid(const DefiningFunction& domain, double t,
                                const SurfaceResolution& res, const std::string& cache_dir) {
  if (cache_dir.empty()) return build_surface_grid(domain, t, res);
  namespace fs = std::filesystem;
  const std::string key = surface_cache_key(domain, t, res);
  std::ostringstream name;
  name << "grid_" << std::hex << fnv1a(key.data(), key.size(), 0xcbf29ce484222325ULL) << ".bin";
  const fs::path path = fs::path(cache_dir) / name.str();
  if (fs::exists(path)) return read_surface_grid(path.string(), key);
  SurfaceGrid g = build_surface_grid(domain, t, res);
  fs::create_directories(cache_dir);
  const fs::path tmp = path.string() + ".tmp";
  write_surface_grid(g, tmp.string(), key);
  fs::rename(tmp, path);
  return g;
}

}  // namespace clf
