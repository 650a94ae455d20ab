#include "clf/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace clf {

Rule gauss_legendre(int n, double a, double b) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = mid - half * x;
    r.x[n - 1 - i] = mid + half * x;
    r.w[i] = r.w[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) r.x[n / 2] = mid;
  return r;
}

Rule periodic_trapezoid(int n, double a, double period) {
  Rule r;
  r.x.resize(n);
  r.w.assign(n, period / n);
  for (int i = 0; i < n; ++i) r.x[i] = a + period * i / n;
  return r;
}

namespace {

void append_panels(Rule& out, double lo, double hi, int q, double cap) {
  if (hi <= lo) return;
  int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / cap - 1e-12)));
  double h = (hi - lo) / pieces;
  for (int p = 0; p < pieces; ++p) {
    Rule g = gauss_legendre(q, lo + p * h, lo + (p + 1) * h);
    out.x.insert(out.x.end(), g.x.begin(), g.x.end());
    out.w.insert(out.w.end(), g.w.begin(), g.w.end());
  }
}

}  // namespace

Rule graded_rule(double a, double b, double focus, double scale, int q, double cap) {
  focus = std::clamp(focus, a, b);
  std::vector<double> edges{focus};
  for (double e = scale; focus + e < b; e *= 2.0) edges.push_back(focus + e);
  edges.push_back(b);
  std::vector<double> left{focus};
  for (double e = scale; focus - e > a; e *= 2.0) left.push_back(focus - e);
  left.push_back(a);
  std::reverse(left.begin(), left.end());
  left.pop_back();
  left.insert(left.end(), edges.begin(), edges.end());
  Rule out;
  for (std::size_t i = 0; i + 1 < left.size(); ++i) append_panels(out, left[i], left[i + 1], q, cap);
  return out;
}

namespace {

template <class T>
T pairwise_impl(const T* p, std::size_t n) {
  if (n <= 32) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_impl(p, h) + pairwise_impl(p + h, n - h);
}

}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise_impl(v.data(), v.size()); }
cplx pairwise_sum(std::span<const cplx> v) { return pairwise_impl(v.data(), v.size()); }

std::uint64_t hash64(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ stream) ^ index);
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return (hash64(seed, stream, index) >> 11) * 0x1.0p-53;
}

double normal01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  double u1 = uniform01(seed, stream, 2 * index);
  double u2 = uniform01(seed, stream, 2 * index + 1);
  u1 = std::max(u1, 1e-300);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

CVec random_unit_vector(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  RVec x;
  for (int k = 0; k < kRealDim; ++k) x[k] = normal01(seed, stream, kRealDim * index + k);
  return to_complex(x / x.norm());
}

double halton(std::uint64_t i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

CVec hopf_direction(double u, double a1, double a2) {
  // |z_1|^2 = 1 - u is uniform on [0,1] for the invariant measure of S^3.
  double c = std::sqrt(1.0 - u), s = std::sqrt(u);
  CVec z;
  z[0] = std::polar(c, 2.0 * kPi * a1);
  z[1] = std::polar(s, 2.0 * kPi * a2);
  return z;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  LineFit f;
  if (n < 2) return f;
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = syy - f.slope * sxy;
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  if (n > 2) f.slope_stderr = std::sqrt(std::max(sse, 0.0) / (n - 2) / sxx);
  return f;
}

MultiFit fit_linear(const std::vector<std::vector<double>>& columns, std::span<const double> y) {
  const Eigen::Index n = static_cast<Eigen::Index>(y.size());
  const Eigen::Index k = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd a(n, k + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    for (Eigen::Index j = 0; j < k; ++j) a(i, j + 1) = columns[j][i];
    b[i] = y[i];
  }
  Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  MultiFit f;
  f.coef.assign(c.data(), c.data() + c.size());
  double mean = b.mean();
  double sst = (b.array() - mean).square().sum();
  double sse = (a * c - b).squaredNorm();
  f.r2 = sst > 0 ? 1.0 - sse / sst : 1.0;
  return f;
}

}  // namespace clf
