#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clf/types.hpp"

namespace clf {

/// 1-D quadrature rule (nodes and weights).
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

/// n-point Gauss-Legendre rule on [a, b].
Rule gauss_legendre(int n, double a, double b);

/// n-point periodic trapezoid rule on [a, a + period).
Rule periodic_trapezoid(int n, double a, double period);

/// Composite Gauss rule on [a, b] with panels refined geometrically towards
/// `focus`: panel edges sit at focus +/- scale * 2^k, no panel wider than `cap`.
/// `q` points per panel.
Rule graded_rule(double a, double b, double focus, double scale, int q, double cap);

/// Order-insensitive pairwise summation (result independent of thread schedule).
double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

// Counter-based random numbers: the value depends only on (seed, stream, index),
// so parallel sampling is reproducible regardless of scheduling.
std::uint64_t hash64(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
double normal01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Uniformly distributed unit vector of C^2 = R^4.
CVec random_unit_vector(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Radical-inverse (Halton) coordinate of index i in the given prime base.
double halton(std::uint64_t i, unsigned base);

/// Direction on S^3 from three numbers in [0,1): uniform in the Hopf sense.
CVec hopf_direction(double u, double a1, double a2);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Ordinary least squares with an intercept; returns coefficients
/// [intercept, b1, ..., bk] and R^2.
struct MultiFit {
  std::vector<double> coef;
  double r2 = 0.0;
};
MultiFit fit_linear(const std::vector<std::vector<double>>& columns, std::span<const double> y);

}  // namespace clf
