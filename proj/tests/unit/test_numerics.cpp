#include <doctest.h>

#include <cmath>
#include <vector>

#include "clf/numerics.hpp"

using namespace clf;

TEST_CASE("gauss_legendre is exact for degree 2n-1") {
  const Rule r = gauss_legendre(4, -1.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::pow(r.x[i], 7);
  CHECK(s == doctest::Approx((std::pow(2.0, 8) - 1.0) / 8.0).epsilon(1e-13));
}

TEST_CASE("periodic trapezoid integrates trigonometric polynomials") {
  const Rule r = periodic_trapezoid(16, 0.3, 2.0 * kPi);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::pow(std::cos(r.x[i]), 4);
  CHECK(s == doctest::Approx(3.0 * kPi / 4.0).epsilon(1e-13));
}

TEST_CASE("graded rule resolves a square-root cusp") {
  const Rule r = graded_rule(0.0, 1.0, 0.4, 1e-8, 6, 0.25);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::sqrt(std::abs(r.x[i] - 0.4));
  const double exact = (2.0 / 3.0) * (std::pow(0.4, 1.5) + std::pow(0.6, 1.5));
  CHECK(s == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("pairwise sum does not depend on summation order") {
  std::vector<double> v;
  for (int i = 0; i < 1000; ++i) v.push_back(uniform01(3, 1, i) * std::pow(10.0, i % 7));
  std::vector<double> rev(v.rbegin(), v.rend());
  const double a = pairwise_sum(v);
  CHECK(std::abs(a - pairwise_sum(rev)) <= 1e-12 * std::abs(a));
}

TEST_CASE("counter-based random numbers") {
  CHECK(uniform01(5, 2, 17) == uniform01(5, 2, 17));
  CHECK(uniform01(5, 2, 17) != uniform01(5, 2, 18));
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = uniform01(1, 0, i);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    mean += u / 20000;
  }
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
  CHECK(random_unit_vector(1, 2, 3).norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("halton radical inverse") {
  CHECK(halton(1, 2) == doctest::Approx(0.5));
  CHECK(halton(3, 2) == doctest::Approx(0.75));
  CHECK(halton(2, 3) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("regressions recover exact lines") {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 3.0, 5.0, 7.0};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));

  const std::vector<double> x2{1.0, -1.0, 0.5, 2.0};
  std::vector<double> y2;
  for (int i = 0; i < 4; ++i) y2.push_back(0.5 + 2.0 * x[i] - 3.0 * x2[i]);
  const MultiFit m = fit_linear({x, x2}, y2);
  CHECK(m.coef[0] == doctest::Approx(0.5));
  CHECK(m.coef[1] == doctest::Approx(2.0));
  CHECK(m.coef[2] == doctest::Approx(-3.0));
}
