#include <doctest.h>

#include <cmath>

#include "clf/cz_estimates.hpp"
#include "clf/geometry_probes.hpp"
#include "clf/normal_form.hpp"

using namespace clf;

namespace {
const auto kBall = DefiningFunction::ball();
}

TEST_CASE("kernel norm at unit separation agrees across resolutions") {
  const CVec z(1.0, 0.0), w(0.0, 1.0);
  const double a = kernel_l2_norm(kBall, z, w, 1, 0.1, 0.1, kernel_production());
  const double b = kernel_l2_norm(kBall, z, w, 1, 0.1, 0.1, kernel_refined());
  CHECK(std::isfinite(a));
  CHECK(a > 0.0);
  CHECK(b == doctest::Approx(a).epsilon(0.02));
}

TEST_CASE("kernel differences vanish for equal arguments") {
  const CVec z = random_boundary_point(kBall, 1, 41, 0);
  const CVec w = random_boundary_point(kBall, 1, 41, 1);
  const RegionResolution res{12, 2, 4, 2, 6.0};
  CHECK(kernel_difference_norm(kBall, HolderMode::second_arg, z, w, w, 1, 0.1, 0.1, res) == 0.0);
  CHECK(kernel_difference_norm(kBall, HolderMode::first_arg, z, z, w, 1, 0.1, 0.1, res) == 0.0);
  CHECK(t1_field_difference(kBall, z, z, 1, 0.1, 0.1, res) == 0.0);
}

TEST_CASE("bump functions") {
  const auto ell = DefiningFunction::ellipsoid({2.0, 1.0});
  const CVec w0 = random_boundary_point(ell, 1, 42, 0);
  const BumpFunction f = make_bump(ell, w0, 0.2);
  CHECK(f(w0) == doctest::Approx(1.0));
  CHECK(f.gamma == 0.5);
  for (int s = 0; s < 200; ++s) {
    const CVec p = random_boundary_point(ell, 1, 43, s);
    const double v = f(p);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
    if (quasimetric(ell, p, w0) >= 0.2) REQUIRE(v == 0.0);
  }
  CHECK(std::isfinite(f.class_constant));
  CHECK(f.class_constant > 0.0);
  CHECK_THROWS_AS(make_bump(ell, w0, 0.2, 1.5), ConfigError);
}

TEST_CASE("zero bump pairs to zero") {
  const CVec w0 = random_boundary_point(kBall, 1, 44, 0);
  BumpFunction f = make_bump(kBall, w0, 0.2);
  BumpFunction zero = f;
  zero.eval = [](const CVec&) { return 0.0; };
  CHECK(bump_pairing_norm(kBall, zero, f, 1, 0.1, 0.1) == 0.0);
  CHECK(bump_pairing_norm(kBall, f, f, 1, 0.1, 0.1) > 0.0);
}

TEST_CASE("kernel size probe on a small sample") {
  const KernelProbeResult r = kernel_size_probe(kBall, 1, 12, 1);
  CHECK(std::isfinite(r.size_constant));
  CHECK(r.exponent == doctest::Approx(-2.0).epsilon(0.1));
  CHECK_THROWS_AS(kernel_size_probe(kBall, 1, 2, 1), ConfigError);
}

TEST_CASE("kernel Hoelder probe on the ball") {
  const KernelProbeResult r = kernel_holder_probe(kBall, HolderMode::second_arg, 1, 60, 1);
  CHECK(r.exponent == doctest::Approx(0.5).epsilon(0.14));
  CHECK(r.r2 >= 0.9);
}
