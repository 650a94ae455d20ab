#include <doctest.h>

#include <cmath>

#include "clf/clf_operator.hpp"

using namespace clf;

namespace {
const cplx I(0.0, 1.0);
}

TEST_CASE("CLF kernel values on the ball") {
  const auto ball = DefiningFunction::ball();
  CHECK(std::abs(clf_kernel(ball, CVec(1.0, 0.0), CVec::Zero()) - 1.0) < 1e-14);
  CHECK(std::abs(clf_kernel(ball, CVec(1.0, 0.0), CVec(0.5, 0.0)) - 4.0) < 1e-13);
  CHECK(std::abs(clf_kernel(ball, CVec(0.0, 1.0), CVec(0.5 * I, 0.0)) - 1.0) < 1e-14);
  CHECK_THROWS_AS(clf_kernel(ball, CVec(1.0, 0.0), CVec(1.0, 0.0)), SingularPairing);
}

TEST_CASE("reproducing formula on catalog examples") {
  const auto ball = DefiningFunction::ball();
  const SurfaceGrid g = build_surface_grid(ball, 0.0);
  CHECK(std::abs(clf_apply(ball, g, monomial(0, 0), CVec::Zero()) - 1.0) < 1e-10);
  const CVec z(0.3, 0.2 * I);
  CHECK(std::abs(clf_apply(ball, g, monomial(2, 1), z) - 0.018 * I) < 1e-6);

  const auto ell = DefiningFunction::ellipsoid({2.0, 1.0});
  const SurfaceGrid ge = build_surface_grid(ell, 0.0);
  const auto pole = exterior_pole(ell, CVec(3.0, 0.0), 2);
  const CVec ze(0.5, 0.2);
  CHECK(std::abs(clf_apply(ell, ge, pole, ze) - pole(ze)) < 1e-5);
}

TEST_CASE("non-holomorphic control is not reproduced") {
  const auto ball = DefiningFunction::ball();
  const SurfaceGrid g = build_surface_grid(ball, 0.0);
  const auto f = real_coordinate(0);
  const CVec z(0.3, 0.1);
  CHECK(std::abs(clf_apply(ball, g, f, z) - f(z)) > 1e-2);
}

TEST_CASE("reproduction is rejected too close to the boundary") {
  const auto ball = DefiningFunction::ball();
  const SurfaceGrid g = build_surface_grid(ball, 0.0, {8, 24});
  CHECK_THROWS_AS(clf_apply(ball, g, monomial(1, 0), CVec(0.95, 0.0)), TooCloseToBoundary);
}

TEST_CASE("reproduction errors fall along the ladder") {
  const auto ell = DefiningFunction::ellipsoid({2.0, 1.0});
  const auto pts = interior_sample(ell, 4, 0.1, 1);
  const VerificationReport r =
      reproduction_report(ell, default_suite(ell, 3), pts, {{8, 24}, {16, 48}, {32, 96}}, 1e-3);
  CHECK(r.metrics.contains("final_worst_error"));
  CHECK(r.metrics["final_worst_error"].get<double>() < 1e-3);
}

TEST_CASE("Stokes pair on the ball obeys the mean value property") {
  // w -> <d rho(tau), tau - w>^{-k} is holomorphic on the closed ball
  const auto ball = DefiningFunction::ball();
  const CVec tau(1.05, 0.0);
  for (int l : {0, 1}) {
    const auto [coarse, fine] = stokes_pair(ball, tau, l);
    const double oracle = std::pow(1.05, -2.0 * (2 + l));
    CHECK(std::abs(fine.surface - oracle) < 1e-4 * oracle);
    CHECK(std::abs(fine.volume - oracle) < 1e-4 * oracle);
    CHECK(std::abs(coarse.surface - fine.surface) < 2e-3 * oracle);
  }
}

TEST_CASE("constants reproduce at the origin on every catalog domain") {
  for (const auto& d : {DefiningFunction::ball(), DefiningFunction::ellipsoid({2.0, 1.0}),
                        DefiningFunction::perturbed_ball(0.05)}) {
    const SurfaceGrid g = build_surface_grid(d, 0.0);
    CHECK(std::abs(clf_apply(d, g, monomial(0, 0), CVec::Zero()) - 1.0) < 1e-10);
  }
}
