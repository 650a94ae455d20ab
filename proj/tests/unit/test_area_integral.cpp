#include <doctest.h>

#include <cmath>

#include "clf/area_integral.hpp"
#include "clf/normal_form.hpp"

using namespace clf;

namespace {
const auto kBall = DefiningFunction::ball();
}

TEST_CASE("area integrand closed forms on the ball") {
  const double s = 0.05;
  const CVec tau(1.0 + s, 0.0);
  const cplx a = area_integrand(kBall, tau, CVec(1.0, 0.0), 1);
  CHECK(std::abs(a - std::pow(s * (1 + s), -3.0)) < 1e-9 * std::abs(a));
  const cplx b = area_integrand(kBall, tau, CVec(0.0, 1.0), 1);
  CHECK(std::abs(b) == doctest::Approx(std::pow(1 + s, -6.0)).epsilon(1e-12));
  CHECK_THROWS_AS(area_integrand(kBall, CVec(1.0, 0.0), CVec(1.0, 0.0), 1), SingularPairing);
}

TEST_CASE("area integral is a seminorm in g") {
  const CVec z = random_boundary_point(kBall, 1, 31, 0);
  const BoundaryFunction g = smooth_function(2);
  const BoundaryFunction h = rough_random(7);
  BoundaryFunction sum{"g+h", BoundaryClass::smooth, [&](const CVec& w) { return g(w) + h(w); }};
  const std::vector<BoundaryFunction> fam{g, scaled(g, cplx(2.5, -1.0)), h, sum,
                                          constant_function(0.0)};
  const auto v = area_integral_family(kBall, fam, z, 1, 0.1, 0.1, area_production());
  CHECK(v[0] > 0.0);
  CHECK(v[1] == doctest::Approx(std::abs(cplx(2.5, -1.0)) * v[0]).epsilon(1e-10));
  CHECK(v[3] <= (v[0] + v[2]) * (1 + 1e-12));
  CHECK(v[4] == 0.0);
}

TEST_CASE("I_l(1) is the same at every point of the sphere") {
  const BoundaryFunction one = constant_function(1.0);
  const double a = area_integral_Il(kBall, one, CVec(1.0, 0.0), 1, 0.1, 0.1, area_production());
  const double b = area_integral_Il(kBall, one, random_boundary_point(kBall, 1, 32, 0), 1, 0.1,
                                    0.1, area_production());
  CHECK(a > 0.0);
  CHECK(std::isfinite(a));
  CHECK(b == doctest::Approx(a).epsilon(2e-3));
}

TEST_CASE("boundary L^p norms") {
  const SurfaceGrid g = build_surface_grid(kBall, 0.0);
  const BoundaryFunction one = constant_function(1.0);
  CHECK(lp_norm(g, one, 2.0, MeasureKind::S) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(lp_norm(g, one, 2.0) == doctest::Approx(std::sqrt(2 * kPi * kPi)).epsilon(1e-8));
  const BoundaryFunction x1{"Re z1", BoundaryClass::smooth,
                            [](const CVec& w) { return cplx(w[0].real(), 0.0); }};
  CHECK(lp_norm(g, x1, 2.0) / std::sqrt(2 * kPi * kPi) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK_THROWS_AS(lp_norm(g, one, 0.5), ConfigError);
}

TEST_CASE("BMO seminorm basics") {
  const SurfaceGrid g = build_surface_grid(kBall, 0.0, {24, 80});
  const QuasiballFamily fam = default_ball_family(kBall, 16, 3);
  CHECK(bmo_seminorm(kBall, g, constant_function(cplx(2.0, 1.0)), fam).value < 1e-13);
  const BoundaryFunction r = rough_random(3);
  double sup = 0.0;
  for (const CVec& p : g.points) sup = std::max(sup, std::abs(r(p)));
  const double b = bmo_seminorm(kBall, g, r, fam).value;
  CHECK(b > 0.0);
  CHECK(b <= 2 * sup);
}

TEST_CASE("log witness: BMO finite while the sup grows under refinement") {
  const CVec anchor = random_boundary_point(kBall, 1, 33, 0);
  const BoundaryFunction lg = log_singular(kBall, anchor);
  const QuasiballFamily fam = default_ball_family(kBall, 16, 3);
  const SurfaceGrid coarse = build_surface_grid(kBall, 0.0, {24, 80});
  const SurfaceGrid fine = build_surface_grid(kBall, 0.0, {48, 160});
  double sup_c = 0.0, sup_f = 0.0;
  for (const CVec& p : coarse.points) sup_c = std::max(sup_c, std::abs(lg(p)));
  for (const CVec& p : fine.points) sup_f = std::max(sup_f, std::abs(lg(p)));
  const double bc = bmo_seminorm(kBall, coarse, lg, fam).value;
  const double bf = bmo_seminorm(kBall, fine, lg, fam).value;
  CHECK(sup_f > sup_c);
  CHECK(std::isfinite(bf));
  CHECK(bf == doctest::Approx(bc).epsilon(0.1));
}

TEST_CASE("constant members have no BMO ratio") {
  BmoOptions opt;
  opt.centers = 1;
  opt.radii = {0.5};
  CHECK_THROWS_AS(bmo_inequality_report(kBall, {constant_function(3.0)}, opt), ZeroDenominator);
}

TEST_CASE("Lp report rejects bad exponents and empty families") {
  LpOptions opt;
  opt.p_list = {1.0};
  CHECK_THROWS_AS(lp_inequality_report(kBall, {smooth_function(0)}, opt), ConfigError);
  CHECK_THROWS_AS(lp_inequality_report(kBall, {}, LpOptions{}), ConfigError);
}
