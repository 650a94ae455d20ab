#include <doctest.h>

#include <cmath>

#include "clf/normal_form.hpp"
#include "clf/regions.hpp"

using namespace clf;

namespace {
const auto kBall = DefiningFunction::ball();
const RegionSpec kSpec{RegionKind::external, CVec(1.0, 0.0), 0.1, 0.1};
}  // namespace

TEST_CASE("internal region membership") {
  RegionSpec spec = kSpec;
  spec.kind = RegionKind::internal;
  CHECK(in_internal_region(kBall, spec, CVec(0.99, 0.0)));
  CHECK_FALSE(in_internal_region(kBall, spec, CVec(0.5, 0.0)));
  CHECK_FALSE(in_internal_region(kBall, spec, CVec(0.0, 0.99)));
}

TEST_CASE("external region membership") {
  const double s = 0.03;
  CHECK(in_external_region(kBall, kSpec, CVec(1.0 + s, 0.0)));
  CHECK_FALSE(in_external_region(kBall, kSpec, CVec(1.2, 0.0)));  // rho = 0.44 >= eps
  const double rho = (1 + s) * (1 + s) - 1;
  CHECK_FALSE(in_external_region(kBall, kSpec, CVec(1.0 + s, std::sqrt(2 * 0.1 * rho))));
  CHECK_FALSE(in_external_region(kBall, kSpec, CVec(0.95, 0.0)));
}

TEST_CASE("model region membership") {
  const RegionSpec spec{RegionKind::model, CVec::Zero(), 0.1, 0.1};
  const double s = 0.05;
  CHECK(in_model_region(spec, CVec(0.0, s)));
  CHECK_FALSE(in_model_region(spec, CVec(0.0, -s)));
  CHECK(in_model_region(spec, CVec(std::sqrt(0.1 * s / 2), s)));
  CHECK_FALSE(in_model_region(spec, CVec(std::sqrt(2 * 0.1 * s), s)));
}

TEST_CASE("region parameters are validated") {
  RegionSpec bad = kSpec;
  bad.eta = 0.5;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = kSpec;
  bad.eps = -0.1;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("nu weights divide by the height power") {
  CHECK(nu_exponent(1) == 1);
  CHECK(nu_exponent(2) == -1);
  const RegionGrid g = build_region_grid(kBall, kSpec, 1);
  REQUIRE(g.size() > 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    REQUIRE(g.height[i] > 0.0);
    REQUIRE(g.nu[i] == doctest::Approx(g.mu[i] / g.height[i]).epsilon(1e-12));
    REQUIRE(in_external_region(kBall, kSpec, g.nodes[i]));
  }
}

TEST_CASE("radial rule ratios sit near the slice constant") {
  // slice volume 2 pi eta^2 t^2 with dt = 2 |d rho| da
  const auto ell = DefiningFunction::ellipsoid({2.0, 1.0});
  const CVec xi = random_boundary_point(ell, 1, 3, 0);
  const double slice = kPi * 0.01 / eval_jet(ell, xi).gradient.norm();
  for (double power : {0.0, 1.0}) {
    const double r = radial_rule_ratio(ell, xi, 0.1, 0.1, power);
    CHECK(r / slice > 0.5);
    CHECK(r / slice < 2.0);
  }
}
