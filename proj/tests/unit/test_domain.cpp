#include <doctest.h>

#include <cmath>

#include "clf/domain.hpp"
#include "clf/numerics.hpp"

using namespace clf;

namespace {
const cplx I(0.0, 1.0);
}

TEST_CASE("ball jet at (1,0)") {
  const auto ball = DefiningFunction::ball();
  const CJet j = eval_jet(ball, CVec(1.0, 0.0));
  CHECK(j.value == doctest::Approx(0.0));
  CHECK(std::abs(j.gradient[0] - 1.0) < 1e-14);
  CHECK(std::abs(j.gradient[1]) < 1e-14);
  CHECK((j.hermitian_hessian - CMat::Identity()).norm() < 1e-14);
  CHECK(j.holomorphic_hessian.norm() < 1e-14);
}

TEST_CASE("ellipsoid jet at (2,0)") {
  const auto ell = DefiningFunction::ellipsoid({2.0, 1.0});
  const CJet j = eval_jet(ell, CVec(2.0, 0.0));
  CHECK(j.value == doctest::Approx(0.0));
  CHECK(std::abs(j.gradient[0] - 0.5) < 1e-14);
  CHECK(std::abs(j.hermitian_hessian(0, 0) - 0.25) < 1e-14);
  CHECK(std::abs(j.hermitian_hessian(1, 1) - 1.0) < 1e-14);
  CHECK(j.holomorphic_hessian.norm() < 1e-14);
}

TEST_CASE("perturbed ball jet matches central differences") {
  const auto dom = DefiningFunction::perturbed_ball(0.05);
  const double h = 1e-5;
  for (int s = 0; s < 5; ++s) {
    const CVec z = 1.02 * random_unit_vector(9, 1, s);
    const CJet j = eval_jet(dom, z);
    for (int k = 0; k < kDim; ++k) {
      CVec ex = CVec::Zero(), ey = CVec::Zero();
      ex[k] = h;
      ey[k] = I * h;
      const double dx = (dom.value(z + ex) - dom.value(z - ex)) / (2 * h);
      const double dy = (dom.value(z + ey) - dom.value(z - ey)) / (2 * h);
      const cplx fd = 0.5 * cplx(dx, -dy);
      CHECK(std::abs(fd - j.gradient[k]) <= 1e-6 * std::max(1.0, std::abs(j.gradient[k])));
    }
  }
}

TEST_CASE("strong convexity margins") {
  CHECK(strong_convexity_margin(DefiningFunction::ball(), 0.1, 200, 1) == doctest::Approx(2.0));
  CHECK(strong_convexity_margin(DefiningFunction::ellipsoid({2.0, 1.0}), 0.1, 200, 1) ==
        doctest::Approx(0.5));
  CHECK(strong_convexity_margin(DefiningFunction::perturbed_ball(0.05), 0.1, 200, 1) > 0.0);
  CHECK_THROWS_AS(strong_convexity_margin(DefiningFunction::perturbed_ball(1.0), 0.1, 2000, 1),
                  NonConvexShell);
}

TEST_CASE("radial boundary points") {
  const CVec e1(1.0, 0.0);
  CHECK((radial_boundary_point(DefiningFunction::ball(), e1, 0.0) - e1).norm() < 1e-12);
  CHECK((radial_boundary_point(DefiningFunction::ellipsoid({2.0, 1.0}), e1, 0.0) - CVec(2.0, 0.0))
            .norm() < 1e-12);
  CHECK((radial_boundary_point(DefiningFunction::ball(), e1, 0.21) - CVec(1.1, 0.0)).norm() < 1e-12);
}

TEST_CASE("projection to the boundary") {
  const auto ball = DefiningFunction::ball();
  CHECK((project_to_boundary(ball, CVec(0.95, 0.0)) - CVec(1.0, 0.0)).norm() < 1e-10);
  CHECK((project_to_boundary(ball, CVec(0.0, 1.05 * I)) - CVec(0.0, I)).norm() < 1e-10);

  // dense-grid oracle on the ellipsoid
  const auto ell = DefiningFunction::ellipsoid({2.0, 1.0});
  const CVec z(1.9, 0.1);
  const CVec p = project_to_boundary(ell, z);
  CHECK(std::abs(ell.value(p)) < 1e-12);
  // boundary parametrized as (2 cos t e^{ia}, sin t e^{ib})
  double best = 1e300;
  CVec best_w;
  for (int i = 0; i <= 400; ++i)
    for (int j = 0; j < 60; ++j)
      for (int k = 0; k < 60; ++k) {
        const double t = 0.5 * kPi * i / 400;
        const CVec w(2.0 * std::cos(t) * std::polar(1.0, 2 * kPi * j / 60),
                     std::sin(t) * std::polar(1.0, 2 * kPi * k / 60));
        if ((w - z).norm() < best) {
          best = (w - z).norm();
          best_w = w;
        }
      }
  CHECK((p - z).norm() <= best + 1e-12);
  CHECK((p - best_w).norm() < 1e-2);
}

TEST_CASE("tangent frames and decomposition") {
  const auto ball = DefiningFunction::ball();
  const TangentFrame f1 = tangent_frame(ball, CVec(1.0, 0.0));
  CHECK((f1.normal - CVec(1.0, 0.0)).norm() < 1e-14);
  CHECK(std::abs(std::abs(f1.tangent[1]) - 1.0) < 1e-14);
  const TangentFrame f2 = tangent_frame(ball, CVec(0.0, 1.0));
  CHECK((f2.normal - CVec(0.0, 1.0)).norm() < 1e-14);
  CHECK(std::abs(std::abs(f2.tangent[0]) - 1.0) < 1e-14);
  const TangentFrame f3 = tangent_frame(DefiningFunction::ellipsoid({2.0, 1.0}), CVec(2.0, 0.0));
  CHECK((f3.normal - CVec(1.0, 0.0)).norm() < 1e-14);

  const TangentSplit a = tangent_decompose(f1, CVec(1.0, 0.3 * I));
  CHECK(std::abs(std::abs(a.w) - 0.3) < 1e-14);
  CHECK(std::abs(a.t) < 1e-14);
  const TangentSplit b = tangent_decompose(f1, CVec(1.2, 0.0));
  CHECK(std::abs(b.w) < 1e-14);
  CHECK(std::abs(b.t - 0.2) < 1e-14);

  const auto dom = DefiningFunction::perturbed_ball(0.05);
  for (int s = 0; s < 10; ++s) {
    const CVec xi = radial_boundary_point(dom, random_unit_vector(4, 1, s), 0.0);
    const TangentFrame f = tangent_frame(dom, xi);
    const CVec tau = xi + 0.3 * random_unit_vector(4, 2, s);
    const TangentSplit sp = tangent_decompose(f, tau);
    CHECK((f.base + sp.w * f.tangent + sp.t * f.normal - tau).norm() < 1e-12);
  }
}

TEST_CASE("quasimetric on the sphere") {
  const auto ball = DefiningFunction::ball();
  CHECK(quasimetric(ball, CVec(1.0, 0.0), CVec(1.0, 0.0)) == doctest::Approx(0.0));
  CHECK(quasimetric(ball, CVec(1.0, 0.0), CVec(0.0, 1.0)) == doctest::Approx(1.0));
  CHECK(quasimetric(ball, CVec(1.0, 0.0), CVec(I, 0.0)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("domain kinds parse") {
  CHECK(parse_domain_kind("ball") == DomainKind::ball);
  CHECK(parse_domain_kind("ellipsoid") == DomainKind::ellipsoid);
  CHECK(parse_domain_kind("perturbed_ball") == DomainKind::perturbed_ball);
  CHECK_THROWS_AS(parse_domain_kind("torus"), ConfigError);
}
