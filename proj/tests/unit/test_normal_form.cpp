#include <doctest.h>

#include <cmath>

#include "clf/normal_form.hpp"
#include "clf/numerics.hpp"

using namespace clf;

TEST_CASE("shifted ball is already in standard form") {
  // rho = |z + (0,1)|^2 - 1 = 2 Re z_2 + |z|^2
  const auto dom = DefiningFunction::ball(CVec(0.0, -1.0));
  const NormalFormChart ch = normal_form_chart(dom, CVec::Zero());
  CHECK((ch.Phi - CMat::Identity()).norm() < 1e-12);
  CHECK(ch.B.norm() < 1e-12);
  const StandardFormFit fit = standard_form_residual(dom, ch);
  CHECK(fit.exact);
}

TEST_CASE("standard form fit on the ball and ellipsoid") {
  const auto ball = DefiningFunction::ball();
  const StandardFormFit fb = standard_form_residual(ball, normal_form_chart(ball, CVec(1.0, 0.0)));
  CHECK((fb.exact || fb.slope >= 2.7));
  const Eigen::SelfAdjointEigenSolver<CMat> es(fb.hermitian);
  CHECK(es.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(es.eigenvalues()[1] == doctest::Approx(1.0).epsilon(1e-3));

  const auto ell = DefiningFunction::ellipsoid({2.0, 1.0});
  const StandardFormFit fe = standard_form_residual(ell, normal_form_chart(ell, CVec(2.0, 0.0)));
  CHECK((fe.exact || fe.slope >= 2.7));
  CHECK(fe.min_eigenvalue > 0.0);
}

TEST_CASE("perturbed ball has a holomorphic quadratic part") {
  const auto dom = DefiningFunction::perturbed_ball(0.05);
  const CVec xi = random_boundary_point(dom, 1, 11, 0);
  const NormalFormChart ch = normal_form_chart(dom, xi);
  CHECK(ch.B.norm() > 1e-6);
  const StandardFormFit fit = standard_form_residual(dom, ch);
  CHECK(fit.slope >= 2.7);
  CHECK(fit.min_eigenvalue > 0.0);
}

TEST_CASE("chart round trip and Jacobian") {
  const auto dom = DefiningFunction::perturbed_ball(0.05);
  const CVec xi = random_boundary_point(dom, 1, 12, 0);
  const NormalFormChart ch = normal_form_chart(dom, xi);
  CHECK(ch.forward(xi).norm() < 1e-14);
  for (int s = 0; s < 20; ++s) {
    const CVec tau = 0.05 * random_unit_vector(2, 13, s);
    const auto [z, jac] = ch.inverse_with_jacobian(tau);
    CHECK((ch.forward(z) - tau).norm() < 1e-10);
    CHECK(std::abs(jac * ch.forward_derivative(z).determinant() - 1.0) < 1e-10);
  }
}

TEST_CASE("chart Lipschitz probe is stable") {
  const auto r = chart_lipschitz_probe(DefiningFunction::perturbed_ball(0.05), 20, 10, 1);
  CHECK(r.pass);
}
