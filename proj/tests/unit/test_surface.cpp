#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "clf/normal_form.hpp"
#include "clf/numerics.hpp"
#include "clf/surface.hpp"

using namespace clf;

TEST_CASE("Leray-Levy density on the ball is constant") {
  const auto ball = DefiningFunction::ball();
  for (int s = 0; s < 100; ++s) {
    const CVec xi = random_boundary_point(ball, 1, 5, s);
    CHECK(std::abs(leray_levy_density(ball, xi) - 1.0 / (2 * kPi * kPi)) < 1e-10);
  }
}

TEST_CASE("Leray-Levy density is positive on the ellipsoid") {
  const auto ell = DefiningFunction::ellipsoid({2.0, 1.0});
  for (int s = 0; s < 10000; ++s) REQUIRE(leray_levy_density(ell, random_boundary_point(ell, 1, 6, s)) > 0.0);
}

TEST_CASE("volume densities") {
  CHECK(volume_density(DefiningFunction::ball(), CVec(0.3, 0.1)) == doctest::Approx(8.0));
  CHECK(volume_density(DefiningFunction::ellipsoid({2.0, 1.0}), CVec(0.3, 0.1)) ==
        doctest::Approx(2.0));
  const auto pb = DefiningFunction::perturbed_ball(0.05);
  for (int s = 0; s < 50; ++s) CHECK(volume_density(pb, 1.03 * random_unit_vector(2, 2, s)) > 0.0);
}

TEST_CASE("sphere area converges at order >= 2 and dS has unit mass") {
  const auto ball = DefiningFunction::ball();
  const double area = 2 * kPi * kPi;
  const double e1 = std::abs(build_surface_grid(ball, 0.0, {3, 8}).total_sigma() - area);
  const double e2 = std::abs(build_surface_grid(ball, 0.0, {6, 16}).total_sigma() - area);
  CHECK((e2 < 1e-13 || std::log2(e1 / e2) >= 2.0));
  CHECK(std::abs(build_surface_grid(ball, 0.0).total_S() - 1.0) < 1e-6);
  CHECK(std::abs(build_surface_grid(DefiningFunction::ellipsoid({2.0, 1.0}), 0.0).total_S() - 1.0) <
        1e-4);
}

TEST_CASE("raw dS mass on the perturbed ball is 2 vol / pi^2, not 1") {
  const auto dom = DefiningFunction::perturbed_ball(0.05);
  const double mass = build_surface_grid(dom, 0.0).total_S();
  CHECK(mass == doctest::Approx(1.0012559).epsilon(1e-6));
}

TEST_CASE("quasiball measures on the sphere") {
  const auto ball = DefiningFunction::ball();
  const SurfaceGrid g = build_surface_grid(ball, 0.0, {24, 80});
  const Quasiball all{CVec(1.0, 0.0), 2.5};
  CHECK(quasiball_measure(ball, g, all) == doctest::Approx(g.total_sigma()).epsilon(1e-12));
  const Quasiball none{CVec(1.0, 0.0), 0.0};
  CHECK(quasiball_measure(ball, g, none, 0) == 0.0);
  const double h = std::sqrt(0.5);
  CHECK_THROWS_AS(quasiball_measure(ball, g, Quasiball{CVec(h, h), 1e-4}), ResolutionTooCoarse);
}

TEST_CASE("patch grid covers the quasiball") {
  const auto ell = DefiningFunction::ellipsoid({2.0, 1.0});
  const CVec c = random_boundary_point(ell, 1, 7, 0);
  const double r = 0.1;
  const SurfaceGrid patch = build_patch_grid(ell, c, r, r / 8);
  const SurfaceGrid focus = build_focused_grid(ell, 0.0, c, r / 50, {8, 48, 0.25});
  double in_patch = 0.0, in_focus = 0.0;
  for (std::size_t i = 0; i < patch.size(); ++i)
    if (quasimetric(ell, patch.points[i], c) < r) in_patch += patch.sigma[i];
  for (std::size_t i = 0; i < focus.size(); ++i)
    if (quasimetric(ell, focus.points[i], c) < r) in_focus += focus.sigma[i];
  CHECK(in_patch == doctest::Approx(in_focus).epsilon(0.03));
}

TEST_CASE("surface cache round trip and corruption") {
  const auto ball = DefiningFunction::ball();
  const auto dir = std::filesystem::temp_directory_path() / "clf_unit_cache";
  std::filesystem::remove_all(dir);
  const SurfaceGrid a = cached_surface_grid(ball, 0.0, {6, 20}, dir.string());
  const SurfaceGrid b = cached_surface_grid(ball, 0.0, {6, 20}, dir.string());
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a.sigma[i] == b.sigma[i]);
    REQUIRE(a.points[i] == b.points[i]);
  }
  const std::string key = surface_cache_key(ball, 0.0, {6, 20});
  const auto file = dir / "grid.bin";
  write_surface_grid(a, file.string(), key);
  {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-9, std::ios::end);
    f.put('\x7f');
  }
  CHECK_THROWS_AS(read_surface_grid(file.string(), key), CacheCorruption);
  std::filesystem::remove_all(dir);
}
