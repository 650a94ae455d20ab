#include <doctest.h>

#include <filesystem>

#include "clf/harness.hpp"

using namespace clf;

TEST_CASE("config text parses with comments, arrays and strings") {
  const RunConfig c = parse_config_text(R"cfg(
# comment
domains = ["ball", "ellipsoid(2,1)"]  # trailing
probes = ["measures"]
eta = 0.05
p = [2, 3.5]
ladder = [[8, 24], [16, 48]]
out = "somewhere # not a comment"
seed = 7
)cfg");
  CHECK(c.domains.size() == 2);
  CHECK(c.domains[1] == "ellipsoid(2,1)");
  CHECK(c.eta == doctest::Approx(0.05));
  CHECK(c.p_list == std::vector<double>{2.0, 3.5});
  REQUIRE(c.ladder.size() == 2);
  CHECK(c.ladder[1].n_phi == 48);
  CHECK(c.out_dir == "somewhere # not a comment");
  CHECK(c.seed == 7);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config_text("bogus = 1"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("eta 0.1"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("eta = abc"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[section]"), ConfigError);

  RunConfig c;
  CHECK_THROWS_AS(validate(c), ConfigError);  // empty probe list
  c.probes = {"measures"};
  CHECK_NOTHROW(validate(c));
  RunConfig bad = c;
  bad.eta = 0.25;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.l = 3;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.p_list = {1.0};
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.probes = {"nonsense"};
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.domains = {"torus"};
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("resolution shorthand and domain specs") {
  RunConfig c;
  apply_setting(c, "res", "64");
  REQUIRE(c.ladder.size() == 3);
  CHECK(c.ladder[0].n_theta == 16);
  CHECK(c.ladder[2].n_theta == 64);
  CHECK(c.ladder[2].n_phi == 213);
  CHECK(parse_domain("ball").kind() == DomainKind::ball);
  const auto e = parse_domain("ellipsoid(3, 1.5)");
  CHECK(e.axes()[0] == 3.0);
  CHECK(parse_domain("perturbed_ball(0.05)").delta() == 0.05);
  CHECK_THROWS_AS(parse_domain("ball(2)"), ConfigError);
  CHECK_THROWS_AS(parse_domain("ellipsoid(1)"), ConfigError);
}

TEST_CASE("canonical config is stable and sensitive") {
  RunConfig a, b;
  a.probes = b.probes = {"measures"};
  CHECK(canonical_config(a) == canonical_config(b));
  b.seed = 2;
  CHECK(canonical_config(a) != canonical_config(b));
}

TEST_CASE("runs are deterministic and reports round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "clf_unit_run";
  std::filesystem::remove_all(dir);
  RunConfig c;
  c.probes = {"measures"};
  c.out_dir = (dir / "a").string();
  const RunResult r1 = run(c);
  c.out_dir = (dir / "b").string();
  const RunResult r2 = run(c);
  REQUIRE(r1.reports.size() == r2.reports.size());
  for (std::size_t i = 0; i < r1.reports.size(); ++i)
    CHECK(comparable(r1.reports[i]) == comparable(r2.reports[i]));
  CHECK(r1.all_pass);
  CHECK(!r1.reports[0].config_hash.empty());

  const auto loaded = load_reports((dir / "a").string());
  REQUIRE(loaded.size() == r1.reports.size());
  CHECK(comparable(loaded[0]) == comparable(r1.reports[0]));
  CHECK(std::filesystem::exists(dir / "a" / "summary.csv"));
  CHECK(summary_csv(loaded).rfind("probe,domain,pass", 0) == 0);
  CHECK(summary_markdown(loaded).find("PASS") != std::string::npos);
  std::filesystem::remove_all(dir);
}
