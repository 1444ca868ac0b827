#include <doctest.h>

#include <sstream>

#include "coneasym/jsonio.hpp"
#include "coneasym/scenario.hpp"
#include "coneasym/weights.hpp"

using namespace coneasym;

namespace {

nlohmann::json base() {
  return nlohmann::json::parse(R"({
    "cross_section": "s3", "j_max": 6, "gamma": 0.5, "k": 2,
    "solver": {"modes": [1], "t": [1.0], "profile": {"shape": "bump", "support": [1, 2]},
               "grid": {"lo": 1e-3, "hi": 1e-1, "per_decade": 4}}
  })");
}

}  // namespace

TEST_CASE("shipped circle scenario") {
  const auto sc = load_scenario(CONE_ASYM_SOURCE_DIR "/scenarios/circle_r0.5.json");
  CHECK(sc.cross_section.n() == 1);
  CHECK(sc.cross_section.lambda(1) == -4.0);
  CHECK(sc.gamma == 0.0);
  CHECK(sc.k == 3);
  CHECK(sc.solver.modes == std::vector<std::size_t>{0, 1});
}

TEST_CASE("gamma midpoint") {
  auto doc = base();
  doc["gamma"] = "midpoint";
  CHECK(scenario_from_json(doc).gamma == doctest::Approx(0.5));
  CHECK(resolve_gamma("0.25", sphere_spectrum(3, 4)) == 0.25);
  CHECK_THROWS_AS(resolve_gamma("half", sphere_spectrum(3, 4)), ConfigError);
}

TEST_CASE("scenario validation") {
  auto doc = base();
  doc["gamma"] = 2.0;
  CHECK_THROWS_AS(scenario_from_json(doc), WindowViolation);
  doc = base();
  doc["k"] = 1;
  CHECK_THROWS_AS(scenario_from_json(doc), KTooSmall);
  doc = base();
  doc["solver"]["grid"]["hi"] = 1.5;
  CHECK_THROWS_AS(scenario_from_json(doc), ConfigError);
  doc = base();
  doc["solver"]["modes"] = {9};
  CHECK_THROWS_AS(scenario_from_json(doc), ConfigError);
  doc = base();
  doc["cross_section"] = "cube";
  CHECK_THROWS_AS(scenario_from_json(doc), ConfigError);
  doc = base();
  doc["cross_section"] = {{"n", 2}, {"eigenvalues", {0.0, -1.25}}, {"multiplicities", {1, 2}}};
  doc["gamma"] = "midpoint";
  CHECK(scenario_from_json(doc).cross_section.n() == 2);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST_CASE("solve, dump and read back") {
  const auto sc = scenario_from_json(base());
  const auto sols = solve_scenario(sc);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].samples.size() == 9);
  std::stringstream a;
  write_mode_csv(a, sols);
  const auto back = read_mode_csv(a, 3);
  REQUIRE(back.size() == 1);
  CHECK(back[0].samples[4].value == sols[0].samples[4].value);
  std::stringstream b, c;
  write_mode_csv(b, solve_scenario(sc));
  write_mode_csv(c, back);
  CHECK(b.str() == c.str());
}

TEST_CASE("malformed CSV") {
  std::stringstream bad("x,y\n1,2\n");
  CHECK_THROWS_AS(read_mode_csv(bad), ConfigError);
  std::stringstream short_row("mode_j,nu,t,x,value\n1,2,3\n");
  CHECK_THROWS_AS(read_mode_csv(short_row), ConfigError);
}

TEST_CASE("JSON floats use 17 significant digits") {
  CHECK(dump_json(nlohmann::json(0.1)) == "0.10000000000000001");
  CHECK(dump_json(nlohmann::json::array({1.0 / 3.0, 2})) == "[0.33333333333333331,2]");
}
