#include "otray/errors.hpp"
#include "otray/scenario.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

using namespace otray;

namespace {

constexpr double pi = oracle::pi;

std::string scenario_dir() {
  const char* d = std::getenv("OTRAY_SCENARIO_DIR");
  return d ? d : OTRAY_SCENARIOS;
}

const char* kMinimal = R"(
name: minimal
kind: radial-band
manifold: {n: 2, K: 1}
radial-band: {r1: pi/4, r2: pi/2}
)";

}  // namespace

TEST(ParseAngle, Forms) {
  EXPECT_DOUBLE_EQ(parse_angle("pi/4"), pi / 4);
  EXPECT_DOUBLE_EQ(parse_angle("3*pi/8"), 3 * pi / 8);
  EXPECT_DOUBLE_EQ(parse_angle("-pi"), -pi);
  EXPECT_DOUBLE_EQ(parse_angle("0.5"), 0.5);
  EXPECT_DOUBLE_EQ(parse_angle("pi"), pi);
  EXPECT_THROW(parse_angle("3pi"), ParseError);
  EXPECT_THROW(parse_angle("pi/0"), ParseError);
  EXPECT_THROW(parse_angle("tau"), ParseError);
}

TEST(Parse, MinimalRadialBandFillsDefaults) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_EQ(s.name, "minimal");
  EXPECT_EQ(s.kind, ScenarioKind::RadialBand);
  EXPECT_EQ(s.manifold, ManifoldParams(2, 1.0));
  EXPECT_EQ(s.seed, 42u);
  const auto& p = std::get<RadialBandParams>(s.params);
  EXPECT_DOUBLE_EQ(p.r1, pi / 4);
  EXPECT_DOUBLE_EQ(p.r2, pi / 2);
  EXPECT_EQ(p.base_nodes, 256);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_scenario("name: x\nkind: radial-band\nmanifold: {n: 2, K: 1}\nradial-band: {r1: 1.0, r2: 0.5}\n"),
               ValidationError);
  try {
    parse_scenario("name: x\nkind: radial-band\nmanifold: {n: 2, K: 1}\nradial-band: {r1: 1.0, r2: 0.5}\n");
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("band order"), std::string::npos);
  }
  EXPECT_THROW(parse_scenario("name: x\nkind: spiral\nmanifold: {n: 2, K: 1}\n"), ParseError);
  try {
    parse_scenario("name: x\nkind: radial-band\nmanifold: {n: 2, K: 1}\nradial-band: {r1: 0.5, r2: 1.0}\ncolour: red\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_scenario("name: x\nkind: radial-band\nmanifold: {n: 2}\nradial-band: {r1: 0.5, r2: 1.0}\n"), ParseError);
  EXPECT_THROW(parse_scenario("name: x\nkind: radial-band\nmanifold: {n: 1, K: 1}\nradial-band: {r1: 0.5, r2: 1.0}\n"),
               ValidationError);
  EXPECT_THROW(parse_scenario("name: x\nkind: radial-band\nmanifold: {n: 2, K: 1}\nradial-band: {r1: 0.5, r2: 4.0}\n"),
               ValidationError);
  EXPECT_THROW(parse_scenario("name: x\nkind: tilted-disk\nmanifold: {n: 2, K: 1}\ntilted-disk: {theta: pi/2, r: 1, t: 0.5}\n"),
               ValidationError);
  EXPECT_THROW(parse_scenario("name: x\nkind: tilted-disk\nmanifold: {n: 2, K: 1}\ntilted-disk: {theta: 0, r: 1, t: 1.5}\n"),
               ValidationError);
  EXPECT_THROW(parse_scenario("[1, 2"), ParseError);
  EXPECT_THROW(load_scenario("/nonexistent/file.yaml"), IoError);
}

TEST(Parse, DiscreteMeasures) {
  const Scenario s = parse_scenario(R"(
name: lp
kind: discrete-lp
manifold: {n: 2, K: 1}
discrete-lp:
  mu: [{at: [0.2, 0], mass: 1}]
  nu: [{coords: [0, 0, -2], mass: 1}]
)");
  const auto& d = std::get<DiscreteLpParams>(s.params);
  ASSERT_EQ(d.nu.size(), 1u);
  EXPECT_NEAR(d.nu[0].point.coords(2), -1.0, 1e-15);
  EXPECT_THROW(parse_scenario(R"(
name: lp
kind: discrete-lp
manifold: {n: 2, K: 1}
discrete-lp:
  mu: [{at: [0.2, 0], mass: 0.5}]
  nu: [{at: [1, 0], mass: 1}]
)"),
               ValidationError);
}

TEST(Files, ShippedScenariosValidate) {
  int count = 0;
  for (const auto& e : std::filesystem::directory_iterator(scenario_dir())) {
    if (e.path().extension() != ".yaml") continue;
    EXPECT_NO_THROW(load_scenario(e.path().string())) << e.path();
    ++count;
  }
  EXPECT_GE(count, 6);
}

TEST(Materialize, Kinds) {
  const Scenario radial = parse_scenario(kMinimal);
  const Materialized r = materialize(radial);
  ASSERT_TRUE(r.potential.has_value());
  ASSERT_EQ(r.cylinders.size(), 1u);
  const CylinderSet& c = r.cylinders[0];
  EXPECT_NEAR(c.level(), 3 * pi / 8, 1e-15);
  EXPECT_NEAR(c.h_plus(), pi / 8, 1e-15);
  EXPECT_NEAR(c.h_minus(), -pi / 8, 1e-15);
  // meridian rays: the band is swept from r1 to r2
  EXPECT_NEAR(distance(north_pole(radial.manifold), c.flow_node(0, c.h_minus()), radial.manifold), pi / 4, 1e-12);
  EXPECT_NEAR(distance(north_pole(radial.manifold), c.flow_node(0, c.h_plus()), radial.manifold), pi / 2, 1e-12);

  const Materialized lp = materialize(load_scenario(scenario_dir() + "/discrete-lp.yaml"));
  ASSERT_TRUE(lp.potential.has_value());
  ASSERT_FALSE(lp.cylinders.empty());
  for (const auto& cyl : lp.cylinders) EXPECT_TRUE(cyl.degenerate());

  const Materialized tilted = materialize(load_scenario(scenario_dir() + "/tilted-disk-pi-6.yaml"));
  EXPECT_FALSE(tilted.potential.has_value());
  EXPECT_TRUE(tilted.cylinders.empty());

  const Materialized two = materialize(load_scenario(scenario_dir() + "/two-band.yaml"));
  EXPECT_EQ(two.cylinders.size(), 2u);
}

TEST(Radial, PotentialIsColatitude) {
  const ManifoldParams m(3, 4.0);
  const Potential u = radial_potential(m);
  for (double c : {0.1, 0.5, 1.2}) EXPECT_NEAR(u(from_colatitude(m, c, 0.3)), c, 1e-14);
}
