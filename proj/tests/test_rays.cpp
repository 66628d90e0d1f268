#include "otray/errors.hpp"
#include "otray/rays.hpp"
#include "otray/scenario.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace otray;

namespace {

const ManifoldParams S2(2, 1.0);
constexpr double pi = oracle::pi;

Potential two_point(const Point& p, const Point& q) {
  return Potential({{p, distance(p, q, S2)}, {q, 0.0}}, S2);
}

// Meridian through longitude lon, parametrized by colatitude.
Point meridian(double colat, double lon) { return from_colatitude(S2, colat, lon); }

}  // namespace

TEST(AlphaBeta, TwoPointScenario) {
  const Point p = meridian(0.3, 0.0), q = meridian(1.7, 0.0);
  const Potential u = two_point(p, q);
  const Point z = meridian(1.0, 0.0);
  const auto [a, b] = alpha_beta(z, u, {p}, {q});
  EXPECT_NEAR(a, 0.7, 1e-12);
  EXPECT_NEAR(b, 0.7, 1e-12);
  const auto [ap, bp] = alpha_beta(p, u, {p}, {q});
  EXPECT_NEAR(ap, distance(p, q, S2), 1e-12);
  EXPECT_NEAR(bp, 0.0, 1e-12);
}

TEST(AlphaBeta, OffTheRay) {
  // A third anchor owns z, so nothing in X or Y is linked to z.
  const Point p = meridian(0.3, 0.0), q = meridian(1.7, 0.0), c = meridian(1.0, pi);
  const Potential u({{p, distance(p, q, S2)}, {q, 0.0}, {c, 0.3}}, S2);
  const Point z = meridian(0.95, pi);
  ASSERT_EQ(argmax_cone(u, z), std::vector<int>{2});
  const auto [a, b] = alpha_beta(z, u, {p}, {q});
  EXPECT_EQ(a, kNoEndpoint);
  EXPECT_EQ(b, kNoEndpoint);
}

TEST(RayThrough, RadialMeridian) {
  const Potential u = radial_potential(S2);
  for (double colat : {0.4, 1.0, 2.0}) {
    for (double lon : {0.0, 1.3, 4.0}) {
      const Point z = meridian(colat, lon);
      const TransportRay r = ray_through(z, u);
      EXPECT_NEAR(r.u_base, colat, 1e-12);
      EXPECT_NEAR(r.t_lower, -colat, 1e-6);
      EXPECT_NEAR(r.t_upper, pi - colat, 1e-6);
      EXPECT_LE(ray_affinity_error(r, u), 1e-8);
      for (double t : {-0.3, 0.1, 0.5}) {
        if (colat + t <= 0.0 || colat + t >= pi) continue;
        EXPECT_LT((r.at(t, S2).coords - meridian(colat + t, lon).coords).norm(), 1e-12);
      }
    }
  }
}

TEST(RayThrough, EndpointsAndSameRay) {
  const Point p = meridian(0.3, 0.5), q = meridian(1.7, 0.5);
  const Potential u = two_point(p, q);
  const TransportRay r1 = ray_through(meridian(0.8, 0.5), u);
  const TransportRay r2 = ray_through(meridian(1.2, 0.5), u);
  const Point a1 = r1.at(r1.t_upper, S2), b1 = r1.at(r1.t_lower, S2);
  EXPECT_NEAR(u(a1) - u(b1), distance(a1, b1, S2), 1e-7);
  EXPECT_NEAR(distance(a1, b1, S2), r1.length(), 1e-7);
  const Point a2 = r2.at(r2.t_upper, S2), b2 = r2.at(r2.t_lower, S2);
  EXPECT_LT((a1.coords - a2.coords).norm(), 1e-7);
  EXPECT_LT((b1.coords - b2.coords).norm(), 1e-7);
  // the cone about p points away from p; u rises toward p, so p is the top
  EXPECT_LT(distance(a1, p, S2), 1e-7);
}

TEST(RayThrough, Errors) {
  const Point a = meridian(0.5, 0.0), b = meridian(0.5, pi);
  const Potential u({{a, 0.0}, {b, 0.0}}, S2);
  EXPECT_THROW(ray_through(north_pole(S2), u), AmbiguousDirectionError);
  EXPECT_THROW(ray_through(a, u), AmbiguousDirectionError);
}

TEST(RayThrough, NonCrossing) {
  Rng rng(3);
  std::vector<Anchor> anchors;
  for (int k = 0; k < 5; ++k) anchors.push_back({random_point(S2, rng), rng.uniform(0.0, 0.3)});
  const Potential u(anchors, S2);
  int checked = 0;
  for (int k = 0; k < 1000 && checked < 200; ++k) {
    const Point x = random_point(S2, rng), y = random_point(S2, rng);
    TransportRay rx, ry;
    try {
      rx = ray_through(x, u);
      ry = ray_through(y, u);
    } catch (const Error&) {
      continue;
    }
    // Same ray iff y lies on rx.
    const Point top = rx.at(rx.t_upper, S2), bot = rx.at(rx.t_lower, S2);
    const double off = distance(bot, y, S2) + distance(y, top, S2) - distance(bot, top, S2);
    if (off < 1e-9) continue;
    double dmin = 1e9;
    for (int a = 1; a < 20; ++a)
      for (int b = 1; b < 20; ++b) {
        const double ta = rx.t_lower + rx.length() * a / 20.0, tb = ry.t_lower + ry.length() * b / 20.0;
        dmin = std::min(dmin, distance(rx.at(ta, S2), ry.at(tb, S2), S2));
      }
    EXPECT_GT(dmin, 0.0);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Sheaf, RadialWindowsCount) {
  const Potential u = radial_potential(S2);
  const RegionSpec region = band_region(S2, pi / 4, pi / 2, 16, 24);
  const auto sheaves = build_sheaf_partition(u, region, 3, 8);
  // u = colatitude; windows [m/8, (m+1)/8] meeting [pi/4, pi/2]
  std::set<long> windows;
  for (const auto& s : sheaves) windows.insert(s.window_index);
  std::set<long> expected;
  for (long m = static_cast<long>(std::floor(pi / 4 * 8)); m <= static_cast<long>(std::floor(pi / 2 * 8)); ++m)
    expected.insert(m);
  EXPECT_EQ(windows, expected);
  // every sample in exactly one sheaf; feet on the level
  std::vector<int> seen(region.samples.size(), 0);
  for (const auto& s : sheaves) {
    for (auto i : s.sample_indices) seen[i]++;
    for (const auto& y : s.base_points) EXPECT_NEAR(u(y), s.level, 1e-9);
    for (const auto& r : s.member_rays) {
      EXPECT_GT(r.t_upper, 1.0 / 8);
      EXPECT_GT(-r.t_lower, 1.0 / 8);
    }
  }
  for (int c : seen) EXPECT_EQ(c, 1);
}

TEST(Sheaf, ShortRaysGiveEmptyPartition) {
  // the N cone owns the cap of colatitude < 0.1; its rays run from that
  // boundary to N, so each has length 0.1
  const Point N = north_pole(S2), S = south_pole(S2);
  const Potential u({{N, 0.0}, {S, pi - 0.2}}, S2);
  const RegionSpec region = band_region(S2, 0.01, 0.09, 8, 8);
  for (int j : {1, 5, 20}) EXPECT_THROW(build_sheaf_partition(u, region, 3, j), EmptyPartitionError);
}

TEST(Cylinder, WindowAndMembership) {
  const Potential u = radial_potential(S2);
  EXPECT_THROW(make_polar_cylinder(u, 0, 1.0, 0.0, 0.3, 16, 0.0, 2 * pi), WindowOrderError);
  EXPECT_THROW(make_polar_cylinder(u, 0, 1.0, -0.3, 0.0, 16, 0.0, 2 * pi), WindowOrderError);
  EXPECT_THROW(make_polar_cylinder(u, 0, 1.0, -1.5, 0.3, 16, 0.0, 2 * pi), InsufficientRayLengthError);
  const CylinderSet c = make_polar_cylinder(u, 0, 1.0, -0.4, 0.4, 32, 0.0, 2 * pi);
  EXPECT_NEAR(c.base_measure(), 2 * pi * std::sin(1.0), 1e-9);
  for (std::size_t i = 0; i < c.nodes().size(); i += 5)
    for (int k = -8; k <= 8; ++k) {
      const double t = 0.05 * k;
      const Point x = c.flow_node(i, t);
      EXPECT_NEAR(u(x), 1.0 + t, 1e-9);
      EXPECT_TRUE(c.contains(x));
    }
  EXPECT_FALSE(c.contains(meridian(1.5, 0.0)));
  const Point y = c.nodes()[3].point;
  EXPECT_LT((flow(c, y, 0.0).coords - y.coords).norm(), 1e-15);
  EXPECT_THROW(flow(c, y, 0.41), OutOfWindowError);
  // semigroup along the ray
  const CylinderSet c2 = make_polar_cylinder(u, 0, 1.2, -0.4, 0.2, 32, 0.0, 2 * pi);
  const Point ys = c.flow(y, 0.2);
  EXPECT_LT((c2.flow(ys, 0.15).coords - c.flow(y, 0.35).coords).norm(), 1e-12);
}

TEST(Cylinder, FromSheafWithSymmetricWindow) {
  const Potential u = radial_potential(S2);
  const RegionSpec region = band_region(S2, pi / 4, pi / 2, 16, 24);
  const auto sheaves = build_sheaf_partition(u, region, 3, 8);
  const SheafSet& s = sheaves.front();
  const double w = 1.0 / 8;
  const CylinderSet c = build_cylinder(s, u, -w / 2, w / 2);
  EXPECT_EQ(c.nodes().size(), s.base_points.size());
  for (std::size_t i = 0; i < c.nodes().size(); ++i) {
    const Point x = c.flow_node(i, w / 2);
    EXPECT_NEAR(u(x), s.level + w / 2, 1e-9);
  }
  EXPECT_THROW(build_cylinder(s, u, 0.0, w), WindowOrderError);
}

TEST(Cylinder, Degenerate) {
  const Point p = meridian(0.3, 0.0), q = meridian(1.7, 0.0);
  const Potential u = two_point(p, q);
  const CylinderSet c = make_degenerate_cylinder(u, meridian(1.0, 0.0), -0.3, 0.3);
  EXPECT_TRUE(c.degenerate());
  EXPECT_EQ(c.nodes().size(), 1u);
  // beyond q both cones agree, so the ray runs on to the antipode of p
  EXPECT_NO_THROW(make_degenerate_cylinder(u, meridian(1.0, 0.0), -2.4, 0.3));
  EXPECT_THROW(make_degenerate_cylinder(u, meridian(1.0, 0.0), -2.5, 0.3), InsufficientRayLengthError);
  EXPECT_THROW(make_degenerate_cylinder(u, meridian(1.0, 0.0), -0.3, 0.75), InsufficientRayLengthError);
}
