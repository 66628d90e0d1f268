#include "otray/errors.hpp"
#include "otray/measure.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace otray;

namespace {
const ManifoldParams S2(2, 1.0);
}

TEST(DiscreteMeasure, Invariants) {
  const Point a = north_pole(S2), b = south_pole(S2);
  const DiscreteMeasure mu({{a, 0.25}, {b, 0.75}}, S2);
  EXPECT_DOUBLE_EQ(mu.total(), 1.0);
  EXPECT_THROW(DiscreteMeasure({{a, 0.0}}, S2), InvalidMeasureError);
  EXPECT_THROW(DiscreteMeasure({{a, -1.0}}, S2), InvalidMeasureError);
  EXPECT_THROW(DiscreteMeasure({{a, 0.5}, {a, 0.5}}, S2), InvalidMeasureError);
  EXPECT_THROW(DiscreteMeasure({{Point(Vec::Ones(3)), 1.0}}, S2), InvalidMeasureError);
}

TEST(Cone, SingleAnchorAndApex) {
  const Point a = north_pole(S2);
  const Potential u({{a, 2.0}}, S2);
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const Point x = random_point(S2, rng);
    EXPECT_DOUBLE_EQ(cone_extension(u, x), 2.0 - distance(x, a, S2));
  }
  const Point b = from_colatitude(S2, 1.0, 0.0);
  const Potential v({{a, 0.0}, {b, 0.5}}, S2);
  EXPECT_DOUBLE_EQ(v(a), 0.0);
  EXPECT_DOUBLE_EQ(v(b), 0.5);
  EXPECT_EQ(argmax_cone(v, b), std::vector<int>{1});
}

TEST(Cone, MonotoneUnderInclusionAndShift) {
  Rng rng(2);
  std::vector<Anchor> anchors;
  const Point p = random_point(S2, rng);
  for (int k = 0; k < 8; ++k) {
    const Point a = random_point(S2, rng);
    anchors.push_back({a, -distance(a, p, S2)});
  }
  std::vector<Point> xs;
  for (int k = 0; k < 500; ++k) xs.push_back(random_point(S2, rng));
  Potential u({anchors[0]}, S2);
  for (int k = 1; k < 8; ++k) {
    const Potential w = u.with_anchor(anchors[k]);
    for (const Point& x : xs) EXPECT_GE(w(x), u(x));
    u = w;
  }
  const Potential s = u.shifted(3.5);
  for (const Point& x : xs) {
    EXPECT_NEAR(s(x), u(x) + 3.5, 1e-14);
    EXPECT_EQ(argmax_cone(s, x), argmax_cone(u, x));
  }
  // underlying u = -d(., p) is 1-Lipschitz; the cone approximation stays below it
  for (const Point& x : xs) EXPECT_LE(u(x), -distance(x, p, S2) + 1e-12);
  EXPECT_LE(lipschitz_violation(u, xs), 1e-9);
}

TEST(Argmax, TiesAndDirectComparison) {
  const Point a = from_colatitude(S2, 0.5, 0.0), b = from_colatitude(S2, 0.5, oracle::pi);
  const Potential u({{a, 0.0}, {b, 0.0}}, S2);
  EXPECT_EQ(argmax_cone(u, north_pole(S2)), (std::vector<int>{0, 1}));
  Rng rng(4);
  for (int k = 0; k < 200; ++k) {
    const Point p = random_point(S2, rng), q = random_point(S2, rng), x = random_point(S2, rng);
    const double vp = rng.uniform(-1, 1), vq = rng.uniform(-1, 1);
    const Potential w({{p, vp}, {q, vq}}, S2);
    const double cp = vp - oracle::sphere_distance(x.coords, p.coords, 1.0);
    const double cq = vq - oracle::sphere_distance(x.coords, q.coords, 1.0);
    if (std::abs(cp - cq) < 1e-6) continue;
    EXPECT_EQ(argmax_cone(w, x), std::vector<int>{cp > cq ? 0 : 1});
  }
}

TEST(Subdifferential, PairsOnAGeodesic) {
  const Point p = from_colatitude(S2, 0.3, 0.0), q = from_colatitude(S2, 1.5, 0.0);
  const Point z = from_colatitude(S2, 0.9, 0.0);
  const Potential u({{p, distance(p, q, S2)}, {q, 0.0}}, S2);
  const std::vector<Point> X{p, z}, Y{z, q};
  const OptimalPairSet s = subdifferential_pairs(u, X, Y, 1e-9);
  EXPECT_TRUE(s.contains(0, 0));  // (p, z)
  EXPECT_TRUE(s.contains(0, 1));  // (p, q)
  EXPECT_TRUE(s.contains(1, 0));  // (z, z)
  EXPECT_TRUE(s.contains(1, 1));  // (z, q)
  const Point off = from_colatitude(S2, 0.9, 1.0);
  const OptimalPairSet t = subdifferential_pairs(u, {off}, {q}, 1e-9);
  EXPECT_TRUE(t.pairs.empty());
}

TEST(LipschitzViolation, CorruptedAnchors) {
  const Point a = north_pole(S2), b = from_colatitude(S2, 0.4, 0.0);
  const Potential good({{a, 0.0}, {b, 0.3}}, S2);
  EXPECT_LE(lipschitz_violation(good, {a, b}), 1e-9);
  // value gap twice the distance: excess equals the distance
  const Potential bad({{a, 0.0}, {b, 0.8}}, S2);
  EXPECT_NEAR(lipschitz_violation(bad, {a, b}), 0.4, 1e-12);
  EXPECT_EQ(lipschitz_violation(bad, {a}), 0.0);
  EXPECT_NEAR(bad.anchor_lipschitz_gap(), 0.4, 1e-12);
}

TEST(RandomPoint, UniformOnSphere) {
  Rng rng(6);
  const ManifoldParams m(3, 4.0);
  Vec mean = Vec::Zero(4);
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const Point p = random_point(m, rng);
    EXPECT_NO_THROW(validate_point(p, m));
    mean += p.coords;
  }
  EXPECT_LT((mean / n).norm(), 0.01);
}
