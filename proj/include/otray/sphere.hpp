#pragma once

// Closed-form geometry of the round sphere S^n_K (sectional curvature K,
// radius 1/sqrt(K)) embedded in R^{n+1}.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

namespace otray {

using Vec = Eigen::VectorXd;

struct ManifoldParams {
  int n = 2;
  double K = 1.0;

  ManifoldParams() = default;
  ManifoldParams(int dim, double curvature);  // validates n >= 2, K > 0

  int ambient_dim() const { return n + 1; }
  double sqrt_k() const { return std::sqrt(K); }
  double radius() const { return 1.0 / std::sqrt(K); }
  /// pi / sqrt(K): the diameter, and the distance to the cut locus of any point.
  double diameter() const { return std::numbers::pi / std::sqrt(K); }
  double antipode_guard() const { return 1e-9 * diameter(); }

  bool operator==(const ManifoldParams&) const = default;
};

struct Point {
  Vec coords;

  Point() = default;
  explicit Point(Vec c) : coords(std::move(c)) {}
};

struct Tangent {
  Point base;
  Vec vec;

  double norm() const { return vec.norm(); }
};

/// Throws InvalidPointError unless |p| = 1/sqrt(K) (relative tolerance 1e-12)
/// and p has n+1 coordinates.
void validate_point(const Point& p, const ManifoldParams& m);
void validate_tangent(const Tangent& v, const ManifoldParams& m);

/// Rescales an arbitrary nonzero vector onto the sphere.
Point project_to_sphere(const Vec& v, const ManifoldParams& m);
/// Removes the normal component of v at p.
Vec project_to_tangent(const Point& p, const Vec& v, const ManifoldParams& m);

Point north_pole(const ManifoldParams& m);
Point south_pole(const ManifoldParams& m);
/// Point at geodesic distance `colatitude` from the north pole; `longitude`
/// rotates in the (e_0, e_1) plane. Extra ambient axes stay at zero.
Point from_colatitude(const ManifoldParams& m, double colatitude, double longitude);

/// sin(sqrt(K) t) / sqrt(K).
double s_k(double t, double K);
/// d/dt s_k(t, K) = cos(sqrt(K) t).
double s_k_prime(double t, double K);

double distance(const Point& p, const Point& q, const ManifoldParams& m);

Point exp_map(const Point& p, const Vec& v, const ManifoldParams& m);
Point exp_map(const Point& p, const Tangent& v, const ManifoldParams& m);

/// Tangent at p whose exponential is q. Throws AntipodalError within
/// antipode_guard() of the cut point.
Tangent log_map(const Point& p, const Point& q, const ManifoldParams& m);

/// Unit gradient of x -> d(a, x), pointing away from a. Throws
/// DegenerateGradientError at x = a and at the antipode of a.
Tangent grad_distance(const Point& a, const Point& x, const ManifoldParams& m);

/// Orthonormal basis of the subspace of T_p orthogonal to `exclude`
/// (which must be tangent at p). Returns n - exclude.size() vectors.
std::vector<Vec> tangent_complement(const Point& p, const std::vector<Vec>& exclude,
                                    const ManifoldParams& m);

/// Orthonormal tangent frame (e_1, ..., e_n) at p used as the reference
/// for geodesic polar coordinates about p.
std::vector<Vec> polar_frame(const Point& p, const ManifoldParams& m);

/// Point at distance r from `pole` in the unit direction given by
/// coefficients `dir` (size n) in `frame`.
Point polar_point(const Point& pole, const std::vector<Vec>& frame, double r,
                  const Vec& dir, const ManifoldParams& m);

/// Azimuth of x about `pole` for n = 2, in [0, 2 pi). Returns 0 at the pole.
double azimuth(const Point& pole, const std::vector<Vec>& frame, const Point& x,
               const ManifoldParams& m);

/// Measure of the unit sphere S^{d}: 2 pi^{(d+1)/2} / Gamma((d+1)/2).
double unit_sphere_measure(int d);

/// Riemannian volume of S^n_K.
double total_volume(const ManifoldParams& m);

}  // namespace otray
