#pragma once

// Discrete measures, cone-max potentials and optimal pairs.

#include "otray/parallel.hpp"
#include "otray/sphere.hpp"

#include <vector>

namespace otray {

struct Atom {
  Point point;
  double mass = 0.0;
};

class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  /// Validates positive masses, points on the sphere and pairwise distinct
  /// atoms (distance > 1e-9). Throws InvalidMeasureError.
  DiscreteMeasure(std::vector<Atom> atoms, const ManifoldParams& m);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total() const { return total_; }

 private:
  std::vector<Atom> atoms_;
  double total_ = 0.0;
};

struct Anchor {
  Point point;
  double value = 0.0;
};

/// u(x) = max_i { value_i - d(x, a_i) }.
class Potential {
 public:
  Potential() = default;
  Potential(std::vector<Anchor> anchors, const ManifoldParams& m);

  const std::vector<Anchor>& anchors() const { return anchors_; }
  const ManifoldParams& manifold() const { return m_; }
  std::size_t size() const { return anchors_.size(); }

  double operator()(const Point& x) const;
  /// Stored value when x is an anchor (within 1e-9), otherwise u(x). Differs
  /// from u(x) only when the anchor values are not 1-Lipschitz.
  double value_at(const Point& x) const;
  /// Cone values value_i - d(x, a_i) for every anchor.
  std::vector<double> cone_values(const Point& x) const;

  /// max_{i,j} |value_i - value_j| - d(a_i, a_j); <= 1e-9 for consistent anchors.
  double anchor_lipschitz_gap() const;

  /// Copy with one extra anchor appended.
  Potential with_anchor(const Anchor& a) const;
  /// Copy with every value shifted by c.
  Potential shifted(double c) const;

 private:
  std::vector<Anchor> anchors_;
  ManifoldParams m_;
};

constexpr double kTieTolerance = 1e-10;

double cone_extension(const Potential& u, const Point& x);

/// Indices attaining the cone max within `tol`, in increasing order.
std::vector<int> argmax_cone(const Potential& u, const Point& x, double tol = kTieTolerance);

struct OptimalPair {
  std::size_t x_index = 0;
  std::size_t y_index = 0;
};

struct OptimalPairSet {
  std::vector<OptimalPair> pairs;
  double tolerance = 0.0;

  bool contains(std::size_t xi, std::size_t yi) const;
};

/// All (x, y) in X x Y with |u(x) - u(y) - d(x, y)| <= tol.
OptimalPairSet subdifferential_pairs(const Potential& u, const std::vector<Point>& X,
                                     const std::vector<Point>& Y, double tol);

/// max over sample pairs of |u(x) - u(y)| - d(x, y) with u read through
/// value_at, so corrupted anchor values show up; 0 for fewer than two samples.
double lipschitz_violation(const Potential& u, const std::vector<Point>& samples);

/// Uniform point on the sphere (normalized Gaussian).
Point random_point(const ManifoldParams& m, Rng& rng);
/// Uniform unit tangent at p.
Vec random_unit_tangent(const Point& p, const ManifoldParams& m, Rng& rng);

}  // namespace otray
