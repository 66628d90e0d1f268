#pragma once

// Divergence of the ray-direction field d_I: absolutely continuous part,
// jumps across cell boundaries, Green-Gauss on cylinders and the continuity
// equation for D.

#include "otray/density.hpp"
#include "otray/disintegration.hpp"

#include <vector>

namespace otray {

/// d_I(x) = d^i(x) = -grad_x d(a_i, x) on the cell of anchor i.
class ConeField {
 public:
  explicit ConeField(Potential u) : u_(std::move(u)) {}

  const Potential& potential() const { return u_; }
  const ManifoldParams& manifold() const { return u_.manifold(); }
  std::size_t size() const { return u_.size(); }

  /// d^i(x), unit, pointing toward a_i.
  Vec direction(int i, const Point& x) const;
  /// d_I(x) for the first dominating anchor.
  Vec direction(const Point& x) const;
  /// Cell function f_i(x) = value_i - d(x, a_i).
  double cell_value(int i, const Point& x) const;

 private:
  Potential u_;
};

/// div(-grad d(a, .))(x) = -(n-1) sqrt(K) cot(sqrt(K) r). Throws
/// DegenerateGradientError at r = 0 and at the antipode.
double divergence_ac_cone(const Point& a, const Point& x, const ManifoldParams& m);

/// Absolutely continuous part of div d_I at x (first dominating cell).
double divergence_ac(const ConeField& field, const Point& x);

std::vector<int> voronoi_assign(const ConeField& field, const Point& x);

/// Unit normal of the (i, j) boundary at x, grad(f_i - f_j) normalized. It
/// points into cell i.
Vec edge_normal(const ConeField& field, const Point& x, int i, int j);

/// <d^i(x) - d^j(x), nu> for a given normal. Antisymmetric in (i, j).
double jump_density(const ConeField& field, const Point& x, int i, int j, const Vec& normal);

/// <d^i(x) - d^j(x), nu_ij(x)> with nu_ij = edge_normal(i, j). This equals
/// |d^i - d^j| >= 0 and is symmetric in (i, j). Throws NotOnEdgeError unless
/// both cells attain the max at x within 1e-9.
double jump_density(const ConeField& field, const Point& x, int i, int j);

/// Boundary point between cells i and j on the geodesic p -> q, found by
/// bisection of f_i - f_j until |f_i - f_j| <= tol. Throws NotOnEdgeError
/// when there is no sign change.
Point bisect_edge(const ConeField& field, const Point& p, const Point& q, int i, int j, double tol = 1e-10);

struct EdgeSample {
  Point point;
  int i = -1;
  int j = -1;
  Vec normal;
  double jump = 0.0;
};

/// Scans geodesic segments between consecutive samples for a change of the
/// dominating cell and refines each crossing by bisection.
std::vector<EdgeSample> locate_edges(const ConeField& field, const std::vector<Point>& path);

struct GreenGaussSpec {
  int radial_cells = 64;
  int angular_nodes = 256;  // n = 2; n >= 3 reuses the cylinder's base directions
};

struct GreenGaussReport {
  double gradient_term = 0.0;  // int <grad phi, d>
  double ac_term = 0.0;        // -int phi div_ac d
  double boundary_term = 0.0;  // int_boundary phi <d, n_out>
  double residual = 0.0;       // |gradient - ac - boundary|
};

/// Three-term Green-Gauss identity on a single-cone cylinder, evaluated in
/// geodesic polar coordinates about the apex. Throws DomainError for
/// non-smooth phi and EdgeIntersectsCylinderError when a quadrature point
/// falls outside the apex's open cell.
GreenGaussReport green_gauss_residual(const CylinderSet& cyl, const TestFunction& phi,
                                      const ConeField& field, const GreenGaussSpec& spec = {});

/// max_{y, t} |d_t D - div_ac(Phi^t y) D| / max D, with central differences
/// inside the grid and one-sided second-order differences at its ends.
double continuity_residual(const DensityField& field, const ConeField& cone);

/// min over samples of div_ac(x) + (n-1) sqrt(K) cot(sqrt(K) d_min(x)),
/// d_min the distance to the nearest anchor. Samples within `margin` of an
/// anchor or of the antipode of their cell's anchor are skipped.
double lower_bound_certificate(const ConeField& field, const std::vector<Point>& samples, double margin = -1.0);

}  // namespace otray
