#pragma once

// Transport rays of a cone potential, endpoint functionals, dyadic sheaf
// sets and cylinder sets with the flow y -> exp_y(t grad u(y)).

#include "otray/measure.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace otray {

struct RayTraceConfig {
  double ray_tol = 1e-8;
  int steps_per_diameter = 64;  // march step = diameter / steps_per_diameter
  int bisections = 60;
};

struct TransportRay {
  Point base;
  Tangent direction;  // unit, u increases along +direction
  double t_lower = 0.0;
  double t_upper = 0.0;
  double u_base = 0.0;
  int cell = -1;  // dominating anchor

  double length() const { return t_upper - t_lower; }
  Point at(double t, const ManifoldParams& m) const;
};

constexpr double kNoEndpoint = -std::numeric_limits<double>::infinity();

/// (alpha, beta): largest distance from z to a point of Y below z on a ray,
/// and to a point of X above z. Either is kNoEndpoint when nothing qualifies.
std::pair<double, double> alpha_beta(const Point& z, const Potential& u, const std::vector<Point>& X,
                                     const std::vector<Point>& Y, double tol = 1e-9);

/// Maximal ray through z. Throws AmbiguousDirectionError on ties or at an
/// apex, NotInTransportSetError when the ray has zero length.
TransportRay ray_through(const Point& z, const Potential& u, const RayTraceConfig& cfg = {});

/// max |u(gamma(t)) - u_base - t| over `samples` equispaced parameters.
double ray_affinity_error(const TransportRay& ray, const Potential& u, int samples = 100);

struct RegionSpec {
  std::vector<Point> samples;
};

/// Samples of the zonal band r1 <= colatitude <= r2 (n = 2 grid; extra
/// ambient axes stay at zero for n > 2).
RegionSpec band_region(const ManifoldParams& m, double r1, double r2, int n_colat, int n_lon);

struct SheafSet {
  std::vector<Point> base_points;  // feet on {u = level}
  double level = 0.0;
  std::pair<double, double> u_window;
  std::vector<TransportRay> member_rays;  // re-based at the feet
  std::vector<std::size_t> sample_indices;
  int cell = -1;
  long window_index = 0;  // m in [m, m+1] / 2^k
};

/// Dyadic partition of the sampled transport set. Samples whose ray clears
/// both endpoints by more than 1/j are grouped by u-window and cell and split
/// into pieces of diameter <= delta / 2, delta = 0.9 pi / sqrt(K).
/// Throws EmptyPartitionError when nothing qualifies.
std::vector<SheafSet> build_sheaf_partition(const Potential& u, const RegionSpec& region, int k, int j,
                                            const RayTraceConfig& cfg = {});

struct CylinderNode {
  Point point;
  double weight = 0.0;       // H^{n-1} share of the base
  std::vector<Vec> frame;    // orthonormal, tangent to the base
  Vec grad;                  // unit grad u
};

struct CylinderGeometry {
  Point apex;
  double rho0 = 0.0;  // distance from apex to the base
  std::vector<Vec> apex_frame;
  bool full = true;       // whole geodesic sphere around the apex
  double phi0 = 0.0;      // azimuth arc [phi0, phi1] when !full (n = 2)
  double phi1 = 0.0;
  double angular_radius = 0.0;  // n >= 3 partial bases: node neighbourhood
};

class CylinderSet {
 public:
  const Potential& potential() const { return u_; }
  const ManifoldParams& manifold() const { return u_.manifold(); }
  int cell() const { return cell_; }
  double level() const { return level_; }
  double h_minus() const { return h_minus_; }
  double h_plus() const { return h_plus_; }
  /// Common ray extent over the nodes (t_lower max, t_upper min).
  double ray_minus() const { return r_minus_; }
  double ray_plus() const { return r_plus_; }
  const std::vector<CylinderNode>& nodes() const { return nodes_; }
  const CylinderGeometry& geometry() const { return geom_; }
  /// Zero-dimensional base (single ray); D is identically 1.
  bool degenerate() const { return degenerate_; }
  double base_measure() const;

  /// exp_y(t grad u(y)) with the cell's cone gradient.
  Point flow(const Point& y, double t) const;
  Point flow_node(std::size_t i, double t) const;
  /// Unit gradient of the cell's cone at x (toward the apex).
  Vec grad_at(const Point& x) const;

  /// x lies in Phi([h-, h+] x Z).
  bool contains(const Point& x) const;
  /// Same shape with a different window; checks ray clearance again.
  CylinderSet with_window(double h_minus, double h_plus) const;

  friend CylinderSet make_cylinder(const Potential&, int, double, double, double,
                                   std::vector<Point>, std::optional<std::vector<double>>, bool,
                                   const RayTraceConfig&);
  friend CylinderSet make_degenerate_cylinder(const Potential&, const Point&, double, double,
                                              const RayTraceConfig&);
  friend CylinderSet make_polar_cylinder(const Potential&, int, double, double, double, int, double,
                                         double, std::uint64_t, const RayTraceConfig&);

 private:
  Potential u_;
  int cell_ = -1;
  double level_ = 0.0;
  double h_minus_ = 0.0, h_plus_ = 0.0;
  double r_minus_ = 0.0, r_plus_ = 0.0;
  std::vector<CylinderNode> nodes_;
  CylinderGeometry geom_;
  bool degenerate_ = false;
};

double ray_margin(const ManifoldParams& m);  // 1e-6 * pi / sqrt(K)

/// Cylinder over `base` (points on {u = level} inside one cell). Weights are
/// computed from the base shape unless given. `full` marks a base sampling
/// the whole geodesic sphere around the apex.
CylinderSet make_cylinder(const Potential& u, int cell, double level, double h_minus, double h_plus,
                          std::vector<Point> base, std::optional<std::vector<double>> weights,
                          bool full, const RayTraceConfig& cfg = {});

/// Single-ray cylinder through y (zero base dimension, weight 1).
CylinderSet make_degenerate_cylinder(const Potential& u, const Point& y, double h_minus, double h_plus,
                                     const RayTraceConfig& cfg = {});

/// Base of `nodes` points on the geodesic sphere of radius rho0 about the
/// apex of `cell`: equispaced azimuths over [phi0, phi1] for n = 2 (full
/// circle when phi1 - phi0 >= 2 pi), seeded uniform directions for n >= 3.
CylinderSet make_polar_cylinder(const Potential& u, int cell, double level, double h_minus,
                                double h_plus, int nodes, double phi0, double phi1,
                                std::uint64_t seed = 42, const RayTraceConfig& cfg = {});

CylinderSet build_cylinder(const SheafSet& sheaf, const Potential& u, double h_minus, double h_plus,
                           const RayTraceConfig& cfg = {});

/// flow(cyl, y, t) with the window check. Throws OutOfWindowError.
Point flow(const CylinderSet& cyl, const Point& y, double t);

}  // namespace otray
