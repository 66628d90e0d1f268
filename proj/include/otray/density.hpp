#pragma once

// Ray densities: numeric (n-1)-Jacobians of the cylinder flow, the
// closed-form Jacobian at constant curvature, pushforward factors and the
// density field D(t, y).

#include "otray/rays.hpp"

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

namespace otray {

/// 1e-5 * min(pi / sqrt(K), pi).
double default_fd_step(const ManifoldParams& m);

/// Volume of the parallelotope spanned by the columns (QR based).
double gram_volume(const Eigen::MatrixXd& cols);

/// (n-1)-Jacobian at x0 of `map` restricted to the slice through x0 spanned
/// by `tangents`, from central differences along exp_{x0}(+-h e_k).
double slice_jacobian(const std::function<Point(const Point&)>& map, const Point& x0,
                      const std::vector<Vec>& tangents, double h, const ManifoldParams& m);

/// Jacobian of y -> Phi^t(y) on the cylinder base at node i.
double jacobian_flow_numeric(const CylinderSet& cyl, std::size_t node, double t, double h_fd);
/// Same at an arbitrary point y of the cylinder's cell, with the base frame
/// orthogonal to grad u(y).
double jacobian_flow_numeric(const CylinderSet& cyl, const Point& y, double t, double h_fd);

/// rho^{n-1} sqrt(cos^2 theta + sin^2 theta / rho^2), rho = s_K(r - t) / s_K(r).
/// Throws DomainError for t >= r, r >= pi / sqrt(K) or theta outside [0, pi/2].
double jacobian_bound_formula(double r, double t, double theta, const ManifoldParams& m);

/// Numeric Jacobian of x -> exp_a((d(a,x) - t) / d(a,x) log_a x) on the slice
/// through a point at distance r from a, with unit normal
/// cos(theta) radial + sin(theta) w.
double tilted_slice_jacobian(double r, double t, double theta, const ManifoldParams& m, double h_fd);

/// (lower, upper) = ((s_K(h+ - t) / s_K(h+ - s))^{n-1}, (s_K(t - h-) / s_K(s - h-))^{n-1}).
/// Throws WindowOrderError unless h- < s <= t < h+.
std::pair<double, double> pushforward_factors(double s, double t, double h_minus, double h_plus,
                                              const ManifoldParams& m);

struct TGrid {
  double lo = 0.0;
  double hi = 0.0;
  int nodes = 129;

  double step() const { return (hi - lo) / (nodes - 1); }
  double at(int k) const { return k == nodes - 1 ? hi : lo + step() * k; }
};

class DensityField {
 public:
  DensityField(CylinderSet cyl, TGrid grid, Eigen::MatrixXd values, double h_fd)
      : cyl_(std::move(cyl)), grid_(grid), values_(std::move(values)), h_fd_(h_fd) {}

  const CylinderSet& cylinder() const { return cyl_; }
  const TGrid& grid() const { return grid_; }
  /// values(node, k) = D(t_k, y_node)
  const Eigen::MatrixXd& values() const { return values_; }
  double h_fd() const { return h_fd_; }
  /// Cubic Lagrange interpolation in t.
  double at(std::size_t node, double t) const;

 private:
  CylinderSet cyl_;
  TGrid grid_;
  Eigen::MatrixXd values_;
  double h_fd_;
};

/// D on the window of `cyl` (grid.lo/hi are taken from the window).
DensityField density_D(const CylinderSet& cyl, int grid_nodes = 129, double h_fd = -1.0);

/// max over adjacent nodes of |Delta D / Delta t| for one base node.
double lipschitz_modulus_t(const DensityField& field, std::size_t node);

/// sup_t D * (n-1) * max_t max(|d/dt log s_K(t - R-)|, |d/dt log s_K(R+ - t)|)
/// with R+- the common ray extents (the window edges give an infinite bound).
double lipschitz_bound_t(const DensityField& field, std::size_t node);

/// min of (D(t) - lower D(s), upper D(s) - D(t)) / D(t) with the factors
/// for the window [h_minus, h_plus].
double sandwich_slack(const DensityField& field, std::size_t node, double s, double t,
                      double h_minus, double h_plus);

/// |J(y, t) * J_reverse(Phi^t y, -t) - 1|.
double flow_duality_error(const CylinderSet& cyl, std::size_t node, double t, double h_fd);

}  // namespace otray
