#pragma once

// Volume integrals over cylinder unions versus nested ray integrals with
// the density D.

#include "otray/density.hpp"
#include "otray/test_function.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace otray {

enum class QuadratureMethod { MonteCarlo, ProductGrid };

struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::MonteCarlo;
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
};

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

/// Volume integral of phi over {x : in_region(x)}.
/// Monte-Carlo for n = 2 uses one jittered sample per equal-area cell of a
/// (cos colatitude, longitude) grid; the error estimate pairs adjacent cells.
/// For n >= 3 it is plain Monte-Carlo with normalized Gaussian points.
/// ProductGrid is a midpoint rule in (colatitude, longitude), n = 2 only.
Estimate integrate_volume(const TestFunction& phi, const std::function<bool(const Point&)>& in_region,
                          const QuadratureSpec& q, const ManifoldParams& m);
Estimate integrate_volume(const TestFunction& phi, std::span<const CylinderSet> region,
                          const QuadratureSpec& q, const ManifoldParams& m);
Estimate integrate_volume(const TestFunction& phi, const QuadratureSpec& q, const ManifoldParams& m);

/// sum_y w_y int phi(Phi^t y) D(t, y) dt over [lo, hi] (default: the window).
/// Band indicators are truncated exactly. Throws FieldMismatchError when
/// `field` was not built on `cyl`, OutOfWindowError for a sub-window outside it.
double integrate_rays(const TestFunction& phi, const CylinderSet& cyl, const DensityField& field,
                      std::optional<std::pair<double, double>> sub_window = std::nullopt);

struct ResidualReport {
  std::string phi;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double lhs_stderr = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// |LHS - RHS| / max(|LHS|, 1e-12) over a cylinder cover.
ResidualReport disintegration_residual(const TestFunction& phi, std::span<const CylinderSet> cover,
                                       std::span<const DensityField> fields, const QuadratureSpec& q);

/// max over phi of |sum_j RHS(phi, part_j) - RHS(phi, whole)|.
/// Throws OverlapError when two parts share interior points.
double additivity_check(const std::vector<TestFunction>& phis, const std::vector<CylinderSet>& parts,
                        const CylinderSet& whole, int grid_nodes = 129);

}  // namespace otray
