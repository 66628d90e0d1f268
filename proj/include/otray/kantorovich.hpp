#pragma once

#include "otray/measure.hpp"

#include <Eigen/Dense>

namespace otray {

struct DualSolution {
  Potential potential;   // anchored on supp(mu) U supp(nu), deduplicated
  double value = 0.0;    // sum u dmu - sum u dnu
  double primal_cost = 0.0;
  Eigen::MatrixXd plan;  // plan(i, j): mass moved from mu atom i to nu atom j
};

/// W1 dual on the sphere. The transport problem is solved exactly by
/// successive shortest paths, duals are read off the final residual graph
/// and turned into a 1-Lipschitz potential by the c-transform.
/// Throws UnbalancedError if totals differ by more than 1e-10.
DualSolution solve_kantorovich_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const ManifoldParams& m);

}  // namespace otray
