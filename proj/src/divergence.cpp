#include "otray/divergence.hpp"

#include "otray/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace otray {

Vec ConeField::direction(int i, const Point& x) const {
  return -grad_distance(u_.anchors().at(i).point, x, manifold()).vec;
}

Vec ConeField::direction(const Point& x) const { return direction(voronoi_assign(*this, x).front(), x); }

double ConeField::cell_value(int i, const Point& x) const {
  const Anchor& a = u_.anchors().at(i);
  return a.value - distance(x, a.point, manifold());
}

double divergence_ac_cone(const Point& a, const Point& x, const ManifoldParams& m) {
  const double r = distance(a, x, m);
  if (r <= 1e-12 * m.diameter() || r >= m.diameter() - m.antipode_guard())
    throw DegenerateGradientError("divergence is singular at the anchor and its antipode");
  const double sk = m.sqrt_k();
  return -(m.n - 1) * sk / std::tan(sk * r);
}

double divergence_ac(const ConeField& field, const Point& x) {
  const int i = voronoi_assign(field, x).front();
  return divergence_ac_cone(field.potential().anchors()[i].point, x, field.manifold());
}

std::vector<int> voronoi_assign(const ConeField& field, const Point& x) {
  return argmax_cone(field.potential(), x);
}

Vec edge_normal(const ConeField& field, const Point& x, int i, int j) {
  const Vec g = field.direction(i, x) - field.direction(j, x);
  const double ng = g.norm();
  if (ng < 1e-14) throw NotOnEdgeError("cells have parallel fields; the boundary normal is undefined");
  return g / ng;
}

double jump_density(const ConeField& field, const Point& x, int i, int j, const Vec& normal) {
  if (i == j) return 0.0;
  return (field.direction(i, x) - field.direction(j, x)).dot(normal);
}

double jump_density(const ConeField& field, const Point& x, int i, int j) {
  if (i == j) return 0.0;
  const auto vals = field.potential().cone_values(x);
  const double best = *std::max_element(vals.begin(), vals.end());
  if (vals.at(i) < best - 1e-9 || vals.at(j) < best - 1e-9)
    throw NotOnEdgeError("point is not on the boundary of both cells");
  return jump_density(field, x, i, j, edge_normal(field, x, i, j));
}

Point bisect_edge(const ConeField& field, const Point& p, const Point& q, int i, int j, double tol) {
  const ManifoldParams& m = field.manifold();
  const Vec v = log_map(p, q, m).vec;
  auto diff = [&](double s) {
    const Point x = exp_map(p, Vec(s * v), m);
    return field.cell_value(i, x) - field.cell_value(j, x);
  };
  double lo = 0.0, hi = 1.0;
  double flo = diff(lo);
  const double fhi = diff(hi);
  if (flo * fhi > 0.0) throw NotOnEdgeError("no sign change of f_i - f_j along the segment");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = diff(mid);
    if (std::abs(fm) <= tol) return exp_map(p, Vec(mid * v), m);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return exp_map(p, Vec(0.5 * (lo + hi) * v), m);
}

std::vector<EdgeSample> locate_edges(const ConeField& field, const std::vector<Point>& path) {
  std::vector<EdgeSample> out;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const int a = voronoi_assign(field, path[k]).front();
    const int b = voronoi_assign(field, path[k + 1]).front();
    if (a == b) continue;
    EdgeSample e;
    e.point = bisect_edge(field, path[k], path[k + 1], a, b);
    e.i = a;
    e.j = b;
    e.normal = edge_normal(field, e.point, a, b);
    e.jump = jump_density(field, e.point, a, b, e.normal);
    out.push_back(std::move(e));
  }
  return out;
}

GreenGaussReport green_gauss_residual(const CylinderSet& cyl, const TestFunction& phi,
                                      const ConeField& field, const GreenGaussSpec& spec) {
  if (!phi.smooth()) throw DomainError("Green-Gauss needs a smooth test function");
  if (cyl.degenerate()) throw ValidationError("Green-Gauss needs a cylinder with a base of positive dimension");
  const ManifoldParams& m = cyl.manifold();
  const CylinderGeometry& g = cyl.geometry();
  if (field.size() != cyl.potential().size()) throw ValidationError("cone field and cylinder use different anchors");
  const double r_in = g.rho0 - cyl.h_plus();
  const double r_out = g.rho0 - cyl.h_minus();
  const int p = m.n - 1;

  // angular quadrature: directions in the apex frame and their weights
  std::vector<Vec> dirs;
  std::vector<double> dw;
  if (m.n == 2) {
    const double a0 = g.full ? 0.0 : g.phi0;
    const double len = g.full ? 2.0 * std::numbers::pi : g.phi1 - g.phi0;
    for (int k = 0; k < spec.angular_nodes; ++k) {
      const double phi_k = a0 + len * (k + 0.5) / spec.angular_nodes;
      Vec d(2);
      d << std::cos(phi_k), std::sin(phi_k);
      dirs.push_back(d);
      dw.push_back(len / spec.angular_nodes);
    }
  } else {
    const double s0 = std::pow(s_k(g.rho0, m.K), p);
    for (const auto& nd : cyl.nodes()) {
      const Vec v = log_map(g.apex, nd.point, m).vec;
      Vec d(m.n);
      for (int c = 0; c < m.n; ++c) d(c) = v.dot(g.apex_frame[c]);
      dirs.push_back(d.normalized());
      dw.push_back(nd.weight / s0);
    }
  }

  auto check_cell = [&](const Point& x) {
    const auto idx = argmax_cone(cyl.potential(), x);
    if (idx.size() != 1 || idx.front() != cyl.cell())
      throw EdgeIntersectsCylinderError("a cell boundary crosses the cylinder");
  };

  const int R = spec.radial_cells;
  const double dr = (r_out - r_in) / R;
  std::vector<double> grad_terms(dirs.size()), ac_terms(dirs.size()), bd_terms(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t k) {
    std::vector<double> gt, at;
    for (int c = 0; c < R; ++c) {
      const double r = r_in + (c + 0.5) * dr;
      const Point x = polar_point(g.apex, g.apex_frame, r, dirs[k], m);
      check_cell(x);
      const double vol = std::pow(s_k(r, m.K), p) * dr * dw[k];
      const Vec d = field.direction(cyl.cell(), x);
      gt.push_back(phi.gradient(x).dot(d) * vol);
      at.push_back(-phi(x) * divergence_ac_cone(g.apex, x, m) * vol);
    }
    grad_terms[k] = pairwise_sum(gt);
    ac_terms[k] = pairwise_sum(at);
    // inner sphere: outward normal points to the apex, along d; outer: against d
    const Point xi = polar_point(g.apex, g.apex_frame, r_in, dirs[k], m);
    const Point xo = polar_point(g.apex, g.apex_frame, r_out, dirs[k], m);
    check_cell(xi);
    check_cell(xo);
    bd_terms[k] = dw[k] * (phi(xi) * std::pow(s_k(r_in, m.K), p) - phi(xo) * std::pow(s_k(r_out, m.K), p));
  });
  GreenGaussReport rep;
  rep.gradient_term = pairwise_sum(grad_terms);
  rep.ac_term = pairwise_sum(ac_terms);
  rep.boundary_term = pairwise_sum(bd_terms);
  rep.residual = std::abs(rep.gradient_term - rep.ac_term - rep.boundary_term);
  return rep;
}

double continuity_residual(const DensityField& field, const ConeField& cone) {
  const CylinderSet& cyl = field.cylinder();
  const auto& D = field.values();
  const TGrid& g = field.grid();
  const int T = g.nodes;
  if (T < 3) throw ValidationError("continuity check needs at least 3 grid nodes");
  const double h = g.step();
  const double dmax = D.maxCoeff();
  std::vector<double> worst(cyl.nodes().size(), 0.0);
  parallel_for(cyl.nodes().size(), [&](std::size_t i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (int k = 0; k < T; ++k) {
      double dt;
      if (k == 0) dt = (-3.0 * D(r, 0) + 4.0 * D(r, 1) - D(r, 2)) / (2.0 * h);
      else if (k == T - 1) dt = (3.0 * D(r, T - 1) - 4.0 * D(r, T - 2) + D(r, T - 3)) / (2.0 * h);
      else dt = (D(r, k + 1) - D(r, k - 1)) / (2.0 * h);
      const double div = divergence_ac(cone, cyl.flow_node(i, g.at(k)));
      worst[i] = std::max(worst[i], std::abs(dt - div * D(r, k)));
    }
  });
  return *std::max_element(worst.begin(), worst.end()) / dmax;
}

double lower_bound_certificate(const ConeField& field, const std::vector<Point>& samples, double margin) {
  const ManifoldParams& m = field.manifold();
  if (margin < 0.0) margin = 1e-6 * m.diameter();
  const double sk = m.sqrt_k();
  double best = std::numeric_limits<double>::infinity();
  for (const Point& x : samples) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const Anchor& a : field.potential().anchors()) dmin = std::min(dmin, distance(x, a.point, m));
    const int i = voronoi_assign(field, x).front();
    const double ri = distance(x, field.potential().anchors()[i].point, m);
    if (dmin <= margin || ri >= m.diameter() - margin) continue;
    const double bound = -(m.n - 1) * sk / std::tan(sk * dmin);
    best = std::min(best, divergence_ac_cone(field.potential().anchors()[i].point, x, m) - bound);
  }
  return best;
}

}  // namespace otray
