#include "otray/density.hpp"

#include "otray/errors.hpp"
#include "otray/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace otray {

double default_fd_step(const ManifoldParams& m) {
  return 1e-5 * std::min(m.diameter(), std::numbers::pi);
}

double gram_volume(const Eigen::MatrixXd& cols) {
  if (cols.cols() == 0) return 1.0;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(cols);
  const Eigen::MatrixXd R = qr.matrixQR().topRows(cols.cols()).triangularView<Eigen::Upper>();
  double v = 1.0;
  for (Eigen::Index k = 0; k < cols.cols(); ++k) v *= std::abs(R(k, k));
  return v;
}

double slice_jacobian(const std::function<Point(const Point&)>& map, const Point& x0,
                      const std::vector<Vec>& tangents, double h, const ManifoldParams& m) {
  const auto k = static_cast<Eigen::Index>(tangents.size());
  if (k == 0) return 1.0;
  Eigen::MatrixXd dom(m.ambient_dim(), k), img(m.ambient_dim(), k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Point xp = exp_map(x0, Vec(h * tangents[c]), m);
    const Point xm = exp_map(x0, Vec(-h * tangents[c]), m);
    dom.col(c) = xp.coords - xm.coords;
    img.col(c) = map(xp).coords - map(xm).coords;
  }
  const double vd = gram_volume(dom);
  if (!(vd > 1e-300) || vd < 1e-8 * std::pow(2.0 * h, static_cast<double>(k)))
    throw SingularFrameError("degenerate base frame");
  return gram_volume(img) / vd;
}

double jacobian_flow_numeric(const CylinderSet& cyl, std::size_t node, double t, double h_fd) {
  if (cyl.degenerate()) return 1.0;
  const CylinderNode& nd = cyl.nodes().at(node);
  return slice_jacobian([&](const Point& x) { return cyl.flow(x, t); }, nd.point, nd.frame, h_fd,
                        cyl.manifold());
}

double jacobian_flow_numeric(const CylinderSet& cyl, const Point& y, double t, double h_fd) {
  if (cyl.degenerate()) return 1.0;
  const ManifoldParams& m = cyl.manifold();
  const auto frame = tangent_complement(y, {cyl.grad_at(y)}, m);
  return slice_jacobian([&](const Point& x) { return cyl.flow(x, t); }, y, frame, h_fd, m);
}

double jacobian_bound_formula(double r, double t, double theta, const ManifoldParams& m) {
  if (!(r > 0.0 && r < m.diameter())) throw DomainError("apex distance r must lie in (0, pi/sqrt(K))");
  if (!(t < r)) throw DomainError("contraction past the apex (t >= r)");
  if (!(theta >= 0.0 && theta <= 0.5 * std::numbers::pi)) throw DomainError("theta must lie in [0, pi/2]");
  const double rho = s_k(r - t, m.K) / s_k(r, m.K);
  const double c = std::cos(theta), s = std::sin(theta);
  return std::pow(rho, m.n - 1) * std::sqrt(c * c + s * s / (rho * rho));
}

double tilted_slice_jacobian(double r, double t, double theta, const ManifoldParams& m, double h_fd) {
  jacobian_bound_formula(r, t, theta, m);  // domain checks
  const Point apex = north_pole(m);
  const Point x0 = from_colatitude(m, r, 0.0);
  const Vec radial = grad_distance(apex, x0, m).vec;
  const auto rest = tangent_complement(x0, {radial}, m);
  const Vec& w = rest.front();
  std::vector<Vec> tangents{-std::sin(theta) * radial + std::cos(theta) * w};
  for (std::size_t k = 1; k < rest.size(); ++k) tangents.push_back(rest[k]);
  auto contract = [&](const Point& x) {
    const Tangent v = log_map(apex, x, m);
    const double d = v.vec.norm();
    return exp_map(apex, Vec(v.vec * ((d - t) / d)), m);
  };
  return slice_jacobian(contract, x0, tangents, h_fd, m);
}

std::pair<double, double> pushforward_factors(double s, double t, double h_minus, double h_plus,
                                              const ManifoldParams& m) {
  if (!(h_minus < s && s <= t && t < h_plus))
    throw WindowOrderError("pushforward factors need h_minus < s <= t < h_plus");
  if (h_plus - h_minus >= m.diameter()) throw DomainError("window longer than the diameter");
  const double p = m.n - 1;
  const double lower = std::pow(s_k(h_plus - t, m.K) / s_k(h_plus - s, m.K), p);
  const double upper = std::pow(s_k(t - h_minus, m.K) / s_k(s - h_minus, m.K), p);
  return {lower, upper};
}

double DensityField::at(std::size_t node, double t) const {
  const int N = grid_.nodes;
  const double h = grid_.step();
  int k = static_cast<int>(std::floor((t - grid_.lo) / h)) - 1;
  k = std::clamp(k, 0, std::max(0, N - 4));
  const int cnt = std::min(4, N);
  double sum = 0.0;
  for (int a = 0; a < cnt; ++a) {
    double l = 1.0;
    const double ta = grid_.at(k + a);
    for (int b = 0; b < cnt; ++b)
      if (b != a) l *= (t - grid_.at(k + b)) / (ta - grid_.at(k + b));
    sum += l * values_(static_cast<Eigen::Index>(node), k + a);
  }
  return sum;
}

DensityField density_D(const CylinderSet& cyl, int grid_nodes, double h_fd) {
  if (grid_nodes < 2) throw ValidationError("t-grid needs at least 2 nodes");
  if (h_fd <= 0.0) h_fd = default_fd_step(cyl.manifold());
  const TGrid grid{cyl.h_minus(), cyl.h_plus(), grid_nodes};
  const auto N = static_cast<Eigen::Index>(cyl.nodes().size());
  Eigen::MatrixXd values(N, grid_nodes);
  parallel_for(static_cast<std::size_t>(N) * grid_nodes, [&](std::size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx / grid_nodes);
    const int k = static_cast<int>(idx % grid_nodes);
    values(i, k) = jacobian_flow_numeric(cyl, static_cast<std::size_t>(i), grid.at(k), h_fd);
  });
  return DensityField(cyl, grid, std::move(values), h_fd);
}

double lipschitz_modulus_t(const DensityField& field, std::size_t node) {
  const auto& v = field.values();
  const auto i = static_cast<Eigen::Index>(node);
  double worst = 0.0;
  for (int k = 0; k + 1 < field.grid().nodes; ++k)
    worst = std::max(worst, std::abs(v(i, k + 1) - v(i, k)) / (field.grid().at(k + 1) - field.grid().at(k)));
  return worst;
}

double lipschitz_bound_t(const DensityField& field, std::size_t node) {
  const CylinderSet& cyl = field.cylinder();
  const ManifoldParams& m = cyl.manifold();
  const double sk = m.sqrt_k();
  const auto i = static_cast<Eigen::Index>(node);
  double sup_d = 0.0, sup_log = 0.0;
  for (int k = 0; k < field.grid().nodes; ++k) {
    const double t = field.grid().at(k);
    sup_d = std::max(sup_d, field.values()(i, k));
    const double a = sk / std::tan(sk * (t - cyl.ray_minus()));
    const double b = sk / std::tan(sk * (cyl.ray_plus() - t));
    sup_log = std::max({sup_log, std::abs(a), std::abs(b)});
  }
  return sup_d * (m.n - 1) * sup_log;
}

double sandwich_slack(const DensityField& field, std::size_t node, double s, double t,
                      double h_minus, double h_plus) {
  const auto [lower, upper] = pushforward_factors(s, t, h_minus, h_plus, field.cylinder().manifold());
  const double ds = field.at(node, s), dt = field.at(node, t);
  return std::min(dt - lower * ds, upper * ds - dt) / dt;
}

double flow_duality_error(const CylinderSet& cyl, std::size_t node, double t, double h_fd) {
  if (cyl.degenerate()) return 0.0;
  const ManifoldParams& m = cyl.manifold();
  const double fwd = jacobian_flow_numeric(cyl, node, t, h_fd);
  const Point yt = cyl.flow_node(node, t);
  const auto frame = tangent_complement(yt, {cyl.grad_at(yt)}, m);
  const double rev = slice_jacobian([&](const Point& x) { return cyl.flow(x, -t); }, yt, frame, h_fd, m);
  return std::abs(fwd * rev - 1.0);
}

}  // namespace otray
