#include "otray/rays.hpp"

#include "otray/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace otray {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

Point TransportRay::at(double t, const ManifoldParams& m) const {
  return exp_map(base, Vec(t * direction.vec), m);
}

std::pair<double, double> alpha_beta(const Point& z, const Potential& u, const std::vector<Point>& X,
                                     const std::vector<Point>& Y, double tol) {
  const ManifoldParams& m = u.manifold();
  const double uz = u(z);
  double alpha = kNoEndpoint, beta = kNoEndpoint;
  for (const Point& y : Y) {
    const double d = distance(y, z, m);
    if (std::abs(uz - u(y) - d) <= tol) alpha = std::max(alpha, d);
  }
  for (const Point& x : X) {
    const double d = distance(x, z, m);
    if (std::abs(u(x) - uz - d) <= tol) beta = std::max(beta, d);
  }
  return {alpha, beta};
}

TransportRay ray_through(const Point& z, const Potential& u, const RayTraceConfig& cfg) {
  const ManifoldParams& m = u.manifold();
  const auto idx = argmax_cone(u, z);
  if (idx.size() != 1) throw AmbiguousDirectionError("point lies on a cell boundary; no unique ray direction");
  const int cell = idx.front();
  const Point& apex = u.anchors()[cell].point;
  const double diam = m.diameter();
  const double d = distance(z, apex, m);
  if (d <= 1e-12 * diam) throw AmbiguousDirectionError("point is an anchor apex");
  if (d >= diam - m.antipode_guard()) throw AmbiguousDirectionError("point is antipodal to its anchor");

  Tangent dir = log_map(z, apex, m);
  dir.vec.normalize();
  const double u0 = u(z);
  auto defect = [&](double t) { return std::abs(u(exp_map(z, Vec(t * dir.vec), m)) - u0 - t); };

  // t in [0, cap] along sign; returns the last parameter where u stays affine
  auto march = [&](double sign, double cap) {
    const double step = diam / cfg.steps_per_diameter;
    double good = 0.0;
    for (;;) {
      const double t = std::min(good + step, cap);
      if (defect(sign * t) > cfg.ray_tol) {
        double lo = good, hi = t;
        for (int b = 0; b < cfg.bisections; ++b) {
          const double mid = 0.5 * (lo + hi);
          (defect(sign * mid) > cfg.ray_tol ? hi : lo) = mid;
        }
        return lo;
      }
      good = t;
      if (t >= cap) return cap;
    }
  };

  TransportRay ray;
  ray.base = z;
  ray.direction = dir;
  ray.u_base = u0;
  ray.cell = cell;
  ray.t_upper = march(1.0, d);
  ray.t_lower = -march(-1.0, diam - d);
  if (ray.length() <= 1e-12 * diam) throw NotInTransportSetError("ray through the point has zero length");
  return ray;
}

double ray_affinity_error(const TransportRay& ray, const Potential& u, int samples) {
  const ManifoldParams& m = u.manifold();
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = ray.t_lower + ray.length() * k / std::max(1, samples - 1);
    worst = std::max(worst, std::abs(u(ray.at(t, m)) - ray.u_base - t));
  }
  return worst;
}

RegionSpec band_region(const ManifoldParams& m, double r1, double r2, int n_colat, int n_lon) {
  RegionSpec r;
  for (int a = 0; a < n_colat; ++a) {
    const double c = n_colat == 1 ? 0.5 * (r1 + r2) : r1 + (r2 - r1) * a / (n_colat - 1);
    for (int b = 0; b < n_lon; ++b)
      r.samples.push_back(from_colatitude(m, c, kTwoPi * (b + 0.5) / n_lon));
  }
  return r;
}

std::vector<SheafSet> build_sheaf_partition(const Potential& u, const RegionSpec& region, int k, int j,
                                            const RayTraceConfig& cfg) {
  if (k < 0 || j <= 0) throw ValidationError("sheaf partition needs k >= 0 and j >= 1");
  const ManifoldParams& m = u.manifold();
  const double scale = std::ldexp(1.0, k);
  const double margin = 1.0 / j;
  const double delta = 0.9 * m.diameter();

  struct Foot {
    Point point;
    TransportRay ray;
    std::size_t sample;
  };
  std::map<std::pair<long, int>, std::vector<Foot>> groups;
  for (std::size_t s = 0; s < region.samples.size(); ++s) {
    const Point& x = region.samples[s];
    TransportRay ray;
    try {
      ray = ray_through(x, u, cfg);
    } catch (const AmbiguousDirectionError&) {
      continue;
    } catch (const NotInTransportSetError&) {
      continue;
    }
    if (!(ray.t_upper > margin && -ray.t_lower > margin)) continue;
    const long w = static_cast<long>(std::floor(ray.u_base * scale));
    const double level = (static_cast<double>(w) + 0.5) / scale;
    const double shift = level - ray.u_base;
    if (shift < ray.t_lower || shift > ray.t_upper) continue;

    const double a = m.sqrt_k() * shift;
    TransportRay moved;
    moved.base = ray.at(shift, m);
    moved.direction = Tangent{moved.base, -std::sin(a) * (x.coords * m.sqrt_k()) + std::cos(a) * ray.direction.vec};
    moved.t_lower = ray.t_lower - shift;
    moved.t_upper = ray.t_upper - shift;
    moved.u_base = level;
    moved.cell = ray.cell;
    groups[{w, ray.cell}].push_back({moved.base, moved, s});
  }
  if (groups.empty())
    throw EmptyPartitionError("no sampled ray clears both endpoints by more than 1/j");

  std::vector<SheafSet> out;
  for (auto& [key, feet] : groups) {
    // greedy pieces of radius delta / 4 around their first foot
    std::vector<std::size_t> centers;
    std::vector<SheafSet> pieces;
    for (const Foot& f : feet) {
      std::size_t p = 0;
      while (p < centers.size() && distance(feet[centers[p]].point, f.point, m) > 0.25 * delta) ++p;
      if (p == centers.size()) {
        centers.push_back(static_cast<std::size_t>(&f - feet.data()));
        SheafSet s;
        s.level = (static_cast<double>(key.first) + 0.5) / scale;
        s.u_window = {static_cast<double>(key.first) / scale, static_cast<double>(key.first + 1) / scale};
        s.cell = key.second;
        s.window_index = key.first;
        pieces.push_back(std::move(s));
      }
      pieces[p].base_points.push_back(f.point);
      pieces[p].member_rays.push_back(f.ray);
      pieces[p].sample_indices.push_back(f.sample);
    }
    for (auto& s : pieces) out.push_back(std::move(s));
  }
  return out;
}

double ray_margin(const ManifoldParams& m) { return 1e-6 * m.diameter(); }

double CylinderSet::base_measure() const {
  double s = 0.0;
  for (const auto& n : nodes_) s += n.weight;
  return s;
}

Vec CylinderSet::grad_at(const Point& x) const {
  Tangent g = log_map(x, geom_.apex, manifold());
  const double nv = g.vec.norm();
  if (nv == 0.0) throw DegenerateGradientError("flow evaluated at the apex");
  return g.vec / nv;
}

Point CylinderSet::flow(const Point& y, double t) const {
  if (t == 0.0) return y;
  return exp_map(y, Vec(t * grad_at(y)), manifold());
}

Point CylinderSet::flow_node(std::size_t i, double t) const {
  const CylinderNode& nd = nodes_.at(i);
  return exp_map(nd.point, Vec(t * nd.grad), manifold());
}

bool CylinderSet::contains(const Point& x) const {
  const ManifoldParams& m = manifold();
  const auto vals = u_.cone_values(x);
  const double best = *std::max_element(vals.begin(), vals.end());
  if (vals[cell_] < best - kTieTolerance) return false;
  const double t = best - level_;
  const double slack = 1e-12 * m.diameter();
  if (t < h_minus_ - slack || t > h_plus_ + slack) return false;
  if (degenerate_) return distance(x, flow_node(0, t), m) <= 1e-9 * m.diameter();
  if (geom_.full) return true;
  if (m.n == 2) {
    double a = azimuth(geom_.apex, geom_.apex_frame, x, m) - geom_.phi0;
    a -= kTwoPi * std::floor(a / kTwoPi);
    return a <= geom_.phi1 - geom_.phi0;
  }
  // n >= 3 partial base: angular neighbourhood of the nodes, seen from the apex
  const Vec dx = log_map(geom_.apex, x, m).vec.normalized();
  for (const auto& nd : nodes_) {
    const Vec dn = log_map(geom_.apex, nd.point, m).vec.normalized();
    if (std::acos(std::clamp(dx.dot(dn), -1.0, 1.0)) <= geom_.angular_radius) return true;
  }
  return false;
}

CylinderSet make_cylinder(const Potential& u, int cell, double level, double h_minus, double h_plus,
                          std::vector<Point> base, std::optional<std::vector<double>> weights,
                          bool full, const RayTraceConfig& cfg) {
  const ManifoldParams& m = u.manifold();
  if (!(h_minus < 0.0 && 0.0 < h_plus))
    throw WindowOrderError("cylinder window needs h_minus < 0 < h_plus");
  if (base.empty()) throw ValidationError("cylinder base is empty");
  if (cell < 0 || cell >= static_cast<int>(u.size())) throw ValidationError("cylinder cell out of range");
  if (weights && weights->size() != base.size()) throw ValidationError("one weight per base point expected");

  CylinderSet c;
  c.u_ = u;
  c.cell_ = cell;
  c.level_ = level;
  c.h_minus_ = h_minus;
  c.h_plus_ = h_plus;
  c.geom_.apex = u.anchors()[cell].point;
  c.geom_.rho0 = u.anchors()[cell].value - level;
  c.geom_.apex_frame = polar_frame(c.geom_.apex, m);
  c.geom_.full = full;

  const double eps = ray_margin(m);
  c.r_minus_ = -m.diameter();
  c.r_plus_ = m.diameter();
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const Point& y = base[i];
    validate_point(y, m);
    const TransportRay ray = ray_through(y, u, cfg);
    if (ray.cell != cell) throw ValidationError("base point " + std::to_string(i) + " lies outside the cylinder's cell");
    if (std::abs(ray.u_base - level) > 1e-9) throw ValidationError("base point " + std::to_string(i) + " is off the level set");
    if (ray.t_lower > h_minus - eps || ray.t_upper < h_plus + eps) bad.push_back(i);
    c.r_minus_ = std::max(c.r_minus_, ray.t_lower);
    c.r_plus_ = std::min(c.r_plus_, ray.t_upper);
    CylinderNode nd;
    nd.point = y;
    nd.grad = ray.direction.vec;
    nd.frame = tangent_complement(y, {nd.grad}, m);
    c.nodes_.push_back(std::move(nd));
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << "rays too short for the window at base points";
    for (std::size_t i : bad) os << ' ' << i;
    throw InsufficientRayLengthError(os.str());
  }

  const std::size_t N = c.nodes_.size();
  const double shell = unit_sphere_measure(m.n - 1) * std::pow(s_k(c.geom_.rho0, m.K), m.n - 1);
  if (m.n == 2 && N >= 2) {
    std::vector<std::pair<double, std::size_t>> az;
    for (std::size_t i = 0; i < N; ++i)
      az.push_back({azimuth(c.geom_.apex, c.geom_.apex_frame, c.nodes_[i].point, m), i});
    std::sort(az.begin(), az.end());
    std::vector<double> gap(N);  // gap after sorted node k
    for (std::size_t k = 0; k < N; ++k)
      gap[k] = k + 1 < N ? az[k + 1].first - az[k].first : az[0].first + kTwoPi - az[k].first;
    const double s0 = s_k(c.geom_.rho0, m.K);
    std::vector<double> w(N);
    if (full) {
      for (std::size_t k = 0; k < N; ++k) w[az[k].second] = 0.5 * s0 * (gap[k] + gap[(k + N - 1) % N]);
      c.geom_.phi0 = 0.0;
      c.geom_.phi1 = kTwoPi;
    } else {
      // open the circle at its widest gap
      const std::size_t widest = static_cast<std::size_t>(std::max_element(gap.begin(), gap.end()) - gap.begin());
      std::vector<std::size_t> order;
      for (std::size_t k = 1; k <= N; ++k) order.push_back((widest + k) % N);
      std::vector<double> g;  // gaps along the arc
      for (std::size_t k = 0; k + 1 < N; ++k) g.push_back(gap[order[k]]);
      for (std::size_t k = 0; k < N; ++k) {
        const double left = k == 0 ? g.front() : g[k - 1];
        const double right = k + 1 == N ? g.back() : g[k];
        w[az[order[k]].second] = 0.5 * s0 * (left + right);
      }
      c.geom_.phi0 = az[order.front()].first - 0.5 * g.front();
      double span = 0.0;
      for (double x : g) span += x;
      c.geom_.phi1 = c.geom_.phi0 + span + 0.5 * (g.front() + g.back());
    }
    if (!weights) weights = w;
  } else if (N >= 2) {
    if (!weights) weights = std::vector<double>(N, shell / static_cast<double>(N));
    if (!full) {
      double spacing = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        double nearest = std::numbers::pi;
        const Vec di = log_map(c.geom_.apex, c.nodes_[i].point, m).vec.normalized();
        for (std::size_t k = 0; k < N; ++k) {
          if (k == i) continue;
          const Vec dk = log_map(c.geom_.apex, c.nodes_[k].point, m).vec.normalized();
          nearest = std::min(nearest, std::acos(std::clamp(di.dot(dk), -1.0, 1.0)));
        }
        spacing = std::max(spacing, nearest);
      }
      c.geom_.angular_radius = spacing;
    }
  } else {
    c.degenerate_ = !full;
    if (!weights) weights = std::vector<double>{full ? shell : 1.0};
  }
  for (std::size_t i = 0; i < N; ++i) c.nodes_[i].weight = (*weights)[i];
  return c;
}

CylinderSet make_degenerate_cylinder(const Potential& u, const Point& y, double h_minus, double h_plus,
                                     const RayTraceConfig& cfg) {
  const TransportRay ray = ray_through(y, u, cfg);
  CylinderSet c = make_cylinder(u, ray.cell, ray.u_base, h_minus, h_plus, {y}, std::vector<double>{1.0}, false, cfg);
  c.degenerate_ = true;
  c.nodes_.front().frame.clear();
  return c;
}

CylinderSet CylinderSet::with_window(double h_minus, double h_plus) const {
  std::vector<Point> pts;
  std::vector<double> w;
  for (const auto& nd : nodes_) {
    pts.push_back(nd.point);
    w.push_back(nd.weight);
  }
  if (degenerate_) return make_degenerate_cylinder(u_, pts.front(), h_minus, h_plus);
  CylinderSet c = make_cylinder(u_, cell_, level_, h_minus, h_plus, pts, w, geom_.full);
  c.geom_ = geom_;
  return c;
}

CylinderSet make_polar_cylinder(const Potential& u, int cell, double level, double h_minus,
                                double h_plus, int nodes, double phi0, double phi1,
                                std::uint64_t seed, const RayTraceConfig& cfg) {
  const ManifoldParams& m = u.manifold();
  if (nodes < 1) throw ValidationError("cylinder needs at least one base node");
  const Point& apex = u.anchors().at(cell).point;
  const double rho0 = u.anchors()[cell].value - level;
  if (!(rho0 > 0.0 && rho0 < m.diameter())) throw ValidationError("level set does not meet the cell's cone");
  const auto frame = polar_frame(apex, m);
  std::vector<Point> pts;
  std::vector<double> w;
  bool full = true;
  if (m.n == 2) {
    const double span = phi1 - phi0;
    if (!(span > 0.0)) throw ValidationError("empty azimuth arc");
    full = span >= kTwoPi - 1e-12;
    const double len = full ? kTwoPi : span;
    for (int k = 0; k < nodes; ++k) {
      const double phi = phi0 + len * (k + 0.5) / nodes;
      Vec dir(2);
      dir << std::cos(phi), std::sin(phi);
      pts.push_back(polar_point(apex, frame, rho0, dir, m));
      w.push_back(s_k(rho0, m.K) * len / nodes);
    }
  } else {
    Rng rng(seed);
    const double shell = unit_sphere_measure(m.n - 1) * std::pow(s_k(rho0, m.K), m.n - 1);
    for (int k = 0; k < nodes; ++k) {
      Vec dir(m.n);
      for (int c = 0; c < m.n; ++c) dir(c) = rng.normal();
      pts.push_back(polar_point(apex, frame, rho0, dir, m));
      w.push_back(shell / nodes);
    }
  }
  CylinderSet c = make_cylinder(u, cell, level, h_minus, h_plus, std::move(pts), w, full, cfg);
  if (m.n == 2 && !full) {
    c.geom_.phi0 = phi0;
    c.geom_.phi1 = phi1;
  }
  return c;
}

CylinderSet build_cylinder(const SheafSet& sheaf, const Potential& u, double h_minus, double h_plus,
                           const RayTraceConfig& cfg) {
  if (sheaf.base_points.empty()) throw ValidationError("sheaf has no base points");
  if (sheaf.base_points.size() == 1)
    return make_degenerate_cylinder(u, sheaf.base_points.front(), h_minus, h_plus, cfg);
  return make_cylinder(u, sheaf.cell, sheaf.level, h_minus, h_plus, sheaf.base_points, std::nullopt, false, cfg);
}

Point flow(const CylinderSet& cyl, const Point& y, double t) {
  if (t < cyl.h_minus() || t > cyl.h_plus())
    throw OutOfWindowError("flow parameter outside [h_minus, h_plus]");
  return cyl.flow(y, t);
}

}  // namespace otray
