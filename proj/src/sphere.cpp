#include "otray/sphere.hpp"

#include "otray/errors.hpp"

#include <algorithm>
#include <string>

namespace otray {

ManifoldParams::ManifoldParams(int dim, double curvature) : n(dim), K(curvature) {
  if (n < 2) throw ValidationError("manifold dimension n must be >= 2, got " + std::to_string(n));
  if (!(K > 0.0) || !std::isfinite(K))
    throw ValidationError("curvature K must be a positive finite number");
}

void validate_point(const Point& p, const ManifoldParams& m) {
  if (p.coords.size() != m.ambient_dim())
    throw InvalidPointError("point has " + std::to_string(p.coords.size()) +
                            " coordinates, expected " + std::to_string(m.ambient_dim()));
  const double rel = std::abs(p.coords.norm() * m.sqrt_k() - 1.0);
  if (!(rel <= 1e-12)) throw InvalidPointError("point is not on the sphere of radius 1/sqrt(K)");
}

void validate_tangent(const Tangent& v, const ManifoldParams& m) {
  validate_point(v.base, m);
  if (v.vec.size() != m.ambient_dim()) throw InvalidPointError("tangent has the wrong dimension");
  const double scale = std::max(1.0, v.vec.norm());
  if (std::abs(v.vec.dot(v.base.coords) * m.sqrt_k()) > 1e-12 * scale)
    throw InvalidPointError("vector is not tangent at its base point");
}

Point project_to_sphere(const Vec& v, const ManifoldParams& m) {
  const double nv = v.norm();
  if (!(nv > 0.0)) throw InvalidPointError("cannot project the zero vector onto the sphere");
  return Point(v * (m.radius() / nv));
}

Vec project_to_tangent(const Point& p, const Vec& v, const ManifoldParams& m) {
  return v - (v.dot(p.coords) * m.K) * p.coords;
}

Point north_pole(const ManifoldParams& m) {
  Vec c = Vec::Zero(m.ambient_dim());
  c(m.n) = m.radius();
  return Point(c);
}

Point south_pole(const ManifoldParams& m) {
  Vec c = Vec::Zero(m.ambient_dim());
  c(m.n) = -m.radius();
  return Point(c);
}

Point from_colatitude(const ManifoldParams& m, double colatitude, double longitude) {
  const double a = m.sqrt_k() * colatitude;
  Vec c = Vec::Zero(m.ambient_dim());
  c(0) = std::sin(a) * std::cos(longitude);
  c(1) = std::sin(a) * std::sin(longitude);
  c(m.n) = std::cos(a);
  return Point(c * m.radius());
}

double s_k(double t, double K) {
  const double r = std::sqrt(K);
  return std::sin(r * t) / r;
}

double s_k_prime(double t, double K) { return std::cos(std::sqrt(K) * t); }

double distance(const Point& p, const Point& q, const ManifoldParams& m) {
  // 2 atan2(|p-q|, |p+q|) is the arccos of the normalized inner product,
  // without the loss of precision near 0 and pi.
  const double sk = m.sqrt_k();
  const double chord = ((p.coords - q.coords) * sk).norm();
  const double sum = ((p.coords + q.coords) * sk).norm();
  const double angle = 2.0 * std::atan2(chord, sum);
  return std::clamp(angle, 0.0, std::numbers::pi) / sk;
}

Point exp_map(const Point& p, const Vec& v, const ManifoldParams& m) {
  const double len = v.norm();
  if (len == 0.0) return p;
  const double sk = m.sqrt_k();
  Vec out = std::cos(sk * len) * p.coords + (s_k(len, m.K) / len) * v;
  // keep accumulated rounding from drifting off the sphere
  out *= m.radius() / out.norm();
  return Point(std::move(out));
}

Point exp_map(const Point& p, const Tangent& v, const ManifoldParams& m) {
  return exp_map(p, v.vec, m);
}

Tangent log_map(const Point& p, const Point& q, const ManifoldParams& m) {
  const double d = distance(p, q, m);
  if (d >= m.diameter() - m.antipode_guard())
    throw AntipodalError("log_map: points are (nearly) antipodal; the minimizing geodesic is not unique");
  Vec w = q.coords - (q.coords.dot(p.coords) * m.K) * p.coords;
  const double wn = w.norm();
  if (d == 0.0 || wn == 0.0) return Tangent{p, Vec::Zero(m.ambient_dim())};
  return Tangent{p, w * (d / wn)};
}

Tangent grad_distance(const Point& a, const Point& x, const ManifoldParams& m) {
  const double d = distance(a, x, m);
  if (d <= 1e-12 * m.diameter())
    throw DegenerateGradientError("grad_distance: x coincides with the anchor");
  if (d >= m.diameter() - m.antipode_guard())
    throw DegenerateGradientError("grad_distance: x is antipodal to the anchor");
  Tangent back = log_map(x, a, m);
  back.vec /= -back.vec.norm();
  return back;
}

std::vector<Vec> tangent_complement(const Point& p, const std::vector<Vec>& exclude,
                                    const ManifoldParams& m) {
  const int dim = m.ambient_dim();
  std::vector<Vec> basis;
  basis.reserve(dim);
  basis.push_back(p.coords.normalized());
  for (const Vec& e : exclude) {
    Vec v = e;
    for (const Vec& b : basis) v -= v.dot(b) * b;
    const double nv = v.norm();
    if (nv < 1e-10 * std::max(1.0, e.norm())) throw SingularFrameError("tangent_complement: dependent exclusion vectors");
    basis.push_back(v / nv);
  }
  const std::size_t head = basis.size();
  // Modified Gram-Schmidt over the canonical axes, largest residual first.
  while (static_cast<int>(basis.size()) < dim) {
    int best = -1;
    double best_norm = 0.0;
    Vec best_vec;
    for (int k = 0; k < dim; ++k) {
      Vec v = Vec::Unit(dim, k);
      for (const Vec& b : basis) v -= v.dot(b) * b;
      const double nv = v.norm();
      if (nv > best_norm + 1e-12) {
        best = k;
        best_norm = nv;
        best_vec = v;
      }
    }
    if (best < 0) throw SingularFrameError("tangent_complement: could not complete the frame");
    basis.push_back(best_vec / best_norm);
  }
  return {basis.begin() + static_cast<std::ptrdiff_t>(head), basis.end()};
}

std::vector<Vec> polar_frame(const Point& p, const ManifoldParams& m) {
  return tangent_complement(p, {}, m);
}

Point polar_point(const Point& pole, const std::vector<Vec>& frame, double r, const Vec& dir,
                  const ManifoldParams& m) {
  Vec v = Vec::Zero(m.ambient_dim());
  for (std::size_t k = 0; k < frame.size(); ++k) v += dir(static_cast<Eigen::Index>(k)) * frame[k];
  const double nv = v.norm();
  if (nv == 0.0) return pole;
  return exp_map(pole, v * (r / nv), m);
}

double azimuth(const Point& pole, const std::vector<Vec>& frame, const Point& x,
               const ManifoldParams& m) {
  // Projection onto the frame plane is proportional to log_pole(x) and
  // stays well defined up to (but excluding) the antipode.
  const Vec w = x.coords - (x.coords.dot(pole.coords) * m.K) * pole.coords;
  const double c0 = w.dot(frame.at(0));
  const double c1 = w.dot(frame.at(1));
  if (c0 == 0.0 && c1 == 0.0) return 0.0;
  double a = std::atan2(c1, c0);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

double unit_sphere_measure(int d) {
  const double h = 0.5 * (d + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double total_volume(const ManifoldParams& m) {
  return unit_sphere_measure(m.n) * std::pow(m.radius(), m.n);
}

}  // namespace otray
