#include "otray/measure.hpp"

#include "otray/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace otray {

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, const ManifoldParams& m)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidMeasureError("measure has no atoms");
  std::vector<double> masses;
  for (const Atom& a : atoms_) {
    if (!(a.mass > 0.0) || !std::isfinite(a.mass))
      throw InvalidMeasureError("atom masses must be positive and finite");
    try {
      validate_point(a.point, m);
    } catch (const InvalidPointError& e) {
      throw InvalidMeasureError(std::string("atom: ") + e.what());
    }
    masses.push_back(a.mass);
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    for (std::size_t j = i + 1; j < atoms_.size(); ++j)
      if (distance(atoms_[i].point, atoms_[j].point, m) <= 1e-9)
        throw InvalidMeasureError("atoms " + std::to_string(i) + " and " + std::to_string(j) +
                                  " coincide");
  total_ = pairwise_sum(masses);
}

Potential::Potential(std::vector<Anchor> anchors, const ManifoldParams& m)
    : anchors_(std::move(anchors)), m_(m) {
  if (anchors_.empty()) throw ValidationError("potential needs at least one anchor");
  for (const Anchor& a : anchors_) validate_point(a.point, m_);
}

std::vector<double> Potential::cone_values(const Point& x) const {
  std::vector<double> out;
  out.reserve(anchors_.size());
  for (const Anchor& a : anchors_) out.push_back(a.value - distance(x, a.point, m_));
  return out;
}

double Potential::operator()(const Point& x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const Anchor& a : anchors_) best = std::max(best, a.value - distance(x, a.point, m_));
  return best;
}

double Potential::value_at(const Point& x) const {
  for (const Anchor& a : anchors_)
    if (distance(x, a.point, m_) <= 1e-9) return a.value;
  return (*this)(x);
}

double Potential::anchor_lipschitz_gap() const {
  double gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < anchors_.size(); ++i)
    for (std::size_t j = i + 1; j < anchors_.size(); ++j)
      gap = std::max(gap, std::abs(anchors_[i].value - anchors_[j].value) -
                              distance(anchors_[i].point, anchors_[j].point, m_));
  return anchors_.size() < 2 ? 0.0 : gap;
}

Potential Potential::with_anchor(const Anchor& a) const {
  auto next = anchors_;
  next.push_back(a);
  return Potential(std::move(next), m_);
}

Potential Potential::shifted(double c) const {
  auto next = anchors_;
  for (Anchor& a : next) a.value += c;
  return Potential(std::move(next), m_);
}

double cone_extension(const Potential& u, const Point& x) { return u(x); }

std::vector<int> argmax_cone(const Potential& u, const Point& x, double tol) {
  const auto vals = u.cone_values(x);
  const double best = *std::max_element(vals.begin(), vals.end());
  std::vector<int> out;
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (vals[i] >= best - tol) out.push_back(static_cast<int>(i));
  return out;
}

bool OptimalPairSet::contains(std::size_t xi, std::size_t yi) const {
  return std::any_of(pairs.begin(), pairs.end(),
                     [&](const OptimalPair& p) { return p.x_index == xi && p.y_index == yi; });
}

OptimalPairSet subdifferential_pairs(const Potential& u, const std::vector<Point>& X,
                                     const std::vector<Point>& Y, double tol) {
  const ManifoldParams& m = u.manifold();
  OptimalPairSet out;
  out.tolerance = tol;
  std::vector<double> ux, uy;
  for (const Point& x : X) ux.push_back(u(x));
  for (const Point& y : Y) uy.push_back(u(y));
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < Y.size(); ++j)
      if (std::abs(ux[i] - uy[j] - distance(X[i], Y[j], m)) <= tol) out.pairs.push_back({i, j});
  return out;
}

double lipschitz_violation(const Potential& u, const std::vector<Point>& samples) {
  if (samples.size() < 2) return 0.0;
  const ManifoldParams& m = u.manifold();
  std::vector<double> vals;
  for (const Point& p : samples) vals.push_back(u.value_at(p));
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j)
      worst = std::max(worst, std::abs(vals[i] - vals[j]) - distance(samples[i], samples[j], m));
  return worst;
}

Point random_point(const ManifoldParams& m, Rng& rng) {
  Vec g(m.ambient_dim());
  do {
    for (int k = 0; k < g.size(); ++k) g(k) = rng.normal();
  } while (g.norm() < 1e-12);
  return project_to_sphere(g, m);
}

Vec random_unit_tangent(const Point& p, const ManifoldParams& m, Rng& rng) {
  Vec v;
  do {
    Vec g(m.ambient_dim());
    for (int k = 0; k < g.size(); ++k) g(k) = rng.normal();
    v = project_to_tangent(p, g, m);
  } while (v.norm() < 1e-8);
  return v.normalized();
}

}  // namespace otray
