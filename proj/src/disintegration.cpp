#include "otray/disintegration.hpp"

#include "otray/errors.hpp"
#include "otray/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace otray {
namespace {

constexpr double kPi = std::numbers::pi;

// 4-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 4> kGaussX{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                        0.8611363115940526};
constexpr std::array<double, 4> kGaussW{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                        0.3478548451374538};

Point sphere_point_z(const ManifoldParams& m, double z, double lon) {
  return from_colatitude(m, std::acos(std::clamp(z, -1.0, 1.0)) / m.sqrt_k(), lon);
}

Estimate stratified_s2(const TestFunction& phi, const std::function<bool(const Point&)>& in_region,
                       const QuadratureSpec& q, const ManifoldParams& m) {
  const auto rows = static_cast<std::size_t>(std::max(1.0, std::round(std::sqrt(q.samples / kPi))));
  const std::size_t cols = std::max<std::size_t>(2, q.samples / rows) & ~std::size_t{1};
  const double cell = 4.0 * kPi / (m.K * static_cast<double>(rows * cols));
  std::vector<double> f(rows * cols);
  parallel_for(rows, [&](std::size_t r) {
    Rng rng = Rng::substream(q.seed, r);
    for (std::size_t c = 0; c < cols; ++c) {
      const double z = -1.0 + 2.0 * (static_cast<double>(r) + rng.uniform()) / static_cast<double>(rows);
      const double lon = 2.0 * kPi * (static_cast<double>(c) + rng.uniform()) / static_cast<double>(cols);
      const Point x = sphere_point_z(m, z, lon);
      f[r * cols + c] = in_region(x) ? phi(x) : 0.0;
    }
  });
  std::vector<double> diffs(f.size() / 2);
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    const double d = f[2 * k] - f[2 * k + 1];
    diffs[k] = d * d;
  }
  Estimate e;
  e.value = cell * pairwise_sum(f);
  e.stderr_ = cell * std::sqrt(pairwise_sum(diffs));
  e.samples = f.size();
  return e;
}

Estimate plain_mc(const TestFunction& phi, const std::function<bool(const Point&)>& in_region,
                  const QuadratureSpec& q, const ManifoldParams& m) {
  const std::size_t N = q.samples;
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(N, 256));
  std::vector<double> f(N);
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng = Rng::substream(q.seed, c);
    for (std::size_t i = c * N / chunks; i < (c + 1) * N / chunks; ++i) {
      const Point x = random_point(m, rng);
      f[i] = in_region(x) ? phi(x) : 0.0;
    }
  });
  const double vol = total_volume(m);
  const double mean = pairwise_sum(f) / static_cast<double>(N);
  std::vector<double> sq(N);
  for (std::size_t i = 0; i < N; ++i) sq[i] = (f[i] - mean) * (f[i] - mean);
  const double var = N > 1 ? pairwise_sum(sq) / static_cast<double>(N - 1) : 0.0;
  return {vol * mean, vol * std::sqrt(var / static_cast<double>(N)), N};
}

Estimate product_grid_s2(const TestFunction& phi, const std::function<bool(const Point&)>& in_region,
                         const QuadratureSpec& q, const ManifoldParams& m) {
  const auto rows = static_cast<std::size_t>(std::max(1.0, std::round(std::sqrt(q.samples / 2.0))));
  const std::size_t cols = std::max<std::size_t>(1, q.samples / rows);
  const double dth = kPi / static_cast<double>(rows), dph = 2.0 * kPi / static_cast<double>(cols);
  std::vector<double> f(rows * cols);
  parallel_for(rows, [&](std::size_t r) {
    const double th = (static_cast<double>(r) + 0.5) * dth;
    const double area = std::sin(th) * dth * dph / m.K;
    for (std::size_t c = 0; c < cols; ++c) {
      const Point x = from_colatitude(m, th / m.sqrt_k(), (static_cast<double>(c) + 0.5) * dph);
      f[r * cols + c] = in_region(x) ? area * phi(x) : 0.0;
    }
  });
  return {pairwise_sum(f), 0.0, f.size()};
}

bool same_cylinder(const CylinderSet& a, const CylinderSet& b) {
  if (a.nodes().size() != b.nodes().size() || a.cell() != b.cell()) return false;
  if (a.h_minus() != b.h_minus() || a.h_plus() != b.h_plus() || a.level() != b.level()) return false;
  for (std::size_t i = 0; i < a.nodes().size(); ++i)
    if ((a.nodes()[i].point.coords - b.nodes()[i].point.coords).norm() != 0.0) return false;
  return true;
}

}  // namespace

Estimate integrate_volume(const TestFunction& phi, const std::function<bool(const Point&)>& in_region,
                          const QuadratureSpec& q, const ManifoldParams& m) {
  if (q.samples == 0) throw ValidationError("quadrature needs samples > 0");
  if (q.method == QuadratureMethod::ProductGrid) {
    if (m.n != 2) throw ValidationError("product-grid quadrature is implemented for n = 2 only");
    return product_grid_s2(phi, in_region, q, m);
  }
  if (m.n == 2) return stratified_s2(phi, in_region, q, m);
  return plain_mc(phi, in_region, q, m);
}

Estimate integrate_volume(const TestFunction& phi, std::span<const CylinderSet> region,
                          const QuadratureSpec& q, const ManifoldParams& m) {
  return integrate_volume(
      phi,
      [&](const Point& x) {
        return std::any_of(region.begin(), region.end(), [&](const CylinderSet& c) { return c.contains(x); });
      },
      q, m);
}

Estimate integrate_volume(const TestFunction& phi, const QuadratureSpec& q, const ManifoldParams& m) {
  return integrate_volume(phi, [](const Point&) { return true; }, q, m);
}

double integrate_rays(const TestFunction& phi, const CylinderSet& cyl, const DensityField& field,
                      std::optional<std::pair<double, double>> sub_window) {
  if (!same_cylinder(cyl, field.cylinder())) throw FieldMismatchError("density field was built on another cylinder");
  double lo = cyl.h_minus(), hi = cyl.h_plus();
  if (sub_window) {
    if (sub_window->first < lo || sub_window->second > hi || sub_window->first > sub_window->second)
      throw OutOfWindowError("sub-window must lie inside the cylinder window");
    lo = sub_window->first;
    hi = sub_window->second;
  }
  const bool band = phi.kind() == TestFunctionKind::BandIndicator && !phi.composite();
  if (band) {
    // u(Phi^t y) = level + t, so the indicator is 1 on an exact t-interval
    lo = std::max(lo, phi.band().first - cyl.level());
    hi = std::min(hi, phi.band().second - cyl.level());
  }
  if (!(hi > lo)) return 0.0;

  const TGrid& g = field.grid();
  const std::size_t N = cyl.nodes().size();
  std::vector<double> per_node(N);
  parallel_for(N, [&](std::size_t i) {
    std::vector<double> terms;
    for (int k = 0; k + 1 < g.nodes; ++k) {
      const double a = std::max(lo, g.at(k)), b = std::min(hi, g.at(k + 1));
      if (!(b > a)) continue;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int p = 0; p < 4; ++p) {
        const double t = mid + half * kGaussX[p];
        const double f = band ? 1.0 : phi(cyl.flow_node(i, t));
        terms.push_back(half * kGaussW[p] * f * field.at(i, t));
      }
    }
    per_node[i] = cyl.nodes()[i].weight * pairwise_sum(terms);
  });
  const double total = pairwise_sum(per_node);
  if (band) {
    // the indicator's value is its scale; evaluate once on a point of the band
    const Point probe = cyl.flow_node(0, 0.5 * (lo + hi));
    return total * phi(probe);
  }
  return total;
}

ResidualReport disintegration_residual(const TestFunction& phi, std::span<const CylinderSet> cover,
                                       std::span<const DensityField> fields, const QuadratureSpec& q) {
  if (cover.empty()) throw ValidationError("empty cylinder cover");
  if (cover.size() != fields.size()) throw FieldMismatchError("one density field per cylinder expected");
  const ManifoldParams& m = cover.front().manifold();
  const Estimate lhs = integrate_volume(phi, cover, q, m);
  std::vector<double> parts;
  for (std::size_t c = 0; c < cover.size(); ++c) parts.push_back(integrate_rays(phi, cover[c], fields[c]));
  ResidualReport r;
  r.phi = phi.name();
  r.lhs = lhs.value;
  r.rhs = pairwise_sum(parts);
  r.residual = std::abs(r.lhs - r.rhs) / std::max(std::abs(r.lhs), 1e-12);
  r.lhs_stderr = lhs.stderr_;
  r.samples = lhs.samples;
  r.seed = q.seed;
  return r;
}

double additivity_check(const std::vector<TestFunction>& phis, const std::vector<CylinderSet>& parts,
                        const CylinderSet& whole, int grid_nodes) {
  // interior overlap probe: flow images at interior heights of one part
  for (std::size_t a = 0; a < parts.size(); ++a) {
    const CylinderSet& A = parts[a];
    const double span = A.h_plus() - A.h_minus();
    const std::size_t stride = std::max<std::size_t>(1, A.nodes().size() / 32);
    for (std::size_t b = 0; b < parts.size(); ++b) {
      if (a == b) continue;
      const CylinderSet& B = parts[b];
      const double tau = 1e-9 * B.manifold().diameter();
      for (std::size_t i = 0; i < A.nodes().size(); i += stride)
        for (int k = 1; k < 8; ++k) {
          const Point x = A.flow_node(i, A.h_minus() + span * k / 8.0);
          if (!B.contains(x)) continue;
          const double tb = B.potential()(x) - B.level();
          if (tb > B.h_minus() + tau && tb < B.h_plus() - tau)
            throw OverlapError("cylinders " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
        }
    }
  }
  std::vector<DensityField> fields;
  for (const auto& p : parts) fields.push_back(density_D(p, grid_nodes));
  const DensityField wf = density_D(whole, grid_nodes);
  double worst = 0.0;
  for (const TestFunction& phi : phis) {
    std::vector<double> s;
    for (std::size_t j = 0; j < parts.size(); ++j) s.push_back(integrate_rays(phi, parts[j], fields[j]));
    worst = std::max(worst, std::abs(pairwise_sum(s) - integrate_rays(phi, whole, wf)));
  }
  return worst;
}

}  // namespace otray
