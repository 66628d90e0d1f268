// Acceptance criteria 1-9. One PASS/FAIL line each; exit status 1 on any FAIL.
// Usage: acceptance <scenario dir>

#include "otray/density.hpp"
#include "otray/disintegration.hpp"
#include "otray/divergence.hpp"
#include "otray/kantorovich.hpp"
#include "otray/scenario.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

using namespace otray;

namespace {

constexpr double pi = oracle::pi;
int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string dir;

Scenario scenario(const char* name) { return load_scenario(dir + "/" + name + ".yaml"); }

void disintegration() {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario s = scenario("radial-band");
  const auto& p = std::get<RadialBandParams>(s.params);
  const Materialized mat = materialize(s);
  const std::vector<DensityField> fields{density_D(mat.cylinders[0])};
  const QuadratureSpec q{QuadratureMethod::MonteCarlo, 100000, 42};
  const double w = p.r2 - p.r1;
  const std::vector<TestFunction> phis{
      TestFunction::constant(1.0),
      TestFunction::zonal(north_pole(s.manifold), {0.0, 1.0}, s.manifold),
      TestFunction::band_indicator(*mat.potential, p.r1 + w / 4, p.r2 - w / 4),
  };
  double worst = 0.0;
  double closed_err = 0.0;
  const double area = 2 * pi * (std::cos(p.r1) - std::cos(p.r2));
  for (std::size_t k = 0; k < phis.size(); ++k) {
    const ResidualReport r = disintegration_residual(phis[k], mat.cylinders, fields, q);
    worst = std::max(worst, r.residual);
    if (k == 0) closed_err = std::max(std::abs(r.lhs - area), std::abs(r.rhs - area)) / area;
  }
  const double secs = seconds_since(t0);
  report(1, "disintegration", worst <= 1e-3 && closed_err <= 1e-3 && secs <= 30.0,
         fmt("max residual %.3g <= 1e-3, phi=1 vs 2pi(cos r1 - cos r2) %.3g <= 1e-3, %.2f s <= 30 s", worst,
             closed_err, secs));
}

void pushforward() {
  const Scenario s = scenario("radial-band");
  const Materialized mat = materialize(s);
  const CylinderSet& cyl = mat.cylinders[0];
  const DensityField f = density_D(cyl);
  // the lower end of every meridian ray is the pole N, at u = 0
  const double apex_offset = -cyl.level();
  const double top = s.manifold.diameter() - cyl.level() - 1e-3;
  Rng rng(2024);
  double slack = 1e9, eq = 0.0;
  for (int k = 0; k < 50; ++k) {
    double a = rng.uniform(cyl.h_minus(), cyl.h_plus()), b = rng.uniform(cyl.h_minus(), cyl.h_plus());
    if (a > b) std::swap(a, b);
    for (std::size_t i = 0; i < cyl.nodes().size(); i += 16) {
      slack = std::min(slack, sandwich_slack(f, i, a, b, cyl.h_minus(), cyl.h_plus()));
      const double upper = pushforward_factors(a, b, apex_offset, top, s.manifold).second;
      eq = std::max(eq, std::abs(f.at(i, b) / f.at(i, a) - upper) / upper);
    }
  }
  report(2, "pushforward", slack >= -1e-6 && eq <= 1e-6,
         fmt("min relative slack %.3g >= -1e-6 over 50 pairs, apex equality error %.3g <= 1e-6", slack, eq));
}

void jacobian() {
  const char* names[] = {"tilted-disk-0", "tilted-disk-pi-6", "tilted-disk-pi-3"};
  const double hand[] = {std::sqrt(0.5), std::sqrt(0.5 * 0.75 + 0.25), std::sqrt(0.5 * 0.25 + 0.75)};
  double worst = 0.0, hand_err = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Scenario s = scenario(names[k]);
    const auto& d = std::get<TiltedDiskParams>(s.params);
    const double num = tilted_slice_jacobian(d.r, d.t, d.theta, s.manifold, default_fd_step(s.manifold));
    worst = std::max(worst, std::abs(num - jacobian_bound_formula(d.r, d.t, d.theta, s.manifold)));
    hand_err = std::max(hand_err, std::abs(num - hand[k]));
  }
  const ManifoldParams flat(2, 1e-12);
  const double h = 2.0, t = 0.5;
  const double euclid = oracle::euclid_cone_ratio(h, t, 0.0, 2);
  double flat_err = std::abs(jacobian_bound_formula(h, t, 0.0, flat) / euclid - 1.0);
  flat_err = std::max(flat_err, std::abs(tilted_slice_jacobian(h, t, 0.0, flat, default_fd_step(flat)) / euclid - 1.0));
  const double up = pushforward_factors(0.2, 0.9, -0.5, 1.5, flat).second;
  flat_err = std::max(flat_err, std::abs(up / ((0.9 + 0.5) / (0.2 + 0.5)) - 1.0));
  report(3, "jacobian", worst <= 1e-4 && hand_err <= 1e-4 && flat_err <= 1e-6,
         fmt("theta in {0, pi/6, pi/3}: |numeric - formula| %.3g, |numeric - hand value| %.3g <= 1e-4; "
             "flat limit relative error %.3g <= 1e-6",
             worst, hand_err, flat_err));
}

void continuity() {
  const Scenario s = scenario("radial-band");
  const Materialized mat = materialize(s);
  const ConeField cone(*mat.potential);
  const double r129 = continuity_residual(density_D(mat.cylinders[0], 129), cone);
  const double r257 = continuity_residual(density_D(mat.cylinders[0], 257), cone);
  report(4, "continuity", r129 <= 5e-3 && r129 / r257 >= 3.0,
         fmt("residual %.3g <= 5e-3 at 129 nodes, drop %.2fx >= 3x at 257 nodes", r129, r129 / r257));
}

void green_gauss() {
  const Scenario s = scenario("radial-band");
  const auto& p = std::get<RadialBandParams>(s.params);
  const Materialized mat = materialize(s);
  const CylinderSet& cyl = mat.cylinders[0];
  const ConeField field(*mat.potential);
  const ManifoldParams& m = s.manifold;
  const GreenGaussReport one = green_gauss_residual(cyl, TestFunction::constant(1.0), field);
  const double flux_err = std::abs(one.boundary_term - 2 * pi * (std::sin(p.r2) - std::sin(p.r1)));
  const GreenGaussReport z = green_gauss_residual(cyl, TestFunction::zonal(north_pole(m), {0.5, 1.0, -0.25}, m), field);
  const double w = cyl.h_plus();
  const TestFunction bump = TestFunction::product_chart(cyl.nodes()[0].point, 0.1 * w, 0.8 * w, 0.3, 3, m);
  const GreenGaussReport b = green_gauss_residual(cyl, bump, field);
  const double worst = std::max({one.residual, z.residual, b.residual});
  report(5, "green-gauss", worst <= 5e-3 && b.boundary_term == 0.0 && flux_err <= 5e-3,
         fmt("max residual %.3g <= 5e-3, interior-support boundary term %.3g, phi=1 flux error %.3g", worst,
             b.boundary_term, flux_err));
}

void duality() {
  const auto t0 = std::chrono::steady_clock::now();
  const ManifoldParams m(2, 1.0);
  Rng rng(6);
  double worst = 0.0;
  for (int inst = 0; inst < 25; ++inst) {
    auto units = [&](int k) {
      std::vector<int> u(k, 1);
      for (int c = k; c < 6; ++c) u[rng.next() % k]++;
      return u;
    };
    const int ka = 1 + static_cast<int>(rng.next() % 6), kb = 1 + static_cast<int>(rng.next() % 6);
    const auto ua = units(ka), ub = units(kb);
    std::vector<Atom> a, b;
    std::vector<Eigen::VectorXd> xs, ys;
    for (int i = 0; i < ka; ++i) {
      a.push_back({random_point(m, rng), ua[i] / 6.0});
      xs.push_back(a.back().point.coords);
    }
    for (int j = 0; j < kb; ++j) {
      b.push_back({random_point(m, rng), ub[j] / 6.0});
      ys.push_back(b.back().point.coords);
    }
    const DualSolution s = solve_kantorovich_dual(DiscreteMeasure(a, m), DiscreteMeasure(b, m), m);
    worst = std::max(worst, std::abs(s.value - oracle::brute_force_ot(xs, ua, ys, ub, 6, m.K)));
  }
  const double secs = seconds_since(t0);
  report(6, "duality", worst <= 1e-8 && secs <= 5.0,
         fmt("max |dual - brute-force primal| %.3g <= 1e-8 on 25 instances, %.2f s <= 5 s", worst, secs));
}

void cone_convergence() {
  const Scenario s = scenario("radial-band");
  const auto& p = std::get<RadialBandParams>(s.params);
  const ManifoldParams& m = s.manifold;
  const Potential u = radial_potential(m);
  std::vector<Point> grid;
  std::vector<double> exact;
  for (int a = 0; a < 20; ++a)
    for (int b = 0; b < 50; ++b) {
      grid.push_back(from_colatitude(m, p.r1 + (p.r2 - p.r1) * a / 19.0, 2 * pi * b / 50.0));
      exact.push_back(oracle::sphere_distance(north_pole(m).coords, grid.back().coords, m.K));
    }
  std::vector<double> errs;
  for (int L : {4, 16, 64, 256}) {
    std::vector<Anchor> anchors;
    for (int k = 0; k < L; ++k) anchors.push_back({from_colatitude(m, p.r2, 2 * pi * k / L), p.r2});
    const Potential uI(anchors, m);
    double e = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) e = std::max(e, std::abs(uI(grid[i]) - exact[i]));
    errs.push_back(e);
  }
  const bool mono = errs[1] <= errs[0] && errs[2] <= errs[1] && errs[3] <= errs[2];
  report(7, "cone-convergence", mono && errs[3] < 0.02,
         fmt("sup errors %.3g, %.3g, %.3g, %.3g (non-increasing, last < 0.02) on 1000 points", errs[0], errs[1],
             errs[2], errs[3]));
}

void certificate() {
  const ManifoldParams m(2, 1.0);
  Rng rng(8);
  std::vector<Point> samples;
  for (int k = 0; k < 10000; ++k) samples.push_back(random_point(m, rng));
  double worst = 1e9;
  for (int L : {1, 3, 10}) {
    const Point p = random_point(m, rng);
    std::vector<Anchor> a;
    for (int k = 0; k < L; ++k) {
      const Point q = random_point(m, rng);
      a.push_back({q, 0.5 * distance(q, p, m)});
    }
    worst = std::min(worst, lower_bound_certificate(ConeField(Potential(a, m)), samples));
  }
  report(8, "lower-bound", worst >= -1e-9, fmt("min certificate %.3g >= -1e-9 (1, 3, 10 anchors, 1e4 samples)", worst));
}

void lipschitz() {
  const ManifoldParams m(2, 1.0);
  Rng rng(10);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Potential u({{random_point(m, rng), 0.0}}, m);
    const double rho0 = rng.uniform(0.25, 0.75) * pi;
    const double hp = rng.uniform(0.2, 0.8) * (rho0 - 0.1), hm = -rng.uniform(0.2, 0.8) * (pi - rho0 - 0.1);
    const double phi0 = rng.uniform(0, 2 * pi);
    const CylinderSet cyl = make_polar_cylinder(u, 0, -rho0, hm, hp, 8, phi0, phi0 + rng.uniform(0.5, 2 * pi), rng.next());
    const DensityField f = density_D(cyl);
    const double Rm = cyl.ray_minus(), Rp = cyl.ray_plus();
    for (std::size_t i = 0; i < cyl.nodes().size(); ++i) {
      // sup D (n-1) max |d/dt log s_K| over the window, log-derivative sqrt(K) cot(sqrt(K) x)
      double supD = 0.0, supL = 0.0, mod = 0.0;
      for (int j = 0; j < f.grid().nodes; ++j) {
        const double t = f.grid().at(j);
        supD = std::max(supD, f.values()(static_cast<Eigen::Index>(i), j));
        supL = std::max({supL, std::abs(1.0 / std::tan(t - Rm)), std::abs(1.0 / std::tan(Rp - t))});
        if (j > 0)
          mod = std::max(mod, std::abs(f.values()(static_cast<Eigen::Index>(i), j) - f.values()(static_cast<Eigen::Index>(i), j - 1)) /
                                  (t - f.grid().at(j - 1)));
      }
      worst = std::max(worst, mod / (supD * (m.n - 1) * supL));
    }
  }
  report(9, "lipschitz-t", worst <= 1.1, fmt("max modulus / bound %.3g <= 1.1 on 10 random cylinders", worst));
}

}  // namespace

int main(int argc, char** argv) {
  dir = argc > 1 ? argv[1] : "scenarios";
  setenv("OTRAY_THREADS", "1", 1);  // timings are single-threaded
  using Fn = void (*)();
  for (Fn f : {disintegration, pushforward, jacobian, continuity, green_gauss, duality, cone_convergence, certificate, lipschitz}) {
    try {
      f();
    } catch (const std::exception& e) {
      std::printf("[FAIL] error: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
