#include "otray/suite.hpp"

#include "otray/density.hpp"
#include "otray/disintegration.hpp"
#include "otray/divergence.hpp"
#include "otray/errors.hpp"
#include "otray/kantorovich.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace otray {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;
const char* const kVersion = "0.1.0";

struct CheckInfo {
  const char* id;
  const char* about;
};

const CheckInfo kChecks[] = {
    {"cone-convergence", "sup error of nested cone approximations of the potential"},
    {"continuity", "continuity equation d_t D = div_ac(d) D along rays"},
    {"disintegration", "volume integral vs nested ray integral with density D"},
    {"duality", "dual value vs optimal transport cost on discrete instances"},
    {"green-gauss", "Green-Gauss identity for the ray field on a single-cone cylinder"},
    {"jacobian", "numeric flow Jacobian vs the closed form at constant curvature"},
    {"lipschitz-t", "measured |dD/dt| vs the Lipschitz-in-t bound on random cylinders"},
    {"lower-bound", "Laplacian comparison certificate for cone fields"},
    {"pushforward", "pushforward sandwich bounds and their equality case"},
};

std::uint64_t check_stream(const std::string& id) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : id) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  return h;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

struct Context {
  const Scenario& scn;
  const SuiteOptions& opt;
  Materialized mat;
  Report& report;
};

struct Outcome {
  std::string metric;
  double value = kNaN;
  double tolerance = kNaN;
  bool pass = true;
  std::size_t samples = 0;
};

bool banded(const Scenario& s) {
  return s.kind == ScenarioKind::RadialBand || s.kind == ScenarioKind::TwoBand;
}

std::pair<double, double> band_range(const Scenario& s) {
  if (s.kind == ScenarioKind::RadialBand) {
    const auto& r = std::get<RadialBandParams>(s.params);
    return {r.r1, r.r2};
  }
  const auto& r = std::get<TwoBandParams>(s.params);
  return {r.r1, r.r2};
}

Outcome skipped() { return {"skipped", kNaN, kNaN, true, 0}; }

Outcome check_disintegration(Context& c) {
  if (!banded(c.scn)) return skipped();
  const ManifoldParams& m = c.scn.manifold;
  const auto [r1, r2] = band_range(c.scn);
  const Potential& u = *c.mat.potential;
  std::vector<DensityField> fields;
  for (const auto& cyl : c.mat.cylinders) fields.push_back(density_D(cyl, c.opt.grid));
  const double q4 = 0.25 * (r2 - r1);
  const std::vector<TestFunction> battery{
      TestFunction::constant(1.0),
      TestFunction::zonal(north_pole(m), {0.0, 1.0}, m),
      TestFunction::band_indicator(u, r1 + q4, r2 - q4),
  };
  const QuadratureSpec q{QuadratureMethod::MonteCarlo, c.opt.samples, c.opt.seed};
  PlotTable t{{"phi", "lhs", "rhs", "residual", "lhs_stderr"}, {}};
  double worst = 0.0, noise = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < battery.size(); ++k) {
    const ResidualReport r = disintegration_residual(battery[k], c.mat.cylinders, fields, q);
    worst = std::max(worst, r.residual);
    noise = std::max(noise, 3.0 * r.lhs_stderr / std::max(std::abs(r.lhs), 1e-12));
    used = r.samples;
    t.rows.push_back({static_cast<double>(k), r.lhs, r.rhs, r.residual, r.lhs_stderr});
  }
  c.report.tables["disintegration.tsv"] = t;
  // the estimator's own noise floor, when it is above 1e-3
  const double tol = std::max(1e-3, noise) * c.opt.tol_scale;
  return {"max_relative_residual", worst, tol, worst <= tol, used};
}

Outcome check_pushforward(Context& c) {
  if (!banded(c.scn)) return skipped();
  const CylinderSet& cyl = c.mat.cylinders.front();
  const DensityField field = density_D(cyl, c.opt.grid);
  const ManifoldParams& m = cyl.manifold();
  Rng rng = Rng::substream(c.opt.seed, check_stream("pushforward"));
  const std::size_t N = cyl.nodes().size();
  const std::size_t stride = std::max<std::size_t>(1, N / 8);
  PlotTable t{{"s", "t", "ratio", "lower", "upper", "apex_upper"}, {}};
  double min_slack = std::numeric_limits<double>::infinity();
  double eq_err = 0.0;
  const double lo = cyl.h_minus(), hi = cyl.h_plus();
  for (int p = 0; p < 50; ++p) {
    double s = rng.uniform(lo, hi), tt = rng.uniform(lo, hi);
    if (s > tt) std::swap(s, tt);
    if (!(s > lo)) s = 0.5 * (lo + tt);
    for (std::size_t i = 0; i < N; i += stride) {
      min_slack = std::min(min_slack, sandwich_slack(field, i, s, tt, lo, hi));
      // lower end of the ray is the apex of the backward cone: equality
      const double ratio = field.at(i, tt) / field.at(i, s);
      const auto apex = pushforward_factors(s, tt, cyl.ray_minus(), cyl.ray_plus(), m);
      eq_err = std::max(eq_err, std::abs(ratio - apex.second) / apex.second);
      if (i == 0) {
        const auto f = pushforward_factors(s, tt, lo, hi, m);
        t.rows.push_back({s, tt, ratio, f.first, f.second, apex.second});
      }
    }
  }
  c.report.tables["pushforward.tsv"] = t;
  const double value = std::max(std::max(0.0, -min_slack), eq_err);
  const double tol = 1e-6 * c.opt.tol_scale;
  return {"max_sandwich_violation", value, tol, value <= tol, 50};
}

Outcome check_jacobian(Context& c) {
  const ManifoldParams& m = c.scn.manifold;
  const double tol = 1e-4 * c.opt.tol_scale;
  if (c.scn.kind == ScenarioKind::TiltedDisk) {
    const auto& d = std::get<TiltedDiskParams>(c.scn.params);
    const double h = default_fd_step(m);
    PlotTable t{{"t", "D_numeric", "D_oracle"}, {}};
    for (int k = 0; k < c.opt.grid; ++k) {
      const double tk = d.t * k / (c.opt.grid - 1);
      t.rows.push_back({tk, tilted_slice_jacobian(d.r, tk, d.theta, m, h), jacobian_bound_formula(d.r, tk, d.theta, m)});
    }
    c.report.tables["density_profile.tsv"] = t;
    const double err = std::abs(tilted_slice_jacobian(d.r, d.t, d.theta, m, h) - jacobian_bound_formula(d.r, d.t, d.theta, m));
    return {"abs_error", err, tol, err <= tol, 1};
  }
  if (!banded(c.scn)) return skipped();
  double worst = 0.0;
  std::size_t count = 0;
  for (std::size_t ci = 0; ci < c.mat.cylinders.size(); ++ci) {
    const CylinderSet& cyl = c.mat.cylinders[ci];
    const DensityField field = density_D(cyl, c.opt.grid);
    const double rho0 = cyl.geometry().rho0;
    for (std::size_t i = 0; i < cyl.nodes().size(); ++i)
      for (int k = 0; k < field.grid().nodes; ++k) {
        const double tk = field.grid().at(k);
        worst = std::max(worst, std::abs(field.values()(static_cast<Eigen::Index>(i), k) - jacobian_bound_formula(rho0, tk, 0.0, m)));
        ++count;
      }
    if (ci == 0) {
      PlotTable t{{"t", "D_numeric", "D_oracle"}, {}};
      for (int k = 0; k < field.grid().nodes; ++k) {
        const double tk = field.grid().at(k);
        t.rows.push_back({tk, field.values()(0, k), jacobian_bound_formula(rho0, tk, 0.0, m)});
      }
      c.report.tables["density_profile.tsv"] = t;
    }
  }
  return {"max_abs_error", worst, tol, worst <= tol, count};
}

Outcome check_continuity(Context& c) {
  if (!banded(c.scn)) return skipped();
  const CylinderSet& cyl = c.mat.cylinders.front();
  const ConeField cone(*c.mat.potential);
  const int g = c.opt.grid;
  const std::vector<int> levels{(g + 1) / 2, g, 2 * g - 1};
  std::vector<double> res;
  PlotTable t{{"grid_nodes", "residual"}, {}};
  for (int nodes : levels) {
    res.push_back(continuity_residual(density_D(cyl, nodes), cone));
    t.rows.push_back({static_cast<double>(nodes), res.back()});
  }
  c.report.tables["continuity.tsv"] = t;
  const double tol = 5e-3 * c.opt.tol_scale;
  const bool converging = res[1] >= 3.0 * res[2];
  return {"normalized_residual", res[1], tol, res[1] <= tol && converging, static_cast<std::size_t>(g)};
}

Outcome check_green_gauss(Context& c) {
  if (!banded(c.scn)) return skipped();
  const ManifoldParams& m = c.scn.manifold;
  const CylinderSet& cyl = c.mat.cylinders.front();
  const ConeField cone(*c.mat.potential);
  const double w = std::min(cyl.h_plus(), -cyl.h_minus());
  const std::vector<TestFunction> battery{
      TestFunction::zonal(north_pole(m), {0.5, 1.0, -0.25}, m),
      TestFunction::product_chart(cyl.nodes().front().point, 0.1 * w, 0.8 * w, 0.3, 3, m),
  };
  PlotTable t{{"radial_cells", "residual_zonal", "residual_interior"}, {}};
  double worst = 0.0;
  for (int cells : {16, 32, 64}) {
    std::vector<double> row{static_cast<double>(cells)};
    for (const auto& phi : battery) {
      const double r = green_gauss_residual(cyl, phi, cone, GreenGaussSpec{cells, 256}).residual;
      row.push_back(r);
      if (cells == 64) worst = std::max(worst, r);
    }
    t.rows.push_back(row);
  }
  c.report.tables["green_gauss.tsv"] = t;
  const double tol = 5e-3 * c.opt.tol_scale;
  return {"max_abs_residual", worst, tol, worst <= tol, 64 * 256};
}

Outcome check_duality(Context& c) {
  const ManifoldParams& m = c.scn.manifold;
  double worst = 0.0;
  std::size_t count = 0;
  if (c.scn.kind == ScenarioKind::DiscreteLp) {
    const auto& d = std::get<DiscreteLpParams>(c.scn.params);
    const DualSolution s = solve_kantorovich_dual(DiscreteMeasure(d.mu, m), DiscreteMeasure(d.nu, m), m);
    worst = std::abs(s.value - s.primal_cost);
    count = 1;
  } else {
    Rng rng = Rng::substream(c.opt.seed, check_stream("duality"));
    for (int inst = 0; inst < 25; ++inst) {
      auto make = [&](int k) {
        std::vector<Atom> atoms;
        std::vector<double> w;
        for (int a = 0; a < k; ++a) w.push_back(0.1 + rng.uniform());
        double tot = 0.0;
        for (double x : w) tot += x;
        for (int a = 0; a < k; ++a) atoms.push_back({random_point(m, rng), w[a] / tot});
        return DiscreteMeasure(std::move(atoms), m);
      };
      const int ka = 1 + static_cast<int>(rng.next() % 6), kb = 1 + static_cast<int>(rng.next() % 6);
      const DiscreteMeasure mu = make(ka);
      const DiscreteMeasure nu0 = make(kb);
      // equalize totals exactly
      std::vector<Atom> atoms = nu0.atoms();
      atoms.back().mass += mu.total() - nu0.total();
      const DualSolution s = solve_kantorovich_dual(mu, DiscreteMeasure(atoms, m), m);
      worst = std::max(worst, std::abs(s.value - s.primal_cost));
      ++count;
    }
  }
  const double tol = 1e-8 * c.opt.tol_scale;
  return {"max_duality_gap", worst, tol, worst <= tol, count};
}

Outcome check_cone_convergence(Context& c) {
  if (!banded(c.scn)) return skipped();
  const ManifoldParams& m = c.scn.manifold;
  const auto [r1, r2] = band_range(c.scn);
  const Potential& u = *c.mat.potential;
  std::vector<Point> grid;
  for (int a = 0; a < 20; ++a)
    for (int b = 0; b < 50; ++b) grid.push_back(from_colatitude(m, r1 + (r2 - r1) * a / 19.0, 2.0 * kPi * b / 50.0));
  std::vector<double> exact;
  for (const Point& x : grid) exact.push_back(u(x));
  PlotTable t{{"anchors", "sup_error"}, {}};
  std::vector<double> errs;
  for (int L : {4, 16, 64, 256}) {
    std::vector<Anchor> anchors;
    for (int k = 0; k < L; ++k) {
      const Point a = from_colatitude(m, r2, 2.0 * kPi * k / L);
      anchors.push_back({a, u(a)});
    }
    const Potential uI(anchors, m);
    double e = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) e = std::max(e, std::abs(uI(grid[i]) - exact[i]));
    errs.push_back(e);
    t.rows.push_back({static_cast<double>(L), e});
  }
  c.report.tables["cone.tsv"] = t;
  bool mono = true;
  for (std::size_t k = 1; k < errs.size(); ++k) mono = mono && errs[k] <= errs[k - 1];
  const double tol = 0.02 * c.opt.tol_scale;
  return {"sup_error_256", errs.back(), tol, mono && errs.back() < tol, grid.size()};
}

Outcome check_lower_bound(Context& c) {
  const ManifoldParams& m = c.scn.manifold;
  Rng rng = Rng::substream(c.opt.seed, check_stream("lower-bound"));
  std::vector<Point> samples;
  for (int k = 0; k < 10000; ++k) samples.push_back(random_point(m, rng));
  double worst = std::numeric_limits<double>::infinity();
  PlotTable t{{"anchors", "certificate"}, {}};
  for (int L : {1, 3, 10}) {
    const Point p = random_point(m, rng);
    std::vector<Anchor> anchors;
    for (int k = 0; k < L; ++k) {
      const Point a = random_point(m, rng);
      anchors.push_back({a, 0.5 * distance(a, p, m)});
    }
    const double cert = lower_bound_certificate(ConeField(Potential(anchors, m)), samples);
    worst = std::min(worst, cert);
    t.rows.push_back({static_cast<double>(L), cert});
  }
  c.report.tables["lower_bound.tsv"] = t;
  const double tol = 1e-9 * c.opt.tol_scale;
  return {"min_certificate", worst, tol, worst >= -tol, samples.size()};
}

Outcome check_lipschitz_t(Context& c) {
  const ManifoldParams& m = c.scn.manifold;
  Rng rng = Rng::substream(c.opt.seed, check_stream("lipschitz-t"));
  const double diam = m.diameter();
  const double margin = 0.02 * diam;
  double worst = 0.0;
  PlotTable t{{"cylinder", "modulus", "bound"}, {}};
  for (int k = 0; k < 10; ++k) {
    const Point a = random_point(m, rng);
    const Potential u({Anchor{a, 0.0}}, m);
    const double rho0 = rng.uniform(0.25, 0.75) * diam;
    const double hp = rng.uniform(0.2, 0.8) * (rho0 - margin);
    const double hm = -rng.uniform(0.2, 0.8) * (diam - rho0 - margin);
    const double phi0 = rng.uniform(0.0, 2.0 * kPi);
    const double span = rng.uniform(0.5, 2.0 * kPi);
    const CylinderSet cyl = make_polar_cylinder(u, 0, -rho0, hm, hp, 8, phi0, phi0 + span, rng.next());
    const DensityField field = density_D(cyl, c.opt.grid);
    double mod = 0.0, bound = 0.0;
    for (std::size_t i = 0; i < cyl.nodes().size(); ++i) {
      const double mi = lipschitz_modulus_t(field, i), bi = lipschitz_bound_t(field, i);
      worst = std::max(worst, mi / bi);
      mod = std::max(mod, mi);
      bound = std::max(bound, bi);
    }
    t.rows.push_back({static_cast<double>(k), mod, bound});
  }
  c.report.tables["lipschitz_t.tsv"] = t;
  const double tol = 1.1 * c.opt.tol_scale;
  return {"max_modulus_over_bound", worst, tol, worst <= tol, 10};
}

using CheckFn = Outcome (*)(Context&);

CheckFn lookup(const std::string& id) {
  static const std::map<std::string, CheckFn> table{
      {"cone-convergence", check_cone_convergence}, {"continuity", check_continuity},
      {"disintegration", check_disintegration},     {"duality", check_duality},
      {"green-gauss", check_green_gauss},           {"jacobian", check_jacobian},
      {"lipschitz-t", check_lipschitz_t},           {"lower-bound", check_lower_bound},
      {"pushforward", check_pushforward},
  };
  const auto it = table.find(id);
  if (it == table.end()) throw UnknownCheckError("unknown check '" + id + "'");
  return it->second;
}

double json_number(const nlohmann::json& j) { return j.is_null() ? kNaN : j.get<double>(); }

nlohmann::json json_value(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

bool ReportRow::operator==(const ReportRow& o) const {
  auto same = [](double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; };
  return check == o.check && scenario == o.scenario && metric == o.metric && same(value, o.value) &&
         same(tolerance, o.tolerance) && pass == o.pass && samples == o.samples && seed == o.seed &&
         same(wall_ms, o.wall_ms);
}

bool Report::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

const std::vector<std::string>& registered_checks() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& c : kChecks) v.emplace_back(c.id);
    return v;
  }();
  return ids;
}

std::string describe_check(const std::string& id) {
  for (const auto& c : kChecks)
    if (id == c.id) return c.about;
  throw UnknownCheckError("unknown check '" + id + "'");
}

std::vector<std::string> parse_check_list(const std::string& list) {
  if (list == "all") return registered_checks();
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
    lookup(item);
    out.push_back(item);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Report run_suite(const Scenario& scn, const std::vector<std::string>& checks, const SuiteOptions& opt) {
  std::vector<std::string> ids = checks;
  for (const auto& id : ids) lookup(id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (opt.grid < 3) throw ValidationError("grid needs at least 3 nodes");
  if (opt.samples < 1) throw ValidationError("samples must be positive");

  Report r;
  r.version = kVersion;
  r.n = scn.manifold.n;
  r.K = scn.manifold.K;
  r.scenario = scn.name;
  if (ids.empty()) return r;
  Context ctx{scn, opt, materialize(scn), r};
  for (const auto& id : ids) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = lookup(id)(ctx);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.rows.push_back({id, scn.name, o.metric, o.value, o.tolerance, o.pass, o.samples, opt.seed, opt.timing ? ms : 0.0});
  }
  return r;
}

ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  if (s == "plot-tables") return ReportFormat::PlotTables;
  throw ValidationError("unknown report format '" + s + "'");
}

std::string report_csv(const Report& r) {
  std::ostringstream os;
  os << "check,scenario,metric,value,tolerance,pass,samples,seed,wall_ms\n";
  for (const auto& row : r.rows)
    os << csv_field(row.check) << ',' << csv_field(row.scenario) << ',' << csv_field(row.metric) << ','
       << fmt(row.value) << ',' << fmt(row.tolerance) << ',' << (row.pass ? "true" : "false") << ','
       << row.samples << ',' << row.seed << ',' << fmt(row.wall_ms) << '\n';
  return os.str();
}

std::string report_json(const Report& r) {
  nlohmann::json j;
  j["version"] = r.version;
  j["manifold"] = {{"n", r.n}, {"K", r.K}};
  j["scenario"] = r.scenario;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows)
    j["rows"].push_back({{"check", row.check},
                         {"scenario", row.scenario},
                         {"metric", row.metric},
                         {"value", json_value(row.value)},
                         {"tolerance", json_value(row.tolerance)},
                         {"pass", row.pass},
                         {"samples", row.samples},
                         {"seed", row.seed},
                         {"wall_ms", json_value(row.wall_ms)}});
  j["tables"] = nlohmann::json::object();
  for (const auto& [name, t] : r.tables) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
      nlohmann::json a = nlohmann::json::array();
      for (double v : row) a.push_back(json_value(v));
      rows.push_back(a);
    }
    j["tables"][name] = {{"columns", t.columns}, {"rows", rows}};
  }
  return j.dump(2) + "\n";
}

Report parse_report_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Report r;
    r.version = j.at("version").get<std::string>();
    r.n = j.at("manifold").at("n").get<int>();
    r.K = j.at("manifold").at("K").get<double>();
    r.scenario = j.at("scenario").get<std::string>();
    for (const auto& x : j.at("rows"))
      r.rows.push_back({x.at("check").get<std::string>(), x.at("scenario").get<std::string>(),
                        x.at("metric").get<std::string>(), json_number(x.at("value")),
                        json_number(x.at("tolerance")), x.at("pass").get<bool>(),
                        x.at("samples").get<std::size_t>(), x.at("seed").get<std::uint64_t>(),
                        json_number(x.at("wall_ms"))});
    if (j.contains("tables"))
      for (const auto& [name, t] : j.at("tables").items()) {
        PlotTable pt;
        pt.columns = t.at("columns").get<std::vector<std::string>>();
        for (const auto& row : t.at("rows")) {
          std::vector<double> v;
          for (const auto& x : row) v.push_back(json_number(x));
          pt.rows.push_back(std::move(v));
        }
        r.tables[name] = std::move(pt);
      }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string table_tsv(const PlotTable& t) {
  std::ostringstream os;
  for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "\t" : "") << t.columns[k];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "\t" : "") << fmt(row[k]);
    os << '\n';
  }
  return os.str();
}

std::vector<std::string> emit_report(const Report& r, ReportFormat f, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::pair<std::string, std::string>> files;
  switch (f) {
    case ReportFormat::Csv: files.push_back({"report.csv", report_csv(r)}); break;
    case ReportFormat::Json: files.push_back({"report.json", report_json(r)}); break;
    case ReportFormat::PlotTables:
      for (const auto& [name, t] : r.tables) files.push_back({name, table_tsv(t)});
      break;
  }
  std::vector<std::string> written;
  for (const auto& [name, body] : files) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << body;
    if (!out) throw IoError("write failed for '" + path + "'");
    written.push_back(path);
  }
  return written;
}

}  // namespace otray
