#include "otray/scenario.hpp"

#include "otray/errors.hpp"
#include "otray/kantorovich.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

namespace otray {
namespace {

std::string where(const YAML::Node& n) {
  const auto mark = n.Mark();
  return mark.line >= 0 ? " (line " + std::to_string(mark.line + 1) + ")" : "";
}

void require_map(const YAML::Node& n, const std::string& what) {
  if (!n || !n.IsMap()) throw ParseError(what + " must be a table" + where(n));
}

void check_keys(const YAML::Node& n, const std::string& what, const std::set<std::string>& allowed) {
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ParseError("unknown field '" + key + "' in " + what + where(kv.first));
  }
}

const YAML::Node required(const YAML::Node& n, const std::string& key, const std::string& what) {
  const YAML::Node v = n[key];
  if (!v) throw ParseError("missing field '" + key + "' in " + what + where(n));
  return v;
}

double as_real(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) throw ParseError("field '" + field + "' must be a number" + where(n));
  return parse_angle(n.Scalar());
}

long as_int(const YAML::Node& n, const std::string& field) {
  try {
    return n.as<long>();
  } catch (const YAML::Exception&) {
    throw ParseError("field '" + field + "' must be an integer" + where(n));
  }
}

std::vector<Atom> parse_atoms(const YAML::Node& list, const std::string& what, const ManifoldParams& m) {
  if (!list.IsSequence()) throw ParseError(what + " must be a list of atoms" + where(list));
  std::vector<Atom> out;
  for (const auto& a : list) {
    require_map(a, what + " atom");
    check_keys(a, what + " atom", {"at", "coords", "mass"});
    Atom atom;
    atom.mass = as_real(required(a, "mass", what + " atom"), "mass");
    if (a["at"] && a["coords"]) throw ParseError("atom has both 'at' and 'coords'" + where(a));
    if (a["at"]) {
      const auto at = a["at"];
      if (!at.IsSequence() || at.size() != 2) throw ParseError("'at' must be [colatitude, longitude]" + where(at));
      atom.point = from_colatitude(m, as_real(at[0], "at"), as_real(at[1], "at"));
    } else if (a["coords"]) {
      const auto c = a["coords"];
      if (!c.IsSequence() || static_cast<int>(c.size()) != m.ambient_dim())
        throw ParseError("'coords' needs n+1 entries" + where(c));
      Vec v(m.ambient_dim());
      for (int k = 0; k < m.ambient_dim(); ++k) v(k) = as_real(c[k], "coords");
      if (v.norm() == 0.0) throw ValidationError("atom coordinates are zero");
      atom.point = project_to_sphere(v, m);
    } else {
      throw ParseError("atom needs 'at' or 'coords'" + where(a));
    }
    out.push_back(std::move(atom));
  }
  return out;
}

}  // namespace

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::RadialBand: return "radial-band";
    case ScenarioKind::TwoBand: return "two-band";
    case ScenarioKind::DiscreteLp: return "discrete-lp";
    case ScenarioKind::TiltedDisk: return "tilted-disk";
  }
  return "unknown";
}

double parse_angle(const std::string& text) {
  static const std::regex re(
      R"(^\s*([+-])?\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(\*?\s*pi)?\s*(?:/\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))?\s*$)");
  std::smatch mt;
  if (!std::regex_match(text, mt, re) || (!mt[2].matched && !mt[3].matched))
    throw ParseError("cannot read '" + text + "' as a number or multiple of pi");
  if (mt[2].matched && mt[3].matched && mt[3].str().find('*') == std::string::npos)
    throw ParseError("write '" + text + "' with an explicit '*'");
  if (!mt[2].matched && mt[3].matched && mt[3].str().find('*') != std::string::npos)
    throw ParseError("dangling '*' in '" + text + "'");
  double v = mt[2].matched ? std::stod(mt[2].str()) : 1.0;
  if (mt[3].matched) v *= std::numbers::pi;
  if (mt[4].matched) {
    const double d = std::stod(mt[4].str());
    if (d == 0.0) throw ParseError("division by zero in '" + text + "'");
    v /= d;
  }
  return mt[1].matched && mt[1].str() == "-" ? -v : v;
}

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("malformed scenario file: ") + e.what());
  }
  require_map(root, "scenario");
  static const std::set<std::string> kinds{"radial-band", "two-band", "discrete-lp", "tilted-disk"};
  std::set<std::string> allowed{"name", "kind", "manifold", "seed"};
  allowed.insert(kinds.begin(), kinds.end());
  check_keys(root, "scenario", allowed);

  Scenario s;
  s.name = required(root, "name", "scenario").as<std::string>();
  const std::string kind = required(root, "kind", "scenario").as<std::string>();
  if (!kinds.count(kind)) throw ParseError("unknown scenario kind '" + kind + "'" + where(root["kind"]));
  for (const auto& k : kinds)
    if (k != kind && root[k]) throw ParseError("table '" + k + "' does not match kind '" + kind + "'" + where(root[k]));

  const YAML::Node man = required(root, "manifold", "scenario");
  require_map(man, "manifold");
  check_keys(man, "manifold", {"n", "K"});
  const long n = as_int(required(man, "n", "manifold"), "manifold.n");
  const double K = as_real(required(man, "K", "manifold"), "manifold.K");
  if (n < 2) throw ValidationError("manifold.n must be >= 2");
  if (!(K > 0.0)) throw ValidationError("manifold.K must be positive");
  s.manifold = ManifoldParams(static_cast<int>(n), K);
  if (root["seed"]) {
    const long seed = as_int(root["seed"], "seed");
    if (seed < 0) throw ValidationError("seed must be non-negative");
    s.seed = static_cast<std::uint64_t>(seed);
  }

  const YAML::Node p = root[kind];
  if (kind == "radial-band") {
    s.kind = ScenarioKind::RadialBand;
    require_map(p, kind);
    check_keys(p, kind, {"r1", "r2", "base_nodes"});
    RadialBandParams r;
    r.r1 = as_real(required(p, "r1", kind), "r1");
    r.r2 = as_real(required(p, "r2", kind), "r2");
    if (p["base_nodes"]) r.base_nodes = static_cast<int>(as_int(p["base_nodes"], "base_nodes"));
    s.params = r;
  } else if (kind == "two-band") {
    s.kind = ScenarioKind::TwoBand;
    require_map(p, kind);
    check_keys(p, kind, {"r1", "r_mid", "r2", "base_nodes"});
    TwoBandParams r;
    r.r1 = as_real(required(p, "r1", kind), "r1");
    r.r_mid = as_real(required(p, "r_mid", kind), "r_mid");
    r.r2 = as_real(required(p, "r2", kind), "r2");
    if (p["base_nodes"]) r.base_nodes = static_cast<int>(as_int(p["base_nodes"], "base_nodes"));
    s.params = r;
  } else if (kind == "discrete-lp") {
    s.kind = ScenarioKind::DiscreteLp;
    require_map(p, kind);
    check_keys(p, kind, {"mu", "nu"});
    DiscreteLpParams d;
    d.mu = parse_atoms(required(p, "mu", kind), "mu", s.manifold);
    d.nu = parse_atoms(required(p, "nu", kind), "nu", s.manifold);
    s.params = d;
  } else {
    s.kind = ScenarioKind::TiltedDisk;
    require_map(p, kind);
    check_keys(p, kind, {"theta", "r", "t"});
    TiltedDiskParams d;
    d.theta = as_real(required(p, "theta", kind), "theta");
    d.r = as_real(required(p, "r", kind), "r");
    d.t = as_real(required(p, "t", kind), "t");
    s.params = d;
  }
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void validate_scenario(const Scenario& s) {
  const double diam = s.manifold.diameter();
  if (s.name.empty()) throw ValidationError("scenario name is empty");
  switch (s.kind) {
    case ScenarioKind::RadialBand: {
      const auto& r = std::get<RadialBandParams>(s.params);
      if (!(r.r1 < r.r2)) throw ValidationError("band order: r1 must be < r2");
      if (!(r.r1 > 0.0 && r.r2 < diam)) throw ValidationError("band must satisfy 0 < r1 < r2 < pi/sqrt(K)");
      if (r.base_nodes < 2) throw ValidationError("base_nodes must be >= 2");
      break;
    }
    case ScenarioKind::TwoBand: {
      const auto& r = std::get<TwoBandParams>(s.params);
      if (!(r.r1 < r.r_mid && r.r_mid < r.r2)) throw ValidationError("band order: need r1 < r_mid < r2");
      if (!(r.r1 > 0.0 && r.r2 < diam)) throw ValidationError("bands must satisfy 0 < r1 < r2 < pi/sqrt(K)");
      if (r.base_nodes < 2) throw ValidationError("base_nodes must be >= 2");
      break;
    }
    case ScenarioKind::DiscreteLp: {
      const auto& d = std::get<DiscreteLpParams>(s.params);
      try {
        const DiscreteMeasure mu(d.mu, s.manifold), nu(d.nu, s.manifold);
        if (std::abs(mu.total() - 1.0) > 1e-10 || std::abs(nu.total() - 1.0) > 1e-10)
          throw ValidationError("mu and nu must be probability measures");
      } catch (const InvalidMeasureError& e) {
        throw ValidationError(e.what());
      }
      break;
    }
    case ScenarioKind::TiltedDisk: {
      const auto& d = std::get<TiltedDiskParams>(s.params);
      if (!(d.theta >= 0.0 && d.theta < 0.5 * std::numbers::pi)) throw ValidationError("theta must lie in [0, pi/2)");
      if (!(d.t > 0.0 && d.t < d.r && d.r < diam)) throw ValidationError("tilted disk needs 0 < t < r < pi/sqrt(K)");
      break;
    }
  }
}

Potential radial_potential(const ManifoldParams& m) {
  return Potential({Anchor{south_pole(m), m.diameter()}}, m);
}

Materialized materialize(const Scenario& s) {
  const ManifoldParams& m = s.manifold;
  Materialized out;
  switch (s.kind) {
    case ScenarioKind::RadialBand: {
      const auto& r = std::get<RadialBandParams>(s.params);
      const Potential u = radial_potential(m);
      const double w = 0.5 * (r.r2 - r.r1);
      out.cylinders.push_back(make_polar_cylinder(u, 0, 0.5 * (r.r1 + r.r2), -w, w, r.base_nodes, 0.0,
                                                  2.0 * std::numbers::pi, s.seed));
      out.potential = u;
      break;
    }
    case ScenarioKind::TwoBand: {
      const auto& r = std::get<TwoBandParams>(s.params);
      const Potential u = radial_potential(m);
      for (auto [a, b] : {std::pair{r.r1, r.r_mid}, std::pair{r.r_mid, r.r2}}) {
        const double w = 0.5 * (b - a);
        out.cylinders.push_back(make_polar_cylinder(u, 0, 0.5 * (a + b), -w, w, r.base_nodes, 0.0,
                                                    2.0 * std::numbers::pi, s.seed));
      }
      out.potential = u;
      break;
    }
    case ScenarioKind::DiscreteLp: {
      const auto& d = std::get<DiscreteLpParams>(s.params);
      const DiscreteMeasure mu(d.mu, m), nu(d.nu, m);
      const DualSolution sol = solve_kantorovich_dual(mu, nu, m);
      for (Eigen::Index i = 0; i < sol.plan.rows(); ++i)
        for (Eigen::Index j = 0; j < sol.plan.cols(); ++j) {
          if (sol.plan(i, j) <= 1e-12) continue;
          const Point& x = mu.atoms()[i].point;
          const Point& y = nu.atoms()[j].point;
          const double len = distance(x, y, m);
          if (len <= 1e-9 || len >= m.diameter() - m.antipode_guard()) continue;
          const Point mid = exp_map(x, Vec(0.5 * log_map(x, y, m).vec), m);
          try {
            out.cylinders.push_back(make_degenerate_cylinder(sol.potential, mid, -0.45 * len, 0.45 * len));
          } catch (const AmbiguousDirectionError&) {
          } catch (const InsufficientRayLengthError&) {
          }
        }
      out.potential = sol.potential;
      break;
    }
    case ScenarioKind::TiltedDisk:
      break;
  }
  return out;
}

}  // namespace otray
