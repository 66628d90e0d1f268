#pragma once

#include "otray/measure.hpp"
#include "otray/rays.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace otray {

enum class ScenarioKind { RadialBand, TwoBand, DiscreteLp, TiltedDisk };

std::string to_string(ScenarioKind k);

struct RadialBandParams {
  double r1 = 0.0;
  double r2 = 0.0;
  int base_nodes = 256;
};

struct TwoBandParams {
  double r1 = 0.0;
  double r_mid = 0.0;
  double r2 = 0.0;
  int base_nodes = 256;
};

struct DiscreteLpParams {
  std::vector<Atom> mu;
  std::vector<Atom> nu;
};

struct TiltedDiskParams {
  double theta = 0.0;
  double r = 0.0;
  double t = 0.0;
};

struct Scenario {
  std::string name;
  ManifoldParams manifold;
  ScenarioKind kind = ScenarioKind::RadialBand;
  std::variant<RadialBandParams, TwoBandParams, DiscreteLpParams, TiltedDiskParams> params;
  std::uint64_t seed = 42;
};

/// "pi/4", "3*pi/8", "-pi", "0.5" ... Throws ParseError.
double parse_angle(const std::string& text);

/// Strict parse: unknown keys, unknown kinds and malformed values raise
/// ParseError (with the line), violated invariants raise ValidationError.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
void validate_scenario(const Scenario& s);

/// Single anchor at the south pole with value pi / sqrt(K): u(x) = d(N, x).
Potential radial_potential(const ManifoldParams& m);

struct Materialized {
  std::optional<Potential> potential;  // empty for tilted-disk
  std::vector<CylinderSet> cylinders;
};

/// Radial band: one cylinder based on the central colatitude with window
/// +-(r2 - r1)/2. Two-band: one cylinder per band. Discrete LP: one
/// single-ray cylinder per transported pair. Tilted disk: nothing.
Materialized materialize(const Scenario& s);

}  // namespace otray
