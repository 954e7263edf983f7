#pragma once

#include "pdfem/scenarios.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pdfem {

enum class RunKind { Static, QuasiStatic, SifOnly, FullPD };

/// Node or face selection for a boundary condition.
/// Text forms: plane:<x|y|z>:<coord>, point:<x>,<y>[,<z>], disk:<x>,<y>[,<z>]:<radius>.
struct Region {
  enum class Kind { Plane, Point, Disk };
  Kind kind = Kind::Plane;
  int axis = 0;
  double coord = 0.0;
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  bool operator==(const Region&) const = default;
};

/// fix = <region> <ux|uy|uz>
/// displace = <region> <ux|uy|uz> <value>        (scaled by the load factor)
/// traction = <region> <tx> <ty> [<tz>]          (plane regions only, scaled by the load factor)
struct BcSpec {
  enum class Type { Fix, Displace, Traction };
  Type type = Type::Fix;
  Region region;
  int comp = 0;
  double value = 0.0;
  Vec3 traction = Vec3::Zero();
  bool operator==(const BcSpec&) const = default;
};

/// key = value run description. Unset optionals fall back to the scenario's values, then to
/// the documented defaults.
struct RunConfig {
  std::string scenario;  // built-in geometry; empty means mesh (+ crack) files
  std::string mesh_path, crack_path;
  std::string output_dir = ".";
  RunKind run = RunKind::Static;

  std::optional<double> E, nu, K_Ic, thickness;
  std::optional<AnalysisMode> mode;

  std::optional<double> m_delta, c, m_beta, m_r, alpha, dR_max, solver_tol;
  std::optional<SolverMethod> solver;
  std::optional<ShapeTensorBonds> shape_bonds;

  std::optional<double> load0, max_load, max_crack_length;
  std::optional<int> max_steps, max_growth_steps;

  std::optional<double> theta, sigma;  // infinite_plate only
  std::optional<std::string> active_tips;  // both, start, end, none

  std::vector<BcSpec> bcs;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig read_config(const std::string& path);
/// Writes every set key; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& c);

/// Numerics with config overrides applied on top of `base`.
Numerics resolve_numerics(const RunConfig& c, Numerics base = {});

/// Builds the problem: a built-in scenario or the mesh and crack files (relative paths are
/// taken from base_dir), then applies material, numerics, schedule and boundary overrides.
Scenario build_scenario(const RunConfig& c, const std::string& base_dir = ".");

}  // namespace pdfem
