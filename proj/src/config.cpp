#include "pdfem/config.hpp"

#include "pdfem/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace pdfem {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct BadValue {
  std::string why;
};

double to_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v)) throw BadValue{"'" + s + "' is not a number"};
  return v;
}

int to_int(const std::string& s) {
  int v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw BadValue{"'" + s + "' is not an integer"};
  return v;
}

double positive(const std::string& s) {
  const double v = to_double(s);
  if (!(v > 0.0)) throw BadValue{"must be positive"};
  return v;
}

int axis_of(const std::string& s) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  throw BadValue{"unknown axis '" + s + "'"};
}

int comp_of(const std::string& s) {
  if (s == "ux") return 0;
  if (s == "uy") return 1;
  if (s == "uz") return 2;
  throw BadValue{"unknown component '" + s + "'"};
}

Vec3 point_of(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() < 2 || parts.size() > 3) throw BadValue{"expected x,y[,z]"};
  Vec3 x = Vec3::Zero();
  for (size_t k = 0; k < parts.size(); ++k) x[k] = to_double(parts[k]);
  return x;
}

Region region_of(const std::string& s) {
  auto parts = split(s, ':');
  Region r;
  if (parts[0] == "plane" && parts.size() == 3) {
    r.kind = Region::Kind::Plane;
    r.axis = axis_of(parts[1]);
    r.coord = to_double(parts[2]);
  } else if (parts[0] == "point" && parts.size() == 2) {
    r.kind = Region::Kind::Point;
    r.center = point_of(parts[1]);
  } else if (parts[0] == "disk" && parts.size() == 3) {
    r.kind = Region::Kind::Disk;
    r.center = point_of(parts[1]);
    r.radius = positive(parts[2]);
  } else {
    throw BadValue{"unknown region '" + s + "'"};
  }
  return r;
}

std::string region_text(const Region& r) {
  const char* axes = "xyz";
  auto pt = [](const Vec3& x) { return num(x[0]) + "," + num(x[1]) + "," + num(x[2]); };
  switch (r.kind) {
    case Region::Kind::Plane: return std::string("plane:") + axes[r.axis] + ":" + num(r.coord);
    case Region::Kind::Point: return "point:" + pt(r.center);
    case Region::Kind::Disk: return "disk:" + pt(r.center) + ":" + num(r.radius);
  }
  return {};
}

BcSpec bc_of(BcSpec::Type type, const std::string& v) {
  auto w = words(v);
  BcSpec b;
  b.type = type;
  if (w.empty()) throw BadValue{"missing region"};
  b.region = region_of(w[0]);
  switch (type) {
    case BcSpec::Type::Fix:
      if (w.size() != 2) throw BadValue{"expected '<region> <component>'"};
      b.comp = comp_of(w[1]);
      break;
    case BcSpec::Type::Displace:
      if (w.size() != 3) throw BadValue{"expected '<region> <component> <value>'"};
      b.comp = comp_of(w[1]);
      b.value = to_double(w[2]);
      break;
    case BcSpec::Type::Traction:
      if (w.size() != 3 && w.size() != 4) throw BadValue{"expected '<region> <tx> <ty> [<tz>]'"};
      if (b.region.kind != Region::Kind::Plane) throw BadValue{"traction needs a plane region"};
      for (size_t k = 1; k < w.size(); ++k) b.traction[k - 1] = to_double(w[k]);
      break;
  }
  return b;
}

const char* const kRunNames[] = {"static", "quasi_static", "sif", "full_pd"};
const char* const kModeNames[] = {"plane_stress", "plane_strain", "3d"};
const char* const kSolverNames[] = {"auto", "direct", "iterative"};
const char* const kBondNames[] = {"all", "intact"};

template <class E, size_t N>
E enum_of(const std::string& s, const char* const (&names)[N]) {
  for (size_t k = 0; k < N; ++k)
    if (s == names[k]) return static_cast<E>(k);
  std::string all;
  for (size_t k = 0; k < N; ++k) all += (k ? ", " : "") + std::string(names[k]);
  throw BadValue{"expected one of " + all};
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"scenario", [](RunConfig& c, const std::string& v) { c.scenario = v; }},
      {"mesh", [](RunConfig& c, const std::string& v) { c.mesh_path = v; }},
      {"crack", [](RunConfig& c, const std::string& v) { c.crack_path = v; }},
      {"output", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
      {"run", [](RunConfig& c, const std::string& v) { c.run = enum_of<RunKind>(v, kRunNames); }},
      {"E", [](RunConfig& c, const std::string& v) { c.E = positive(v); }},
      {"nu",
       [](RunConfig& c, const std::string& v) {
         const double x = to_double(v);
         if (!(x > -1.0 && x < 0.5)) throw BadValue{"must lie in (-1, 0.5)"};
         c.nu = x;
       }},
      {"K_Ic", [](RunConfig& c, const std::string& v) { c.K_Ic = positive(v); }},
      {"thickness", [](RunConfig& c, const std::string& v) { c.thickness = positive(v); }},
      {"mode", [](RunConfig& c, const std::string& v) { c.mode = enum_of<AnalysisMode>(v, kModeNames); }},
      {"m_delta", [](RunConfig& c, const std::string& v) { c.m_delta = positive(v); }},
      {"c", [](RunConfig& c, const std::string& v) { c.c = positive(v); }},
      {"m_beta",
       [](RunConfig& c, const std::string& v) {
         const double x = to_double(v);
         if (x < 0.0) throw BadValue{"must not be negative"};
         c.m_beta = x;
       }},
      {"m_r", [](RunConfig& c, const std::string& v) { c.m_r = positive(v); }},
      {"alpha", [](RunConfig& c, const std::string& v) { c.alpha = positive(v); }},
      {"dR_max", [](RunConfig& c, const std::string& v) { c.dR_max = positive(v); }},
      {"solver_tol", [](RunConfig& c, const std::string& v) { c.solver_tol = positive(v); }},
      {"solver", [](RunConfig& c, const std::string& v) { c.solver = enum_of<SolverMethod>(v, kSolverNames); }},
      {"shape_bonds",
       [](RunConfig& c, const std::string& v) { c.shape_bonds = enum_of<ShapeTensorBonds>(v, kBondNames); }},
      {"load0", [](RunConfig& c, const std::string& v) { c.load0 = positive(v); }},
      {"max_load", [](RunConfig& c, const std::string& v) { c.max_load = positive(v); }},
      {"max_crack_length", [](RunConfig& c, const std::string& v) { c.max_crack_length = positive(v); }},
      {"max_steps",
       [](RunConfig& c, const std::string& v) {
         const int n = to_int(v);
         if (n < 1) throw BadValue{"must be positive"};
         c.max_steps = n;
       }},
      {"max_growth_steps",
       [](RunConfig& c, const std::string& v) {
         const int n = to_int(v);
         if (n < 1) throw BadValue{"must be positive"};
         c.max_growth_steps = n;
       }},
      {"theta", [](RunConfig& c, const std::string& v) { c.theta = to_double(v); }},
      {"sigma", [](RunConfig& c, const std::string& v) { c.sigma = positive(v); }},
      {"active_tips",
       [](RunConfig& c, const std::string& v) {
         if (v != "both" && v != "start" && v != "end" && v != "none") throw BadValue{"expected both, start, end or none"};
         c.active_tips = v;
       }},
      {"fix", [](RunConfig& c, const std::string& v) { c.bcs.push_back(bc_of(BcSpec::Type::Fix, v)); }},
      {"displace", [](RunConfig& c, const std::string& v) { c.bcs.push_back(bc_of(BcSpec::Type::Displace, v)); }},
      {"traction", [](RunConfig& c, const std::string& v) { c.bcs.push_back(bc_of(BcSpec::Type::Traction, v)); }},
  };
  return m;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig c;
  std::string line;
  int ln = 0;
  auto fail = [&](const std::string& what) -> Error {
    return Error(source + ":" + std::to_string(ln) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) throw fail("unknown key '" + key + "'");
    if (value.empty()) throw fail("missing value for '" + key + "'");
    try {
      it->second(c, value);
    } catch (const BadValue& b) {
      throw fail("invalid value for '" + key + "': " + b.why);
    }
  }
  if (c.scenario.empty() && c.mesh_path.empty()) throw Error(source + ": either 'scenario' or 'mesh' is required");
  return c;
}

RunConfig read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  return parse_config(f, path);
}

std::string serialize(const RunConfig& c) {
  std::ostringstream o;
  auto str = [&](const char* k, const std::string& v) {
    if (!v.empty()) o << k << " = " << v << '\n';
  };
  auto opt = [&](const char* k, const std::optional<double>& v) {
    if (v) o << k << " = " << num(*v) << '\n';
  };
  auto opti = [&](const char* k, const std::optional<int>& v) {
    if (v) o << k << " = " << *v << '\n';
  };
  str("scenario", c.scenario);
  str("mesh", c.mesh_path);
  str("crack", c.crack_path);
  str("output", c.output_dir);
  o << "run = " << kRunNames[static_cast<int>(c.run)] << '\n';
  opt("E", c.E);
  opt("nu", c.nu);
  opt("K_Ic", c.K_Ic);
  opt("thickness", c.thickness);
  if (c.mode) o << "mode = " << kModeNames[static_cast<int>(*c.mode)] << '\n';
  opt("m_delta", c.m_delta);
  opt("c", c.c);
  opt("m_beta", c.m_beta);
  opt("m_r", c.m_r);
  opt("alpha", c.alpha);
  opt("dR_max", c.dR_max);
  opt("solver_tol", c.solver_tol);
  if (c.solver) o << "solver = " << kSolverNames[static_cast<int>(*c.solver)] << '\n';
  if (c.shape_bonds) o << "shape_bonds = " << kBondNames[static_cast<int>(*c.shape_bonds)] << '\n';
  opt("load0", c.load0);
  opt("max_load", c.max_load);
  opt("max_crack_length", c.max_crack_length);
  opti("max_steps", c.max_steps);
  opti("max_growth_steps", c.max_growth_steps);
  opt("theta", c.theta);
  opt("sigma", c.sigma);
  if (c.active_tips) o << "active_tips = " << *c.active_tips << '\n';
  const char* comps[] = {"ux", "uy", "uz"};
  for (const BcSpec& b : c.bcs) {
    switch (b.type) {
      case BcSpec::Type::Fix: o << "fix = " << region_text(b.region) << ' ' << comps[b.comp] << '\n'; break;
      case BcSpec::Type::Displace:
        o << "displace = " << region_text(b.region) << ' ' << comps[b.comp] << ' ' << num(b.value) << '\n';
        break;
      case BcSpec::Type::Traction:
        o << "traction = " << region_text(b.region) << ' ' << num(b.traction[0]) << ' ' << num(b.traction[1]) << ' '
          << num(b.traction[2]) << '\n';
        break;
    }
  }
  return o.str();
}

Numerics resolve_numerics(const RunConfig& c, Numerics n) {
  if (c.m_delta) n.m_delta = *c.m_delta;
  if (c.c) n.c = *c.c;
  if (c.m_beta) n.m_beta = *c.m_beta;
  if (c.m_r) n.m_r = *c.m_r;
  if (c.alpha) n.alpha = *c.alpha;
  if (c.solver_tol) n.solver.tol = *c.solver_tol;
  if (c.solver) n.solver.method = *c.solver;
  if (c.shape_bonds) n.shape_bonds = *c.shape_bonds;
  if (c.run == RunKind::FullPD) n.full_pd = true;
  return n;
}

namespace {

Mesh with_thickness(const Mesh& m, double t) {
  std::vector<NodeRecord> nodes;
  for (Index n = 0; n < m.num_nodes(); ++n) nodes.push_back({m.node_id(n), m.node(n)});
  std::vector<ElementRecord> elems;
  for (const Element& el : m.elements()) {
    ElementRecord r{el.id, el.kind, {}};
    for (Index n : el.node_span()) r.node_ids.push_back(m.node_id(n));
    elems.push_back(std::move(r));
  }
  return build_mesh(m.dim(), nodes, elems, t);
}

std::vector<Index> region_nodes(const Mesh& mesh, const Region& r) {
  auto [lo, hi] = mesh.bounds();
  const double tol = 1e-9 * (hi - lo).norm();
  switch (r.kind) {
    case Region::Kind::Plane: return nodes_on_plane(mesh, r.axis, r.coord, tol);
    case Region::Kind::Point: return {nearest_node(mesh, r.center)};
    case Region::Kind::Disk: return nodes_within(mesh, r.center, r.radius);
  }
  return {};
}

}  // namespace

Scenario build_scenario(const RunConfig& c, const std::string& base_dir) {
  Scenario s;
  if (!c.scenario.empty()) {
    InfinitePlateParams ip;
    if (c.theta) ip.theta_deg = *c.theta;
    if (c.sigma) ip.sigma = *c.sigma;
    if (c.m_beta) ip.m_beta = *c.m_beta;
    if (c.m_r) ip.m_r = *c.m_r;
    s = c.scenario == "block3d" && c.run == RunKind::FullPD ? block3d(true) : builtin_scenario(c.scenario, ip);
  } else {
    namespace fs = std::filesystem;
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (fs::path(base_dir) / p).string(); };
    s.problem.name = fs::path(c.mesh_path).stem().string();
    s.problem.mesh = read_mesh(resolve(c.mesh_path));
    const int dim = s.problem.mesh.dim();
    s.problem.crack = c.crack_path.empty() ? CrackPath::none(dim) : read_crack(resolve(c.crack_path), dim);
    s.problem.material.mode = dim == 3 ? AnalysisMode::ThreeD : AnalysisMode::PlaneStress;
  }
  Problem& p = s.problem;
  if (c.E) p.material.E = *c.E;
  if (c.nu) p.material.nu = *c.nu;
  if (c.K_Ic) p.material.K_Ic = *c.K_Ic;
  if (c.mode) p.material.mode = *c.mode;
  if (c.thickness && *c.thickness != p.mesh.thickness()) p.mesh = with_thickness(p.mesh, *c.thickness);
  p.num = resolve_numerics(c, p.num);
  if (c.active_tips && p.crack.dim() == 2 && !p.crack.empty()) {
    const std::string& t = *c.active_tips;
    p.crack.set_tip_active(0, t == "both" || t == "start");
    p.crack.set_tip_active(1, t == "both" || t == "end");
  }

  const int dim = p.mesh.dim();
  for (const BcSpec& b : c.bcs) {
    if (b.comp >= dim) throw Error("boundary component out of range for a " + std::to_string(dim) + "-D mesh");
    if (b.type == BcSpec::Type::Traction) {
      auto [lo, hi] = p.mesh.bounds();
      auto faces = boundary_faces_on_plane(p.mesh, b.region.axis, b.region.coord, 1e-9 * (hi - lo).norm());
      if (faces.empty()) throw Error("traction region " + region_text(b.region) + " selects no boundary faces");
      p.tractions.push_back({std::move(faces), b.traction});
      continue;
    }
    auto nodes = region_nodes(p.mesh, b.region);
    if (nodes.empty()) throw Error("region " + region_text(b.region) + " selects no nodes");
    const bool driven = b.type == BcSpec::Type::Displace;
    p.dirichlet.push_back({region_text(b.region), std::move(nodes), b.comp, b.value, driven});
  }
  // driven groups first so the logged reaction is the one at the loading point
  std::stable_partition(p.dirichlet.begin(), p.dirichlet.end(), [](const DirichletGroup& g) { return g.driven; });

  LoadSchedule& sch = s.schedule;
  if (c.load0) sch.R0 = *c.load0;
  if (c.dR_max) sch.dR_max = *c.dR_max;
  if (c.max_steps) sch.max_steps = *c.max_steps;
  if (c.max_growth_steps) sch.max_growth_steps = *c.max_growth_steps;
  if (c.max_load) sch.max_load = *c.max_load;
  if (c.max_crack_length) sch.max_crack_length = *c.max_crack_length;
  return s;
}

}  // namespace pdfem
