#include "pdfem/scenarios.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace pdfem {

Index nearest_node(const Mesh& mesh, const Vec3& x) {
  Index best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (Index n = 0; n < mesh.num_nodes(); ++n) {
    const double d = (mesh.node(n) - x).squaredNorm();
    if (d < bd) {
      bd = d;
      best = n;
    }
  }
  if (best < 0) throw Error("mesh has no nodes");
  return best;
}

std::vector<Index> nodes_within(const Mesh& mesh, const Vec3& center, double radius) {
  std::vector<Index> out;
  for (Index n = 0; n < mesh.num_nodes(); ++n)
    if ((mesh.node(n) - center).norm() <= radius) out.push_back(n);
  return out;
}

std::vector<Index> nodes_on_plane(const Mesh& mesh, int axis, double value, double tol) {
  std::vector<Index> out;
  for (Index n = 0; n < mesh.num_nodes(); ++n)
    if (std::abs(mesh.node(n)[axis] - value) <= tol) out.push_back(n);
  return out;
}

std::vector<std::pair<Index, int>> boundary_faces_on_plane(const Mesh& mesh, int axis, double value, double tol) {
  std::vector<std::pair<Index, int>> out;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    for (int f = 0; f < faces_per_element(el.kind); ++f) {
      if (mesh.faces()[mesh.element_face(e, f)].interior()) continue;
      bool on = true;
      for (int k : local_face_nodes(el.kind, f)) on = on && std::abs(mesh.node(el.nodes[k])[axis] - value) <= tol;
      if (on) out.emplace_back(e, f);
    }
  }
  return out;
}

std::vector<Vec3> sample_path(const std::vector<Vec3>& corners, int per_segment) {
  std::vector<Vec3> out;
  if (corners.empty()) return out;
  for (size_t s = 0; s + 1 < corners.size(); ++s)
    for (int k = 0; k < per_segment; ++k)
      out.push_back(corners[s] + (corners[s + 1] - corners[s]) * (static_cast<double>(k) / per_segment));
  out.push_back(corners.back());
  return out;
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Mesh transformed(const Mesh& m, const Eigen::Matrix3d& R) {
  std::vector<NodeRecord> nodes;
  for (Index n = 0; n < m.num_nodes(); ++n) nodes.push_back({m.node_id(n), R * m.node(n)});
  std::vector<ElementRecord> elems;
  for (const Element& el : m.elements()) {
    ElementRecord r{el.id, el.kind, {}};
    for (Index n : el.node_span()) r.node_ids.push_back(m.node_id(n));
    elems.push_back(std::move(r));
  }
  return build_mesh(m.dim(), nodes, elems, m.thickness());
}

void fix_nodes(Problem& p, const std::string& name, const std::vector<Index>& nodes, int comp, double value,
               bool driven) {
  if (nodes.empty()) throw Error("boundary group " + name + " selected no nodes");
  p.dirichlet.push_back({name, nodes, comp, value, driven});
}

}  // namespace

ClosedFormSif infinite_plate_sif(const InfinitePlateParams& p) {
  const double K0 = p.sigma * std::sqrt(std::numbers::pi * p.a);
  const double t = p.theta_deg * kDeg;
  return {K0 * std::cos(t) * std::cos(t), K0 * std::cos(t) * std::sin(t), K0};
}

Scenario infinite_plate(const InfinitePlateParams& ip) {
  Scenario s;
  Problem& p = s.problem;
  p.name = "infinite_plate";
  const auto lines = graded_lines(-0.5, 0.5, -0.05, 0.05, 39, 9);
  p.mesh = generate_tensor_grid(lines, lines, {}, 1.0);
  const double h = 0.1 / 39;
  // shifted a quarter cell so inclined cracks do not pass through nodes
  const Vec3 c(0.25 * h, 0.0, 0.0);
  const double t = ip.theta_deg * kDeg;
  const Vec3 dir(std::cos(t), std::sin(t), 0.0);
  p.crack = CrackPath::polyline({c - ip.a * dir, c + ip.a * dir});
  p.material = {70e9, 0.33, 0.0, AnalysisMode::PlaneStress};
  p.num.m_beta = ip.m_beta;
  p.num.m_r = ip.m_r;
  p.tractions.push_back({boundary_faces_on_plane(p.mesh, 1, 0.5, 1e-9), Vec3(0, ip.sigma, 0)});
  p.tractions.push_back({boundary_faces_on_plane(p.mesh, 1, -0.5, 1e-9), Vec3(0, -ip.sigma, 0)});
  const Index left = nearest_node(p.mesh, Vec3(-0.5, 0, 0));
  const Index right = nearest_node(p.mesh, Vec3(0.5, 0, 0));
  fix_nodes(p, "left_x", {left}, 0, 0.0, false);
  fix_nodes(p, "left_y", {left}, 1, 0.0, false);
  fix_nodes(p, "right_y", {right}, 1, 0.0, false);
  s.schedule.R0 = 1.0;
  s.schedule.max_steps = 1;
  return s;
}

Scenario diagonal_plate() {
  Scenario s;
  Problem& p = s.problem;
  p.name = "diagonal_plate";
  const double L = 0.15;
  const int div[2] = {75, 75};
  Mesh square = generate_structured_grid(Vec3(-L / 2, -L / 2, 0), Vec3(L / 2, L / 2, 0), div, 0.005);
  p.mesh = transformed(square, Eigen::AngleAxisd(45.0 * kDeg, Vec3::UnitZ()).toRotationMatrix());
  const double corner = L / std::sqrt(2.0);
  const double b = 0.025, r_pin = 0.008;
  const Vec3 top(0, corner - b, 0), bottom(0, -(corner - b), 0);
  const double t = 62.5 * kDeg;
  const Vec3 dir(std::cos(t), std::sin(t), 0.0);
  p.crack = CrackPath::polyline({-0.0225 * dir, 0.0225 * dir});
  p.material = {2.94e9, 0.38, 1.33e6, AnalysisMode::PlaneStress};
  p.num.m_beta = 3.0;
  p.num.m_r = 6.0;
  const auto top_nodes = nodes_within(p.mesh, top, r_pin);
  const auto bottom_nodes = nodes_within(p.mesh, bottom, r_pin);
  // both pins move by the load u0 in opposite directions
  fix_nodes(p, "top_pin_y", top_nodes, 1, 1.0, true);
  fix_nodes(p, "bottom_pin_y", bottom_nodes, 1, -1.0, true);
  fix_nodes(p, "top_pin_x", top_nodes, 0, 0.0, false);
  fix_nodes(p, "bottom_pin_x", bottom_nodes, 0, 0.0, false);
  s.schedule.R0 = 2.5e-5;
  s.schedule.dR_max = 5e-5;
  s.schedule.max_steps = 200;
  s.schedule.max_growth_steps = 30;
  s.path = sample_path({Vec3(0.00743, 0.0286, 0), Vec3(-0.0138, 0.0499, 0), Vec3(-0.0499, 0.0138, 0)}, 30);
  return s;
}

Scenario ct_specimen() {
  Scenario s;
  Problem& p = s.problem;
  p.name = "ct";
  const double W = 0.05;
  // odd cell count across the height keeps the symmetry line free of nodes
  const int div[2] = {89, 85};
  p.mesh = generate_structured_grid(Vec3(0, -0.6 * W, 0), Vec3(1.25 * W, 0.6 * W, 0), div, 0.001);
  const double load_line = 0.25 * W, a = 0.3 * W;
  p.crack = CrackPath::polyline({Vec3(0, 0, 0), Vec3(load_line + a, 0, 0)}, false, true);
  p.material = {214e9, 0.27, 64.2e6, AnalysisMode::PlaneStress};
  p.num.m_beta = 3.0;
  p.num.m_r = 6.0;
  const double r_pin = 0.125 * W, y_pin = 0.275 * W;
  const auto top_nodes = nodes_within(p.mesh, Vec3(load_line, y_pin, 0), r_pin);
  const auto bottom_nodes = nodes_within(p.mesh, Vec3(load_line, -y_pin, 0), r_pin);
  fix_nodes(p, "top_pin_y", top_nodes, 1, 0.5, true);
  fix_nodes(p, "bottom_pin_y", bottom_nodes, 1, -0.5, true);
  fix_nodes(p, "top_pin_x", top_nodes, 0, 0.0, false);
  fix_nodes(p, "bottom_pin_x", bottom_nodes, 0, 0.0, false);
  s.schedule.R0 = 1e-5;
  s.schedule.dR_max = 2e-5;
  s.schedule.max_steps = 200;
  s.schedule.max_growth_steps = 25;
  return s;
}

Scenario block3d(bool full_pd) {
  Scenario s;
  Problem& p = s.problem;
  p.name = full_pd ? "block3d_full_pd" : "block3d";
  // odd cell count in y keeps the crack plane y = 0 free of nodes
  const int div[3] = {56, 57, 5};
  p.mesh = generate_structured_grid(Vec3(-0.5, -0.5, -0.05), Vec3(0.5, 0.5, 0.05), div);
  const double zc = 0.06;
  p.crack = CrackPath::planar_polygon(
      {Vec3(-0.1, 0, -zc), Vec3(0.1, 0, -zc), Vec3(0.1, 0, zc), Vec3(-0.1, 0, zc)});
  p.material = {200e9, 0.3, 0.0, AnalysisMode::ThreeD};
  p.num.m_beta = 2.1;
  p.num.full_pd = full_pd;
  fix_nodes(p, "top_y", nodes_on_plane(p.mesh, 1, 0.5, 1e-9), 1, 1.0, true);
  fix_nodes(p, "bottom_y", nodes_on_plane(p.mesh, 1, -0.5, 1e-9), 1, -1.0, true);
  const Index a = nearest_node(p.mesh, Vec3(-0.5, -0.5, -0.05));
  const Index b = nearest_node(p.mesh, Vec3(0.5, -0.5, -0.05));
  fix_nodes(p, "anchor_x", {a}, 0, 0.0, false);
  fix_nodes(p, "anchor_z", {a, b}, 2, 0.0, false);
  s.schedule.R0 = 5e-5;
  s.schedule.max_steps = 1;
  s.path = sample_path({Vec3(0.15, 0.1, 0), Vec3(0.15, 0.25, 0), Vec3(-0.15, 0.25, 0), Vec3(-0.15, 0.1, 0)}, 30);
  return s;
}

Scenario builtin_scenario(const std::string& name, const InfinitePlateParams& plate) {
  if (name == "infinite_plate") return infinite_plate(plate);
  if (name == "diagonal_plate") return diagonal_plate();
  if (name == "ct") return ct_specimen();
  if (name == "block3d") return block3d(false);
  throw Error("unknown scenario '" + name + "'");
}

}  // namespace pdfem
