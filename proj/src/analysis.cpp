#include "pdfem/analysis.hpp"

#include "pdfem/fem.hpp"

#include <algorithm>
#include <chrono>

namespace pdfem {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

StressField recover_stress(const SolvedState& s) {
  const Mesh& mesh = s.mesh;
  const int dim = mesh.dim(), nv = voigt_size(dim);
  const Mat D = elasticity_matrix(s.material);
  StressField out{Mat::Zero(mesh.num_nodes(), nv), Mat::Zero(mesh.num_elements(), nv)};

  Mat pd = Mat::Zero(mesh.num_nodes(), nv);
#pragma omp parallel for schedule(dynamic, 64)
  for (Index n = 0; n < mesh.num_nodes(); ++n) {
    if (!s.cls.pd_node[n]) continue;
    const Index f = s.families.family_of(n);
    const Family& fam = s.families.family(f);
    pd.row(n) = stress_at_pd_node(strain_operator(fam, s.coeffs[f]), D, gather_family(fam, s.u, dim)).transpose();
  }
#pragma omp parallel for schedule(static)
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    Vec acc = Vec::Zero(nv);
    if (s.cls.element_pd(e)) {
      for (Index n : el.node_span()) acc += pd.row(n).transpose();
      acc /= el.size();
    } else {
      Vec ue(dim * el.size());
      for (int k = 0; k < el.size(); ++k) ue.segment(dim * k, dim) = s.u.segment(dim * el.nodes[k], dim);
      auto gs = recover_stress_standard(el.kind, mesh.element_coords(e), ue, D);
      for (const GaussStress& g : gs) acc += g.stress;
      acc /= static_cast<double>(gs.size());
    }
    out.cell.row(e) = acc.transpose();
  }
  for (Index n = 0; n < mesh.num_nodes(); ++n) {
    if (s.cls.pd_node[n]) {
      out.point.row(n) = pd.row(n);
      continue;
    }
    int cnt = 0;
    for (Index e : mesh.elements_of_node(n)) {
      out.point.row(n) += out.cell.row(e);
      ++cnt;
    }
    if (cnt) out.point.row(n) /= cnt;
  }
  return out;
}

Model::Model(Problem p) : p_(std::move(p)) {
  p_.material.validate();
  if (spatial_dim(p_.material.mode) != p_.mesh.dim()) throw Error("analysis mode does not match the mesh dimension");
  if (p_.crack.empty()) p_.crack = CrackPath::none(p_.mesh.dim());
  auto t0 = std::chrono::steady_clock::now();
  cls_ = p_.num.full_pd ? full_pd_classification(p_.mesh, p_.crack)
                        : classify_elements(p_.mesh, p_.crack, p_.num.m_beta);
  t_.classify += seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  fam_ = FamilySet(p_.mesh, cls_, p_.crack, p_.num.m_delta, p_.num.c);
  t_.families += seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  compute_coefficients(fam_, p_.mesh.dim(), coeffs_, nullptr, p_.num.shape_bonds);
  t_.coefficients += seconds_since(t0);
}

const CsrMatrix& Model::stiffness() {
  if (!K_) {
    auto t0 = std::chrono::steady_clock::now();
    K_ = assemble_global(assembly_input());
    t_.assembly += seconds_since(t0);
  }
  return *K_;
}

Constraints Model::constraints(double R) const {
  Constraints c;
  const int dim = p_.mesh.dim();
  for (const DirichletGroup& g : p_.dirichlet) {
    if (g.comp < 0 || g.comp >= dim) throw Error("constraint component out of range in group " + g.name);
    const double v = g.driven ? g.value * R : g.value;
    for (Index n : g.nodes) add_constraint(c, n * dim + g.comp, v);
  }
  return c;
}

Vec Model::loads(double R) const {
  Vec F = assemble_loads(p_.mesh, p_.tractions, Vec3::Zero(), p_.point_loads) * R;
  if (p_.body_force.squaredNorm() > 0) F += assemble_loads(p_.mesh, {}, p_.body_force, {});
  return F;
}

StaticResult Model::solve(double R) {
  const CsrMatrix& K = stiffness();
  StaticResult r;
  r.F = loads(R);
  const Constraints c = constraints(R);
  auto t0 = std::chrono::steady_clock::now();
  LinearSystem sys = apply_dirichlet(K, r.F, c);
  r.u = solve_static(sys, p_.num.solver, &r.stats);
  t_.solve += seconds_since(t0);
  for (auto [dof, v] : c) r.constrained.push_back(dof);
  r.reactions = reaction_forces(K, r.u, r.F, r.constrained);
  for (const DirichletGroup& g : p_.dirichlet) {
    if (!g.driven) continue;
    const int dim = p_.mesh.dim();
    for (Index n : g.nodes) {
      auto it = std::lower_bound(r.constrained.begin(), r.constrained.end(), n * dim + g.comp);
      r.reaction += r.reactions[it - r.constrained.begin()];
    }
    break;
  }
  return r;
}

SifResult Model::sif(int tip, const Vec& u, double m_r) const {
  return compute_sifs(build_contour(solved_state(u), p_.crack, tip, m_r), p_.material);
}

void Model::grow(int tip, double theta, double d_c) {
  if (!p_.crack.tip_active(tip)) throw Error("tip is not growable");
  CrackPath grown = grow_crack(p_.crack, tip, theta, d_c);
  const Vec3 a = p_.crack.tip(tip), b = grown.tip(tip);
  {
    PointLocator loc(p_.mesh);
    if (!loc.locate(b)) throw TipExitedDomain("crack tip left the domain");
  }
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Index> dirty = fam_.break_bonds(p_.mesh, a, b);
  cls_ = update_classification(cls_, p_.mesh, grown);
  t_.classify += seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  std::vector<Index> added = fam_.add_missing(p_.mesh, cls_, grown);
  t_.families += seconds_since(t0);
  dirty.insert(dirty.end(), added.begin(), added.end());
  std::sort(dirty.begin(), dirty.end());
  dirty.erase(std::unique(dirty.begin(), dirty.end()), dirty.end());
  t0 = std::chrono::steady_clock::now();
  compute_coefficients(fam_, p_.mesh.dim(), coeffs_, &dirty, p_.num.shape_bonds);
  t_.coefficients += seconds_since(t0);
  p_.crack = std::move(grown);
  K_.reset();
}

}  // namespace pdfem
