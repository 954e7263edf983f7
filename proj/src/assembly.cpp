#include "pdfem/assembly.hpp"

#include "pdfem/fem.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

namespace pdfem {

void compute_coefficients(const FamilySet& families, int dim, std::vector<BondCoefficients>& coeffs,
                          const std::vector<Index>* which, ShapeTensorBonds bonds) {
  coeffs.resize(families.size());
  std::vector<Index> list;
  if (which) {
    list = *which;
  } else {
    list.resize(families.size());
    for (Index f = 0; f < families.size(); ++f) list[f] = f;
  }
  std::vector<std::exception_ptr> errors(list.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (size_t k = 0; k < list.size(); ++k) {
    try {
      coeffs[list[k]] = compute_bond_coefficients(families.family(list[k]), dim, bonds);
    } catch (const SingularShapeTensor&) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Mat normal_matrix(const Vec3& n, int dim) {
  if (dim == 2) {
    Mat N = Mat::Zero(2, 3);
    N(0, 0) = n[0];
    N(0, 2) = n[1];
    N(1, 1) = n[1];
    N(1, 2) = n[0];
    return N;
  }
  Mat N = Mat::Zero(3, 6);
  N(0, 0) = n[0];
  N(0, 3) = n[1];
  N(0, 5) = n[2];
  N(1, 1) = n[1];
  N(1, 3) = n[0];
  N(1, 4) = n[2];
  N(2, 2) = n[2];
  N(2, 4) = n[1];
  N(2, 5) = n[0];
  return N;
}

namespace {

bool face_counts(const AssemblyInput& in, Index e, int f, bool include_shared) {
  const Face& face = in.mesh.faces()[in.mesh.element_face(e, f)];
  if (!face.interior() || include_shared) return true;
  const Index other = face.owners[0] == e ? face.owners[1] : face.owners[0];
  return !in.cls.element_pd(other);
}

}  // namespace

std::vector<std::vector<Index>> node_pattern(const AssemblyInput& in) {
  const Mesh& mesh = in.mesh;
  std::vector<std::vector<Index>> cols(mesh.num_nodes());
#pragma omp parallel for schedule(dynamic, 256)
  for (Index i = 0; i < mesh.num_nodes(); ++i) {
    std::vector<Index>& c = cols[i];
    for (Index e : mesh.elements_of_node(i))
      for (Index n : mesh.element(e).node_span()) c.push_back(n);
    if (in.cls.pd_node[i]) {
      const Family& fam = in.families.of_node(i);
      c.insert(c.end(), fam.members.begin(), fam.members.end());
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  return cols;
}

CsrMatrix assemble_global(const AssemblyInput& in) {
  const Mesh& mesh = in.mesh;
  const int dim = mesh.dim();
  const Index nn = mesh.num_nodes();
  const Mat D = elasticity_matrix(in.material);

  auto pattern = node_pattern(in);
  CsrMatrix K = block_pattern(pattern, dim, nn);

  // standard element matrices
  std::vector<Index> std_slot(mesh.num_elements(), -1);
  Index nstd = 0;
  for (Index e = 0; e < mesh.num_elements(); ++e)
    if (!in.cls.element_pd(e)) std_slot[e] = nstd++;
  std::vector<Mat> Ke(nstd);
#pragma omp parallel for schedule(static)
  for (Index e = 0; e < mesh.num_elements(); ++e)
    if (std_slot[e] >= 0)
      Ke[std_slot[e]] = standard_element_stiffness(mesh.element(e).kind, mesh.element_coords(e), D, mesh.thickness());

  // per-node PD weights: body share c_i and surface area vector a_i
  std::vector<double> cw(nn, 0.0);
  std::vector<Vec3> aw(nn, Vec3::Zero());
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!in.cls.element_pd(e)) continue;
    const Element& el = mesh.element(e);
    const double share = mesh.element_volume(e) / el.size();
    for (Index n : el.node_span()) cw[n] += share;
    for (int f = 0; f < faces_per_element(el.kind); ++f) {
      if (!face_counts(in, e, f, false)) continue;
      const Vec3 A = mesh.face_area_vector(e, f);
      auto ln = local_face_nodes(el.kind, f);
      for (int k : ln) aw[el.nodes[k]] += A / static_cast<double>(ln.size());
    }
  }

#pragma omp parallel
  {
    std::vector<Index> pos(nn, -1);
#pragma omp for schedule(dynamic, 64)
    for (Index i = 0; i < nn; ++i) {
      const auto& pc = pattern[i];
      for (size_t k = 0; k < pc.size(); ++k) pos[pc[k]] = static_cast<Index>(k);
      auto add = [&](int a, Index j, int b, double v) {
        const Index r = i * dim + a;
        K.val[K.row_ptr[r] + pos[j] * dim + b] += v;
      };

      for (Index e : mesh.elements_of_node(i)) {
        if (std_slot[e] < 0) continue;
        const Element& el = mesh.element(e);
        const Mat& k = Ke[std_slot[e]];
        int li = 0;
        while (el.nodes[li] != i) ++li;
        for (int lj = 0; lj < el.size(); ++lj)
          for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) add(a, el.nodes[lj], b, k(li * dim + a, lj * dim + b));
      }

      if (cw[i] > 0.0) {
        const Index f = in.families.family_of(i);
        const Family& fam = in.families.family(f);
        const BondCoefficients& co = in.coeffs[f];
        Mat M = -cw[i] * internal_force_operator(fam, co, in.material);
        if (aw[i].squaredNorm() > 0.0) M.noalias() += normal_matrix(aw[i], dim) * D * strain_operator(fam, co);
        for (size_t m = 0; m < fam.size(); ++m)
          for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) add(a, fam.members[m], b, M(a, dim * m + b));
      }

      for (Index j : pc) pos[j] = -1;
    }
  }
  K.drop_zeros();
  return K;
}

Vec assemble_loads(const Mesh& mesh, const std::vector<TractionLoad>& tractions, const Vec3& body_force,
                   const std::vector<PointLoad>& point_loads) {
  const int dim = mesh.dim();
  Vec F = Vec::Zero(static_cast<Eigen::Index>(dim) * mesh.num_nodes());
  for (const TractionLoad& t : tractions) {
    for (auto [e, f] : t.faces) {
      const Face& face = mesh.faces()[mesh.element_face(e, f)];
      if (face.interior()) throw Error("traction applied to an interior face");
      const Element& el = mesh.element(e);
      auto ln = local_face_nodes(el.kind, f);
      if (el.kind == ElementKind::Q4) {
        const double len = (mesh.node(el.nodes[ln[1]]) - mesh.node(el.nodes[ln[0]])).norm();
        const double share = 0.5 * len * mesh.thickness();
        for (int k : ln)
          for (int a = 0; a < 2; ++a) F[2 * el.nodes[k] + a] += share * t.traction[a];
      } else {
        // bilinear face, 2x2 Gauss
        std::array<Vec3, 4> x;
        for (int k = 0; k < 4; ++k) x[k] = mesh.node(el.nodes[ln[k]]);
        const GaussRule& rule = gauss_rule(ElementKind::Q4);
        for (size_t q = 0; q < rule.points.size(); ++q) {
          ShapeValues sv = shape_functions(ElementKind::Q4, rule.points[q]);
          Vec3 ds = Vec3::Zero(), dt = Vec3::Zero();
          for (int k = 0; k < 4; ++k) {
            ds += sv.dN(k, 0) * x[k];
            dt += sv.dN(k, 1) * x[k];
          }
          const double jac = ds.cross(dt).norm() * rule.weights[q];
          for (int k = 0; k < 4; ++k)
            for (int a = 0; a < 3; ++a) F[3 * el.nodes[ln[k]] + a] += sv.N[k] * jac * t.traction[a];
        }
      }
    }
  }
  if (body_force.squaredNorm() > 0.0) {
    for (Index e = 0; e < mesh.num_elements(); ++e) {
      const Element& el = mesh.element(e);
      const Mat c = mesh.element_coords(e);
      const GaussRule& rule = gauss_rule(el.kind);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        BMatrix b = b_matrix(el.kind, c, rule.points[q]);
        const double w = rule.weights[q] * b.detJ * (dim == 2 ? mesh.thickness() : 1.0);
        for (int k = 0; k < el.size(); ++k)
          for (int a = 0; a < dim; ++a) F[dim * el.nodes[k] + a] += w * b.N[k] * body_force[a];
      }
    }
  }
  for (const PointLoad& p : point_loads) {
    if (p.dof < 0 || p.dof >= F.size()) throw Error("point load on an invalid DOF");
    F[p.dof] += p.value;
  }
  return F;
}

void add_constraint(Constraints& c, Index dof, double value) {
  auto [it, inserted] = c.emplace(dof, value);
  if (!inserted && it->second != value)
    throw Error("conflicting constraints on DOF " + std::to_string(dof));
}

LinearSystem apply_dirichlet(const CsrMatrix& K, const Vec& F, const Constraints& c) {
  if (F.size() != K.rows) throw Error("load vector size does not match the stiffness matrix");
  std::vector<std::uint8_t> fixed(K.rows, 0);
  Vec ubar = Vec::Zero(K.rows);
  for (auto [dof, v] : c) {
    if (dof < 0 || dof >= K.rows) throw Error("constraint on an invalid DOF " + std::to_string(dof));
    fixed[dof] = 1;
    ubar[dof] = v;
  }
  LinearSystem s;
  s.F = F;
  CsrMatrix& A = s.K;
  A.rows = K.rows;
  A.cols = K.cols;
  A.row_ptr.assign(K.rows + 1, 0);
  A.col.reserve(K.nnz());
  A.val.reserve(K.nnz());
  for (Index r = 0; r < K.rows; ++r) {
    if (fixed[r]) {
      A.col.push_back(r);
      A.val.push_back(1.0);
      s.F[r] = ubar[r];
    } else {
      for (Index p = K.row_ptr[r]; p < K.row_ptr[r + 1]; ++p) {
        const Index j = K.col[p];
        if (fixed[j]) {
          s.F[r] -= K.val[p] * ubar[j];
        } else if (K.val[p] != 0.0) {
          A.col.push_back(j);
          A.val.push_back(K.val[p]);
        }
      }
    }
    A.row_ptr[r + 1] = static_cast<Index>(A.col.size());
  }
  return s;
}

}  // namespace pdfem
