#include "pdfem/analysis.hpp"
#include "pdfem/assembly.hpp"
#include "pdfem/fem.hpp"
#include "pdfem/scenarios.hpp"

#include <gtest/gtest.h>

#include <omp.h>

#include <array>
#include <cmath>
#include <random>

using namespace pdfem;

namespace {

Material steel2d() {
  Material m;
  m.E = 200e9;
  m.nu = 0.3;
  m.mode = AnalysisMode::PlaneStress;
  return m;
}

Mat dense(const CsrMatrix& K) {
  Mat D = Mat::Zero(K.rows, K.cols);
  for (Index r = 0; r < K.rows; ++r)
    for (Index p = K.row_ptr[r]; p < K.row_ptr[r + 1]; ++p) D(r, K.col[p]) += K.val[p];
  return D;
}

// Grid with a horizontal edge crack, PD region from the adaptive classification.
Problem cracked_grid(int nx, int ny) {
  Problem p;
  const std::array<int, 2> div{nx, ny};
  p.mesh = generate_structured_grid(Vec3(0, 0, 0), Vec3(1, 1, 0), div, 0.01);
  p.crack = CrackPath::polyline({Vec3(-0.01, 0.51, 0), Vec3(0.45, 0.51, 0)}, false, true);
  p.material = steel2d();
  return p;
}

struct Patch {
  Mesh mesh;
  Classification cls;
  FamilySet fam;
  std::vector<BondCoefficients> coeffs;
  Material mat = steel2d();
  AssemblyInput input() const { return {mesh, cls, fam, coeffs, mat}; }
};

// Uncracked grid with a forced BetaPD block of elements.
Patch forced_patch(int n, double lo, double hi) {
  Patch p;
  const std::array<int, 2> div{n, n};
  p.mesh = generate_structured_grid(Vec3(0, 0, 0), Vec3(1, 1, 0), div, 0.01);
  std::vector<Label> labels(p.mesh.num_elements(), Label::Standard);
  for (Index e = 0; e < p.mesh.num_elements(); ++e) {
    const Vec3& c = p.mesh.centroid(e);
    if (c.x() > lo && c.x() < hi && c.y() > lo && c.y() < hi) labels[e] = Label::BetaPD;
  }
  p.cls = classification_from_labels(p.mesh, labels);
  const CrackPath none = CrackPath::none(2);
  p.fam = FamilySet(p.mesh, p.cls, none, 3.0, 1.0 / 3.0);
  compute_coefficients(p.fam, 2, p.coeffs);
  return p;
}

}  // namespace

TEST(NormalMatrix, Examples) {
  Mat N = normal_matrix(Vec3(1, 0, 0), 2);
  Mat expect(2, 3);
  expect << 1, 0, 0, 0, 0, 1;
  EXPECT_EQ((N - expect).norm(), 0.0);

  // traction from the full stress tensor
  std::mt19937 rng(4);
  std::normal_distribution<double> g;
  for (int dim : {2, 3}) {
    Eigen::Matrix3d S = Eigen::Matrix3d::Zero();
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) S(i, j) = S(j, i) = g(rng);
    Vec3 n(g(rng), g(rng), dim == 3 ? g(rng) : 0.0);
    n.normalize();
    Vec v(voigt_size(dim));
    if (dim == 2)
      v << S(0, 0), S(1, 1), S(0, 1);
    else
      v << S(0, 0), S(1, 1), S(2, 2), S(0, 1), S(1, 2), S(0, 2);
    Vec t = normal_matrix(n, dim) * v;
    EXPECT_LT((t - (S * n).head(dim)).norm(), 1e-14);
  }
}

TEST(Assembly, AllStandardEqualsSumOfElementMatrices) {
  const std::array<int, 2> div{4, 3};
  Patch p;
  p.mesh = generate_structured_grid(Vec3(0, 0, 0), Vec3(2, 1, 0), div, 0.2);
  p.cls = classification_from_labels(p.mesh, std::vector<Label>(p.mesh.num_elements(), Label::Standard));
  p.fam = FamilySet(p.mesh, p.cls, CrackPath::none(2), 3.0, 1.0 / 3.0);
  const CsrMatrix K = assemble_global(p.input());

  const Mat D = elasticity_matrix(p.mat);
  Mat oracle = Mat::Zero(K.rows, K.cols);
  for (Index e = 0; e < p.mesh.num_elements(); ++e) {
    const Element& el = p.mesh.element(e);
    Mat Ke = standard_element_stiffness(el.kind, p.mesh.element_coords(e), D, 0.2);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) oracle.block(2 * el.nodes[a], 2 * el.nodes[b], 2, 2) += Ke.block(2 * a, 2 * b, 2, 2);
  }
  EXPECT_LT((dense(K) - oracle).cwiseAbs().maxCoeff(), 1e-14 * oracle.cwiseAbs().maxCoeff());
  EXPECT_LT((dense(assemble_reference(p.input())) - oracle).cwiseAbs().maxCoeff(),
            1e-14 * oracle.cwiseAbs().maxCoeff());
}

TEST(Assembly, AllStandardAdaptiveModelMatchesPureFem) {
  // empty crack and m_beta < 1: nothing becomes PD
  Problem p = cracked_grid(6, 6);
  p.crack = CrackPath::none(2);
  p.num.m_beta = 0.5;
  Model m(p);
  EXPECT_EQ(m.classification().num_pd_nodes(), 0);
  Patch q;
  q.mesh = p.mesh;
  q.cls = classification_from_labels(q.mesh, std::vector<Label>(q.mesh.num_elements(), Label::Standard));
  q.fam = FamilySet(q.mesh, q.cls, CrackPath::none(2), 3.0, 1.0 / 3.0);
  const CsrMatrix K = assemble_global(q.input());
  EXPECT_EQ(m.stiffness().val, K.val);
  EXPECT_EQ(m.stiffness().col, K.col);
}

TEST(Assembly, CsrLayoutAndTranslationNullSpace) {
  Model m(cracked_grid(12, 12));
  ASSERT_GT(m.classification().num_pd_nodes(), 0);
  const CsrMatrix& K = m.stiffness();
  for (Index r = 0; r < K.rows; ++r)
    for (Index p = K.row_ptr[r] + 1; p < K.row_ptr[r + 1]; ++p) ASSERT_LT(K.col[p - 1], K.col[p]);
  for (double v : K.val) EXPECT_NE(v, 0.0);
  for (int a = 0; a < 2; ++a) {
    Vec t = Vec::Zero(K.cols);
    for (Index i = a; i < K.cols; i += 2) t[i] = 1.0;
    EXPECT_LE(K.multiply(t).cwiseAbs().maxCoeff(), 1e-9 * K.norm_inf());
  }
}

TEST(Assembly, GlobalMatchesSerialReferenceAndAllFaces) {
  Model m(cracked_grid(12, 12));
  const CsrMatrix& K = m.stiffness();
  const Mat G = dense(K);
  const double ref = G.cwiseAbs().maxCoeff();
  EXPECT_LT((dense(assemble_reference(m.assembly_input(), false)) - G).cwiseAbs().maxCoeff(), 1e-12 * ref);
  EXPECT_LT((dense(assemble_reference(m.assembly_input(), true)) - G).cwiseAbs().maxCoeff(), 1e-12 * ref);
}

TEST(Assembly, InteriorPdElementHasNoSurfaceTerm) {
  Patch p = forced_patch(10, 0.25, 0.75);
  int interior = 0;
  for (Index e = 0; e < p.mesh.num_elements(); ++e) {
    if (!p.cls.element_pd(e)) continue;
    bool surrounded = true;
    for (int f = 0; f < 4; ++f) {
      const Face& face = p.mesh.faces()[p.mesh.element_face(e, f)];
      const Index other = face.owners[0] == e ? face.owners[1] : face.owners[0];
      if (other < 0 || !p.cls.element_pd(other)) surrounded = false;
    }
    auto blocks = pd_element_stiffness_surface(p.input(), e);
    double mag = 0;
    for (auto& b : blocks) mag += b.block.norm();
    if (surrounded) {
      ++interior;
      EXPECT_EQ(mag, 0.0);
      // with every face included the blocks are not zero, they only cancel in the sum
      double all = 0;
      for (auto& b : pd_element_stiffness_surface(p.input(), e, true)) all += b.block.norm();
      EXPECT_GT(all, 0.0);
    } else {
      EXPECT_GT(mag, 0.0);
    }
  }
  EXPECT_EQ(interior, 4);  // 4 x 4 PD block
}

TEST(Assembly, BodyTermAnnihilatesTranslation) {
  Patch p = forced_patch(8, 0.2, 0.8);
  for (Index e = 0; e < p.mesh.num_elements(); ++e) {
    if (!p.cls.element_pd(e)) continue;
    for (const BlockContribution& b : pd_element_stiffness_body(p.input(), e)) {
      Vec t(b.block.cols());
      for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = i % 2 ? -2.0 : 1.0;
      EXPECT_LT((b.block * t).norm(), 1e-9 * b.block.norm());
    }
  }
}

TEST(Assembly, AffineResidualVanishesThroughCoupledOperator) {
  Patch p = forced_patch(10, 0.3, 0.7);
  const CsrMatrix K = assemble_global(p.input());
  Vec u(K.cols);
  for (Index n = 0; n < p.mesh.num_nodes(); ++n) {
    const Vec3& x = p.mesh.node(n);
    u[2 * n] = 1e-3 * (0.4 + 2 * x.x() - x.y());
    u[2 * n + 1] = 1e-3 * (0.5 * x.x() + 3 * x.y());
  }
  const Vec r = K.multiply(u);
  double worst = 0;
  for (Index n = 0; n < p.mesh.num_nodes(); ++n) {
    const Vec3& x = p.mesh.node(n);
    if (x.x() < 1e-12 || x.y() < 1e-12 || x.x() > 1 - 1e-12 || x.y() > 1 - 1e-12) continue;
    worst = std::max(worst, r.segment(2 * n, 2).cwiseAbs().maxCoeff());
  }
  EXPECT_LE(worst, 1e-8 * K.norm_inf() * u.cwiseAbs().maxCoeff());
}

TEST(Assembly, DeterministicAcrossThreadCounts) {
  Model m(cracked_grid(16, 16));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const CsrMatrix a = assemble_global(m.assembly_input());
  omp_set_num_threads(3);
  const CsrMatrix b = assemble_global(m.assembly_input());
  omp_set_num_threads(saved);
  EXPECT_EQ(a.row_ptr, b.row_ptr);
  EXPECT_EQ(a.col, b.col);
  EXPECT_EQ(a.val, b.val);
}

TEST(Loads, TopEdgeTraction2d) {
  const std::array<int, 2> div{4, 2};
  const Mesh mesh = generate_structured_grid(Vec3(0, 0, 0), Vec3(4, 2, 0), div, 0.5);
  TractionLoad t;
  t.faces = boundary_faces_on_plane(mesh, 1, 2.0, 1e-9);
  ASSERT_EQ(t.faces.size(), 4u);
  t.traction = Vec3(0, 3.0, 0);
  const Vec F = assemble_loads(mesh, {t}, Vec3::Zero(), {});
  for (Index n = 0; n < mesh.num_nodes(); ++n) {
    const Vec3& x = mesh.node(n);
    double expect = 0;
    if (std::abs(x.y() - 2) < 1e-12) expect = (x.x() < 1e-12 || x.x() > 4 - 1e-12) ? 0.75 : 1.5;
    EXPECT_NEAR(F[2 * n + 1], expect, 1e-14);
    EXPECT_EQ(F[2 * n], 0.0);
  }
  EXPECT_NEAR(F.sum(), 3.0 * 4 * 0.5, 1e-13);
  EXPECT_EQ(assemble_loads(mesh, {}, Vec3::Zero(), {}).norm(), 0.0);
}

TEST(Loads, FaceTractionBodyForceAndPointLoads3d) {
  const std::array<int, 3> div{2, 3, 2};
  const Mesh mesh = generate_structured_grid(Vec3(0, 0, 0), Vec3(2, 3, 1), div);
  TractionLoad t;
  t.faces = boundary_faces_on_plane(mesh, 2, 1.0, 1e-9);
  t.traction = Vec3(0.5, 0, -2);
  const Vec F = assemble_loads(mesh, {t}, Vec3(0, 7, 0), {{4, 1.25}});
  double fx = 0, fy = 0, fz = 0;
  for (Index n = 0; n < mesh.num_nodes(); ++n) fx += F[3 * n], fy += F[3 * n + 1], fz += F[3 * n + 2];
  EXPECT_NEAR(fx, 0.5 * 6 + (4 % 3 == 0 ? 1.25 : 0.0), 1e-12);
  EXPECT_NEAR(fy, 7 * 6 + (4 % 3 == 1 ? 1.25 : 0.0), 1e-12);
  EXPECT_NEAR(fz, -2 * 6, 1e-12);
  // corner of the loaded face carries a quarter of one 1 x 1 face
  const Index corner = nearest_node(mesh, Vec3(0, 0, 1));
  const Index below = nearest_node(mesh, Vec3(0, 0, 0.5));
  EXPECT_NEAR(F[3 * corner + 2], -2 * 0.25, 1e-13);
  EXPECT_EQ(F[3 * below + 2], 0.0);
}

TEST(Loads, Errors) {
  const std::array<int, 2> div{2, 2};
  const Mesh mesh = generate_structured_grid(Vec3(0, 0, 0), Vec3(1, 1, 0), div);
  TractionLoad t;
  // right face of element 0 is shared with element 1
  for (int f = 0; f < 4; ++f)
    if (mesh.faces()[mesh.element_face(0, f)].interior()) t.faces.push_back({0, f});
  t.traction = Vec3(1, 0, 0);
  EXPECT_THROW(assemble_loads(mesh, {t}, Vec3::Zero(), {}), Error);
  EXPECT_THROW(assemble_loads(mesh, {}, Vec3::Zero(), {{99, 1.0}}), Error);
}

TEST(Dirichlet, ConstraintsAndRowReplacement) {
  Constraints c;
  add_constraint(c, 3, 0.5);
  EXPECT_NO_THROW(add_constraint(c, 3, 0.5));
  EXPECT_THROW(add_constraint(c, 3, 0.25), Error);

  Mat A(3, 3);
  A << 4, -1, 0, -1, 4, -1, 0, -1, 4;
  const CsrMatrix K = csr_from_dense(A);
  Vec F(3);
  F << 1, 2, 3;
  Constraints cc;
  add_constraint(cc, 1, 0.5);
  LinearSystem s = apply_dirichlet(K, F, cc);
  const Mat S = dense(s.K);
  Mat expect(3, 3);
  expect << 4, 0, 0, 0, 1, 0, 0, 0, 4;
  EXPECT_EQ((S - expect).norm(), 0.0);
  EXPECT_DOUBLE_EQ(s.F[0], 1 + 0.5);
  EXPECT_DOUBLE_EQ(s.F[1], 0.5);
  EXPECT_DOUBLE_EQ(s.F[2], 3 + 0.5);
  // the original matrix is untouched
  EXPECT_EQ((dense(K) - A).norm(), 0.0);
}
