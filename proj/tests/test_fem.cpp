#include "pdfem/fem.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace pdfem;

namespace {

Material mat(AnalysisMode mode, double E, double nu) {
  Material m;
  m.E = E;
  m.nu = nu;
  m.mode = mode;
  return m;
}

Mat quad(std::initializer_list<std::array<double, 2>> pts) {
  Mat c(pts.size(), 2);
  int i = 0;
  for (auto& p : pts) c.row(i++) << p[0], p[1];
  return c;
}

Mat unit_square() { return quad({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
Mat distorted_quad() { return quad({{0.1, -0.2}, {2.0, 0.1}, {1.7, 1.4}, {-0.3, 0.9}}); }

Mat distorted_hex() {
  Mat c(8, 3);
  c << 0, 0, 0, 1.1, 0.1, 0, 1.0, 1.2, 0.1, -0.1, 0.9, 0, 0.1, 0, 1.0, 1.2, -0.1, 1.1, 1.0, 1.0, 1.3, 0, 1.1, 0.9;
  return c;
}

// Tensor-product Simpson rule with hand-written bilinear/trilinear derivatives.
// Exact for parallelograms and parallelepipeds, where B^T D B is quadratic per axis.
Mat simpson_stiffness(const Mat& coords, const Mat& D) {
  const int dim = static_cast<int>(coords.cols()), nn = static_cast<int>(coords.rows());
  const double s1[3] = {-1, 0, 1}, w1[3] = {1.0 / 3, 4.0 / 3, 1.0 / 3};
  static const int sq[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  Mat K = Mat::Zero(dim * nn, dim * nn);
  const int nz = dim == 3 ? 3 : 1;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < nz; ++c) {
        const double r = s1[a], s = s1[b], t = dim == 3 ? s1[c] : 0.0;
        Mat dN(nn, dim);
        for (int i = 0; i < nn; ++i) {
          const double ri = sq[i % 4][0], si = sq[i % 4][1];
          if (dim == 2) {
            dN(i, 0) = ri * (1 + si * s) / 4;
            dN(i, 1) = si * (1 + ri * r) / 4;
          } else {
            const double ti = i < 4 ? -1 : 1;
            dN(i, 0) = ri * (1 + si * s) * (1 + ti * t) / 8;
            dN(i, 1) = si * (1 + ri * r) * (1 + ti * t) / 8;
            dN(i, 2) = ti * (1 + ri * r) * (1 + si * s) / 8;
          }
        }
        Mat J = coords.transpose() * dN;
        Mat dx = dN * J.inverse();
        Mat B = Mat::Zero(dim == 2 ? 3 : 6, dim * nn);
        for (int i = 0; i < nn; ++i) {
          if (dim == 2) {
            B(0, 2 * i) = B(2, 2 * i + 1) = dx(i, 0);
            B(1, 2 * i + 1) = B(2, 2 * i) = dx(i, 1);
          } else {
            B(0, 3 * i) = B(3, 3 * i + 1) = B(5, 3 * i + 2) = dx(i, 0);
            B(1, 3 * i + 1) = B(3, 3 * i) = B(4, 3 * i + 2) = dx(i, 1);
            B(2, 3 * i + 2) = B(4, 3 * i + 1) = B(5, 3 * i) = dx(i, 2);
          }
        }
        const double w = w1[a] * w1[b] * (dim == 3 ? w1[c] : 1.0);
        K += w * J.determinant() * B.transpose() * D * B;
      }
  return K;
}

Vec nodal_field(const Mat& coords, const std::function<Vec(const Eigen::VectorXd&)>& u) {
  const int dim = static_cast<int>(coords.cols());
  Vec out(coords.size());
  for (Eigen::Index i = 0; i < coords.rows(); ++i) out.segment(dim * i, dim) = u(coords.row(i).transpose());
  return out;
}

}  // namespace

TEST(ShapeFunctions, Examples) {
  ShapeValues c = shape_functions(ElementKind::Q4, Vec3::Zero());
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(c.N[i], 0.25);
  for (int k = 0; k < 4; ++k) {
    ShapeValues v = shape_functions(ElementKind::Q4, local_node_coords(ElementKind::Q4, k));
    for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(v.N[i], i == k ? 1.0 : 0.0);
  }
  ShapeValues h = shape_functions(ElementKind::H8, Vec3::Zero());
  for (int i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ(h.N[i], 0.125);
  for (int k = 0; k < 8; ++k) {
    ShapeValues v = shape_functions(ElementKind::H8, local_node_coords(ElementKind::H8, k));
    for (int i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ(v.N[i], i == k ? 1.0 : 0.0);
  }
}

TEST(ShapeFunctions, PartitionOfUnity) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (ElementKind kind : {ElementKind::Q4, ElementKind::H8}) {
    for (int t = 0; t < 50; ++t) {
      Vec3 p(u(rng), u(rng), kind == ElementKind::H8 ? u(rng) : 0.0);
      ShapeValues v = shape_functions(kind, p);
      EXPECT_NEAR(v.N.sum(), 1.0, 1e-15);
      EXPECT_LT(v.dN.colwise().sum().cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(GaussRule, WeightsAndExactness) {
  for (int n = 1; n <= 5; ++n) {
    GaussRule q = gauss_rule(ElementKind::Q4, n), h = gauss_rule(ElementKind::H8, n);
    double wq = 0, wh = 0, mono = 0;
    for (double w : q.weights) wq += w;
    for (double w : h.weights) wh += w;
    // x^(2n-2) y^2 integrates to 2/(2n-1) * 2/3 over the square
    for (size_t k = 0; k < q.points.size(); ++k)
      mono += q.weights[k] * std::pow(q.points[k][0], 2 * n - 2) * (n > 1 ? std::pow(q.points[k][1], 2) : 1.0);
    EXPECT_NEAR(wq, 4.0, 1e-13);
    EXPECT_NEAR(wh, 8.0, 1e-13);
    EXPECT_NEAR(mono, 2.0 / (2 * n - 1) * (n > 1 ? 2.0 / 3.0 : 2.0), 1e-14);
  }
  EXPECT_THROW(gauss_rule(ElementKind::Q4, 0), Error);
  EXPECT_EQ(gauss_rule(ElementKind::Q4).points.size(), 4u);
  EXPECT_EQ(gauss_rule(ElementKind::H8).points.size(), 8u);
}

TEST(BMatrix, UnitSquareCenter) {
  BMatrix b = b_matrix(ElementKind::Q4, unit_square(), Vec3::Zero());
  EXPECT_DOUBLE_EQ(b.dNdx(0, 0), -0.5);
  EXPECT_DOUBLE_EQ(b.dNdx(0, 1), -0.5);
  EXPECT_DOUBLE_EQ(b.detJ, 0.25);
  EXPECT_EQ(b.B.rows(), 3);
  EXPECT_EQ(b.B.cols(), 8);
}

TEST(BMatrix, CompletenessOnDistortedElements) {
  for (ElementKind kind : {ElementKind::Q4, ElementKind::H8}) {
    const Mat c = kind == ElementKind::Q4 ? distorted_quad() : distorted_hex();
    const int dim = static_cast<int>(c.cols());
    const Vec trans = nodal_field(c, [&](const Eigen::VectorXd&) { return Vec::Constant(dim, 0.7); });
    const Vec stretch = nodal_field(c, [&](const Eigen::VectorXd& x) {
      Vec u = Vec::Zero(dim);
      u[0] = x[0];
      return u;
    });
    for (const Vec3& p : gauss_rule(kind).points) {
      BMatrix b = b_matrix(kind, c, p);
      EXPECT_GT(b.detJ, 0.0);
      EXPECT_LT((b.B * trans).cwiseAbs().maxCoeff(), 1e-14);
      Vec e = b.B * stretch;
      EXPECT_NEAR(e[0], 1.0, 1e-13);
      EXPECT_LT(e.tail(e.size() - 1).cwiseAbs().maxCoeff(), 1e-13);
    }
  }
}

TEST(BMatrix, InvertedElementThrows) {
  Mat c = quad({{0, 0}, {0, 1}, {1, 1}, {1, 0}});  // clockwise
  EXPECT_THROW(b_matrix(ElementKind::Q4, c, Vec3::Zero()), GeometryError);
  EXPECT_THROW(standard_element_stiffness(ElementKind::Q4, c, Mat::Identity(3, 3), 1.0), GeometryError);
}

TEST(Elasticity, Examples) {
  Mat D = elasticity_matrix(mat(AnalysisMode::PlaneStress, 1.0, 0.0));
  Mat ps(3, 3);
  ps << 1, 0, 0, 0, 1, 0, 0, 0, 0.5;
  EXPECT_LT((D - ps).cwiseAbs().maxCoeff(), 1e-15);
  D = elasticity_matrix(mat(AnalysisMode::PlaneStrain, 2.5, 0.25));
  Mat pe(3, 3);
  pe << 3, 1, 0, 1, 3, 0, 0, 0, 1;
  EXPECT_LT((D - pe).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(elasticity_matrix(mat(AnalysisMode::ThreeD, 1.0, 0.5)), Error);
  EXPECT_THROW(elasticity_matrix(mat(AnalysisMode::PlaneStrain, 1.0, 0.5)), Error);
  EXPECT_THROW(elasticity_matrix(mat(AnalysisMode::PlaneStress, -1.0, 0.2)), Error);
}

TEST(Elasticity, ThreeDimensionalEntriesAndDefiniteness) {
  const Material m = mat(AnalysisMode::ThreeD, 10.0, 0.3);
  Mat D = elasticity_matrix(m);
  const double lam = m.lame_lambda(), mu = m.shear_modulus();
  EXPECT_NEAR(D(0, 0), lam + 2 * mu, 1e-12);
  EXPECT_NEAR(D(0, 1), lam, 1e-12);
  EXPECT_NEAR(D(3, 3), mu, 1e-12);
  for (AnalysisMode mode : {AnalysisMode::PlaneStress, AnalysisMode::PlaneStrain, AnalysisMode::ThreeD})
    for (double nu : {-0.9, 0.0, 0.3, 0.49}) {
      Mat Dm = elasticity_matrix(mat(mode, 3.0, nu));
      EXPECT_LT((Dm - Dm.transpose()).norm(), 1e-15);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Dm);
      EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    }
}

TEST(ElementStiffness, UnitSquareCornerEntry) {
  const Mat K = standard_element_stiffness(ElementKind::Q4, unit_square(),
                                           elasticity_matrix(mat(AnalysisMode::PlaneStress, 1.0, 0.0)), 1.0);
  // int (1-y)^2 + 0.5 (1-x)^2 over the unit square
  EXPECT_NEAR(K(0, 0), 0.5, 1e-15);
}

TEST(ElementStiffness, MatchesSimpsonOracle) {
  const Mat D2 = elasticity_matrix(mat(AnalysisMode::PlaneStrain, 3.0, 0.3));
  const Mat para = quad({{0.2, 0.1}, {2.2, 0.6}, {2.7, 1.9}, {0.7, 1.4}});
  Mat K = standard_element_stiffness(ElementKind::Q4, para, D2, 1.0);
  EXPECT_LT((K - simpson_stiffness(para, D2)).cwiseAbs().maxCoeff(), 1e-13 * K.cwiseAbs().maxCoeff());

  const Mat D3 = elasticity_matrix(mat(AnalysisMode::ThreeD, 3.0, 0.3));
  Mat box(8, 3);
  const Vec3 a(1.5, 0.2, 0), b(0.3, 1.1, 0.1), c(0.1, -0.2, 0.9);
  const int corner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  for (int i = 0; i < 8; ++i) box.row(i) = (corner[i][0] * a + corner[i][1] * b + corner[i][2] * c).transpose();
  K = standard_element_stiffness(ElementKind::H8, box, D3, 1.0);
  EXPECT_LT((K - simpson_stiffness(box, D3)).cwiseAbs().maxCoeff(), 1e-13 * K.cwiseAbs().maxCoeff());
}

TEST(ElementStiffness, SymmetryNullSpaceAndThickness) {
  for (ElementKind kind : {ElementKind::Q4, ElementKind::H8}) {
    const bool q = kind == ElementKind::Q4;
    const Mat c = q ? distorted_quad() : distorted_hex();
    const Mat D = elasticity_matrix(mat(q ? AnalysisMode::PlaneStress : AnalysisMode::ThreeD, 5.0, 0.25));
    const Mat K = standard_element_stiffness(kind, c, D, 1.0);
    const double n = K.norm();
    EXPECT_LT((K - K.transpose()).norm(), 1e-12 * n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
    int zeros = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      EXPECT_GT(es.eigenvalues()[i], -1e-12 * n);
      if (es.eigenvalues()[i] < 1e-10 * n) ++zeros;
    }
    EXPECT_EQ(zeros, q ? 3 : 6);
    const int dim = q ? 2 : 3;
    for (int a = 0; a < dim; ++a) {
      Vec t = Vec::Zero(K.cols());
      for (Eigen::Index i = a; i < t.size(); i += dim) t[i] = 1.0;
      EXPECT_LT((K * t).cwiseAbs().maxCoeff(), 1e-12 * K.cwiseAbs().maxCoeff());
    }
    if (q) EXPECT_LT((standard_element_stiffness(kind, c, D, 0.3) - 0.3 * K).norm(), 1e-14 * n);
  }
}

TEST(ElementStiffness, Objectivity) {
  const double th = 0.83;
  Eigen::Matrix2d R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const Mat c = distorted_quad();
  const Mat D = elasticity_matrix(mat(AnalysisMode::PlaneStrain, 5.0, 0.25));
  const Mat K = standard_element_stiffness(ElementKind::Q4, c, D, 1.0);
  const Mat cr = c * R.transpose();
  const Mat Kr = standard_element_stiffness(ElementKind::Q4, cr, D, 1.0);
  Mat T = Mat::Zero(8, 8);
  for (int i = 0; i < 4; ++i) T.block(2 * i, 2 * i, 2, 2) = R;
  EXPECT_LT((T.transpose() * Kr * T - K).cwiseAbs().maxCoeff(), 1e-10 * K.cwiseAbs().maxCoeff());
}

TEST(StressRecovery, Examples) {
  const Mat c = distorted_quad();
  const Material m = mat(AnalysisMode::PlaneStress, 4.0, 0.25);
  const Mat D = elasticity_matrix(m);
  for (const GaussStress& g : recover_stress_standard(ElementKind::Q4, c, Vec::Zero(8), D))
    EXPECT_EQ(g.stress.norm(), 0.0);

  const Vec stretch = nodal_field(c, [](const Eigen::VectorXd& x) { return Eigen::Vector2d(1e-3 * x[0], 0.0); });
  auto gs = recover_stress_standard(ElementKind::Q4, c, stretch, D);
  ASSERT_EQ(gs.size(), 4u);
  for (const GaussStress& g : gs) EXPECT_LT((g.stress - gs[0].stress).norm(), 1e-15);

  const double gamma = 2e-3;
  const Vec shear =
      nodal_field(c, [&](const Eigen::VectorXd& x) { return Eigen::Vector2d(x[1] * gamma / 2, x[0] * gamma / 2); });
  for (const GaussStress& g : recover_stress_standard(ElementKind::Q4, c, shear, D)) {
    EXPECT_NEAR(g.stress[2], m.shear_modulus() * gamma, 1e-15);
    EXPECT_NEAR(g.stress[0], 0.0, 1e-15);
    EXPECT_NEAR(g.grad(0, 1), gamma / 2, 1e-15);
    // Gauss point lies inside the element's bounding box
    EXPECT_GE(g.x[0], c.col(0).minCoeff());
    EXPECT_LE(g.x[0], c.col(0).maxCoeff());
  }
}
