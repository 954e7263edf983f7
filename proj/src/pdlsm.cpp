#include "pdfem/pdlsm.hpp"

#include <Eigen/LU>

namespace pdfem {

Vec monomials(const Vec3& x, int dim) {
  Vec m(num_monomials(dim));
  if (dim == 2) {
    m << x[0], x[1], x[0] * x[0], x[1] * x[1], x[0] * x[1];
  } else {
    m << x[0], x[1], x[2], x[0] * x[0], x[1] * x[1], x[2] * x[2], x[0] * x[1], x[1] * x[2], x[0] * x[2];
  }
  return m;
}

Vec half_monomials(const Vec3& x, int dim) {
  Vec m = monomials(x, dim);
  m.segment(dim, dim) *= 0.5;
  return m;
}

ShapeTensor assemble_shape_tensor(const Family& f, int dim, double scale, ShapeTensorBonds bonds) {
  const int nm = num_monomials(dim);
  ShapeTensor st;
  st.scale = scale;
  st.A = Mat::Zero(nm, nm);
  for (size_t k = 1; k < f.size(); ++k) {
    if (bonds == ShapeTensorBonds::Intact && !f.intact[k]) continue;
    const Vec3 x = f.xi[k] / scale;
    st.A.noalias() += (f.weight[k] * f.volume[k]) * monomials(x, dim) * half_monomials(x, dim).transpose();
  }
  return st;
}

BondCoefficients compute_bond_coefficients(const ShapeTensor& st, const Family& f, int dim) {
  const int nm = num_monomials(dim);
  const int nd = num_second(dim);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(st.A);
  const double rc = lu.rcond();
  if (!(rc >= 1e-14)) throw SingularShapeTensor(f.owner, "reciprocal condition number " + std::to_string(rc));

  BondCoefficients c;
  c.dim = dim;
  const Eigen::Index n = static_cast<Eigen::Index>(f.size());
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nm, n);
  for (Eigen::Index k = 1; k < n; ++k)
    if (f.intact[k]) rhs.col(k) = monomials(f.xi[k] / st.scale, dim);
  Eigen::MatrixXd sol = lu.solve(rhs);
  const double s = st.scale;
  c.g = sol.topRows(dim).transpose() / s;
  c.d = sol.bottomRows(nd).transpose() / (s * s);
  return c;
}

BondCoefficients compute_bond_coefficients(const Family& f, int dim, ShapeTensorBonds bonds) {
  return compute_bond_coefficients(assemble_shape_tensor(f, dim, f.delta, bonds), f, dim);
}

Mat strain_operator(const Family& f, const BondCoefficients& c) {
  const int dim = c.dim;
  const Eigen::Index n = static_cast<Eigen::Index>(f.size());
  Mat C = Mat::Zero(voigt_size(dim), dim * n);
  for (Eigen::Index k = 1; k < n; ++k) {
    if (!f.intact[k]) continue;
    const double wv = f.weight[k] * f.volume[k];
    const double c1 = wv * c.g(k, 0), c2 = wv * c.g(k, 1);
    const Eigen::Index j = dim * k;
    if (dim == 2) {
      C(0, j) = c1;
      C(1, j + 1) = c2;
      C(2, j) = c2;
      C(2, j + 1) = c1;
    } else {
      const double c3 = wv * c.g(k, 2);
      C(0, j) = c1;
      C(1, j + 1) = c2;
      C(2, j + 2) = c3;
      C(3, j) = c2;
      C(3, j + 1) = c1;
      C(4, j + 1) = c3;
      C(4, j + 2) = c2;
      C(5, j) = c3;
      C(5, j + 2) = c1;
    }
  }
  for (Eigen::Index k = 1; k < n; ++k) C.leftCols(dim) -= C.middleCols(dim * k, dim);
  return C;
}

Mat g_matrix(const Eigen::Ref<const Eigen::VectorXd>& d, const Material& m) {
  const double mu = m.shear_modulus();
  switch (m.mode) {
    case AnalysisMode::PlaneStress:
    case AnalysisMode::PlaneStrain: {
      if (d.size() != 3) throw Error("g_matrix: 2-D mode needs three d coefficients");
      const double a = m.mode == AnalysisMode::PlaneStress ? m.E / (2.0 * (1.0 - m.nu)) : m.lame_lambda() + mu;
      Mat G(2, 2);
      G(0, 0) = a * d[0] + mu * (d[0] + d[1]);
      G(1, 1) = a * d[1] + mu * (d[0] + d[1]);
      G(0, 1) = G(1, 0) = a * d[2];
      return G;
    }
    case AnalysisMode::ThreeD: {
      if (d.size() != 6) throw Error("g_matrix: 3-D mode needs six d coefficients");
      const double a = m.lame_lambda() + mu;
      const double tr = d[0] + d[1] + d[2];
      Mat G(3, 3);
      for (int k = 0; k < 3; ++k) G(k, k) = a * d[k] + mu * tr;
      G(0, 1) = G(1, 0) = a * d[3];
      G(1, 2) = G(2, 1) = a * d[4];
      G(0, 2) = G(2, 0) = a * d[5];
      return G;
    }
  }
  throw Error("unknown analysis mode");
}

Mat internal_force_operator(const Family& f, const BondCoefficients& c, const Material& m) {
  const int dim = c.dim;
  const Eigen::Index n = static_cast<Eigen::Index>(f.size());
  Mat H = Mat::Zero(dim, dim * n);
  for (Eigen::Index k = 1; k < n; ++k) {
    if (!f.intact[k]) continue;
    const Mat G = g_matrix(c.d.row(k).transpose(), m);
    H.middleCols(dim * k, dim) = (f.weight[k] * f.volume[k]) * G;
    H.leftCols(dim) -= H.middleCols(dim * k, dim);
  }
  return H;
}

Mat displacement_gradient(const Family& f, const BondCoefficients& c, const Vec& u_f) {
  const int dim = c.dim;
  Mat grad = Mat::Zero(dim, dim);
  for (size_t k = 1; k < f.size(); ++k) {
    if (!f.intact[k]) continue;
    const double wv = f.weight[k] * f.volume[k];
    for (int a = 0; a < dim; ++a) {
      const double du = u_f[dim * k + a] - u_f[a];
      for (int b = 0; b < dim; ++b) grad(a, b) += wv * du * c.g(k, b);
    }
  }
  return grad;
}

Vec stress_at_pd_node(const Mat& C, const Mat& D, const Vec& u_f) { return D * (C * u_f); }

Vec gather_family(const Family& f, const Vec& u, int dim) {
  Vec out(dim * f.size());
  for (size_t k = 0; k < f.size(); ++k)
    for (int a = 0; a < dim; ++a) out[dim * k + a] = u[dim * f.members[k] + a];
  return out;
}

}  // namespace pdfem
