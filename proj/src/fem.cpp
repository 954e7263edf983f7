#include "pdfem/fem.hpp"

#include <cmath>
#include <string>

namespace pdfem {

void Material::validate(bool need_toughness) const {
  if (!(E > 0.0) || !std::isfinite(E)) throw Error("material: E must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw Error("material: nu must lie in (-1, 0.5)");
  if (need_toughness && !(K_Ic > 0.0)) throw Error("material: K_Ic must be positive");
}

namespace {

constexpr double kQ4Sign[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
constexpr double kH8Sign[8][3] = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                                  {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};

GaussRule make_rule(ElementKind kind, int n) {
  std::vector<double> p, w;
  switch (n) {
    case 1: p = {0.0}; w = {2.0}; break;
    case 2: p = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)}; w = {1.0, 1.0}; break;
    default: {
      // Newton iteration on the Legendre polynomial roots
      p.resize(n);
      w.resize(n);
      for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
          double p0 = 1.0, p1 = x;
          for (int k = 2; k <= n; ++k) {
            double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
          }
          dp = n * (x * p1 - p0) / (x * x - 1.0);
          double dx = p1 / dp;
          x -= dx;
          if (std::abs(dx) < 1e-16) break;
        }
        p[i] = x;
        w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
      }
    }
  }
  GaussRule r;
  if (kind == ElementKind::Q4) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        r.points.emplace_back(p[i], p[j], 0.0);
        r.weights.push_back(w[i] * w[j]);
      }
  } else {
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          r.points.emplace_back(p[i], p[j], p[k]);
          r.weights.push_back(w[i] * w[j] * w[k]);
        }
  }
  return r;
}

}  // namespace

Vec3 local_node_coords(ElementKind kind, int k) {
  if (kind == ElementKind::Q4) return {kQ4Sign[k][0], kQ4Sign[k][1], 0.0};
  return {kH8Sign[k][0], kH8Sign[k][1], kH8Sign[k][2]};
}

ShapeValues shape_functions(ElementKind kind, const Vec3& s) {
  ShapeValues v;
  if (kind == ElementKind::Q4) {
    v.N.resize(4);
    v.dN.resize(4, 2);
    for (int i = 0; i < 4; ++i) {
      const double a = kQ4Sign[i][0], b = kQ4Sign[i][1];
      v.N[i] = 0.25 * (1 + a * s[0]) * (1 + b * s[1]);
      v.dN(i, 0) = 0.25 * a * (1 + b * s[1]);
      v.dN(i, 1) = 0.25 * b * (1 + a * s[0]);
    }
  } else if (kind == ElementKind::H8) {
    v.N.resize(8);
    v.dN.resize(8, 3);
    for (int i = 0; i < 8; ++i) {
      const double a = kH8Sign[i][0], b = kH8Sign[i][1], c = kH8Sign[i][2];
      const double fa = 1 + a * s[0], fb = 1 + b * s[1], fc = 1 + c * s[2];
      v.N[i] = 0.125 * fa * fb * fc;
      v.dN(i, 0) = 0.125 * a * fb * fc;
      v.dN(i, 1) = 0.125 * b * fa * fc;
      v.dN(i, 2) = 0.125 * c * fa * fb;
    }
  } else {
    throw Error("unknown element kind");
  }
  return v;
}

const GaussRule& gauss_rule(ElementKind kind) {
  static const GaussRule q4 = make_rule(ElementKind::Q4, 2);
  static const GaussRule h8 = make_rule(ElementKind::H8, 2);
  return kind == ElementKind::Q4 ? q4 : h8;
}

GaussRule gauss_rule(ElementKind kind, int n) {
  if (n < 1) throw Error("gauss rule needs at least one point");
  return make_rule(kind, n);
}

BMatrix b_matrix(ElementKind kind, const Mat& coords, const Vec3& local) {
  const int dim = kind == ElementKind::Q4 ? 2 : 3;
  const int nn = nodes_per_element(kind);
  ShapeValues sv = shape_functions(kind, local);
  Mat J = coords.transpose() * sv.dN;  // dim x dim, J(a,b) = dx_a/ds_b
  BMatrix out;
  out.detJ = J.determinant();
  if (!(out.detJ > 0.0)) throw GeometryError("inverted element: non-positive Jacobian");
  out.N = sv.N;
  out.dNdx = sv.dN * J.inverse();
  out.B = Mat::Zero(voigt_size(dim), dim * nn);
  for (int i = 0; i < nn; ++i) {
    const double nx = out.dNdx(i, 0), ny = out.dNdx(i, 1);
    if (dim == 2) {
      out.B(0, 2 * i) = nx;
      out.B(1, 2 * i + 1) = ny;
      out.B(2, 2 * i) = ny;
      out.B(2, 2 * i + 1) = nx;
    } else {
      const double nz = out.dNdx(i, 2);
      const int c = 3 * i;
      out.B(0, c) = nx;
      out.B(1, c + 1) = ny;
      out.B(2, c + 2) = nz;
      out.B(3, c) = ny;
      out.B(3, c + 1) = nx;
      out.B(4, c + 1) = nz;
      out.B(4, c + 2) = ny;
      out.B(5, c) = nz;
      out.B(5, c + 2) = nx;
    }
  }
  return out;
}

Mat elasticity_matrix(const Material& m) {
  m.validate();
  const double E = m.E, nu = m.nu;
  switch (m.mode) {
    case AnalysisMode::PlaneStress: {
      Mat D = Mat::Zero(3, 3);
      const double f = E / (1 - nu * nu);
      D(0, 0) = D(1, 1) = f;
      D(0, 1) = D(1, 0) = f * nu;
      D(2, 2) = f * (1 - nu) / 2;
      return D;
    }
    case AnalysisMode::PlaneStrain: {
      Mat D = Mat::Zero(3, 3);
      const double f = E / ((1 + nu) * (1 - 2 * nu));
      D(0, 0) = D(1, 1) = f * (1 - nu);
      D(0, 1) = D(1, 0) = f * nu;
      D(2, 2) = f * (1 - 2 * nu) / 2;
      return D;
    }
    case AnalysisMode::ThreeD: {
      Mat D = Mat::Zero(6, 6);
      const double f = E / ((1 + nu) * (1 - 2 * nu));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) D(i, j) = f * (i == j ? 1 - nu : nu);
      for (int i = 3; i < 6; ++i) D(i, i) = f * (1 - 2 * nu) / 2;
      return D;
    }
  }
  throw Error("unknown analysis mode");
}

Mat standard_element_stiffness(ElementKind kind, const Mat& coords, const Mat& D, double thickness,
                               const GaussRule& rule) {
  const int dim = kind == ElementKind::Q4 ? 2 : 3;
  const int ndof = dim * nodes_per_element(kind);
  Mat K = Mat::Zero(ndof, ndof);
  for (size_t q = 0; q < rule.points.size(); ++q) {
    BMatrix b = b_matrix(kind, coords, rule.points[q]);
    K.noalias() += (rule.weights[q] * b.detJ) * (b.B.transpose() * D * b.B);
  }
  if (dim == 2) K *= thickness;
  return K;
}

Mat standard_element_stiffness(ElementKind kind, const Mat& coords, const Mat& D, double thickness) {
  return standard_element_stiffness(kind, coords, D, thickness, gauss_rule(kind));
}

std::vector<GaussStress> recover_stress_standard(ElementKind kind, const Mat& coords, const Vec& u_e,
                                                 const Mat& D) {
  const int dim = kind == ElementKind::Q4 ? 2 : 3;
  const int nn = nodes_per_element(kind);
  const GaussRule& rule = gauss_rule(kind);
  std::vector<GaussStress> out;
  out.reserve(rule.points.size());
  for (const Vec3& p : rule.points) {
    BMatrix b = b_matrix(kind, coords, p);
    GaussStress g;
    g.x.setZero();
    g.x.head(dim) = coords.transpose() * b.N;
    g.strain = b.B * u_e;
    g.stress = D * g.strain;
    g.grad = Mat::Zero(dim, dim);
    for (int i = 0; i < nn; ++i)
      for (int a = 0; a < dim; ++a)
        for (int c = 0; c < dim; ++c) g.grad(a, c) += u_e[dim * i + a] * b.dNdx(i, c);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace pdfem
