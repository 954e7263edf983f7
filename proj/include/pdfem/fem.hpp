#pragma once

#include "pdfem/mesh.hpp"
#include "pdfem/types.hpp"

#include <vector>

namespace pdfem {

struct ShapeValues {
  Vec N;   // nodes
  Mat dN;  // nodes x dim, derivatives w.r.t. local coordinates
};

/// Bilinear (Q4) or trilinear (H8) shape functions at a local point in [-1,1]^dim.
ShapeValues shape_functions(ElementKind kind, const Vec3& local);

/// Local coordinates of element node k.
Vec3 local_node_coords(ElementKind kind, int k);

struct GaussRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
};

/// 2-point-per-axis Gauss rule (2x2 or 2x2x2).
const GaussRule& gauss_rule(ElementKind kind);
/// n-point-per-axis Gauss-Legendre rule.
GaussRule gauss_rule(ElementKind kind, int n);

struct BMatrix {
  Mat B;  // voigt x (dim * nodes)
  double detJ = 0.0;
  Vec N;
  Mat dNdx;  // nodes x dim
};

/// Strain-displacement matrix at a local point. Throws GeometryError if detJ <= 0.
BMatrix b_matrix(ElementKind kind, const Mat& coords, const Vec3& local);

Mat elasticity_matrix(const Material& m);

/// K_e = int B^T D B dV with full Gauss integration; 2-D scaled by thickness.
Mat standard_element_stiffness(ElementKind kind, const Mat& coords, const Mat& D, double thickness,
                               const GaussRule& rule);
Mat standard_element_stiffness(ElementKind kind, const Mat& coords, const Mat& D, double thickness);

struct GaussStress {
  Vec3 x;
  Vec strain;  // voigt
  Vec stress;  // voigt
  Mat grad;    // dim x dim displacement gradient du_a/dx_b
};

/// Strain, stress and displacement gradient at the Gauss points of one element.
std::vector<GaussStress> recover_stress_standard(ElementKind kind, const Mat& coords, const Vec& u_e,
                                                 const Mat& D);

}  // namespace pdfem
