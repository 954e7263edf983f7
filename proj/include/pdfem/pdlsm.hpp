#pragma once

#include "pdfem/family.hpp"
#include "pdfem/types.hpp"

namespace pdfem {

/// Number of monomials in the quadratic fit: 5 in 2-D, 9 in 3-D.
inline int num_monomials(int dim) { return dim == 2 ? 5 : 9; }
/// Number of second-derivative coefficients: 3 in 2-D, 6 in 3-D.
inline int num_second(int dim) { return dim == 2 ? 3 : 6; }

/// Monomial vector xi_hat. 2-D: [x1 x2 x1^2 x2^2 x1x2];
/// 3-D: [x1 x2 x3 x1^2 x2^2 x3^2 x1x2 x2x3 x1x3].
Vec monomials(const Vec3& xi, int dim);
/// Same ordering with the squares halved.
Vec half_monomials(const Vec3& xi, int dim);

/// Which family members enter the shape tensor. Broken bonds never carry coefficients.
/// All: every non-self member, so the fit near a crack is not exact for linear fields and
/// the broken bonds soften the node. Intact: only unbroken bonds, an exact fit on the
/// remaining family.
enum class ShapeTensorBonds { All, Intact };

struct ShapeTensor {
  Mat A;
  double scale = 1.0;  // relative positions were divided by this length
};

/// A = sum over non-self members of w V xi_hat p^T, with positions divided by
/// `scale` (1 keeps physical units).
ShapeTensor assemble_shape_tensor(const Family& f, int dim, double scale = 1.0,
                                  ShapeTensorBonds bonds = ShapeTensorBonds::All);

/// Per-member coefficients. Row k holds g (dim entries) and d (3 or 6 entries)
/// for member k. Self and broken bonds carry zeros.
/// d ordering: 2-D (11, 22, 12); 3-D (11, 22, 33, 12, 23, 13).
struct BondCoefficients {
  int dim = 2;
  Mat g;
  Mat d;
};

/// Factors A and evaluates [g; d] = A^-1 xi_hat for every intact bond.
/// Throws SingularShapeTensor if the reciprocal condition number is below 1e-14.
BondCoefficients compute_bond_coefficients(const ShapeTensor& A, const Family& f, int dim);
/// Convenience: nondimensional assembly with scale = horizon, then solve.
BondCoefficients compute_bond_coefficients(const Family& f, int dim,
                                           ShapeTensorBonds bonds = ShapeTensorBonds::All);

/// Voigt strain operator, voigt x (dim * members).
Mat strain_operator(const Family& f, const BondCoefficients& c);

/// Per-bond G matrix (dim x dim, symmetric) for the given d coefficients.
Mat g_matrix(const Eigen::Ref<const Eigen::VectorXd>& d, const Material& m);

/// Internal force operator H, dim x (dim * members); H u_f is the divergence of stress.
Mat internal_force_operator(const Family& f, const BondCoefficients& c, const Material& m);

/// Displacement gradient du_a/dx_b at the owner from family displacements (dim * members).
Mat displacement_gradient(const Family& f, const BondCoefficients& c, const Vec& u_f);

/// sigma = D C u_f.
Vec stress_at_pd_node(const Mat& C, const Mat& D, const Vec& u_f);

/// Gathers the family displacement vector from a global field.
Vec gather_family(const Family& f, const Vec& u, int dim);

}  // namespace pdfem
