#pragma once

#include "pdfem/assembly.hpp"
#include "pdfem/sparse.hpp"

#include <string>
#include <vector>

namespace pdfem {

enum class SolverMethod { Auto, Direct, Iterative };

struct SolveOptions {
  SolverMethod method = SolverMethod::Auto;
  double tol = 1e-10;  // relative residual target of the iterative solver
  int max_iterations = 20000;
};

struct SolveStats {
  std::string method;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves K u = F. Throws SolverError if the residual check fails:
/// |K u - F| <= 1e-8 |F|, or 1e-8 |K| |u| when F vanishes.
Vec solve_static(const LinearSystem& sys, const SolveOptions& opt = {}, SolveStats* stats = nullptr);

/// (K u - F) on the given DOFs, with K the unconstrained stiffness.
std::vector<double> reaction_forces(const CsrMatrix& K, const Vec& u, const Vec& F_ext,
                                    const std::vector<Index>& dofs);

/// dR = min((K_Ic / K_eq - 1) R_n, dR_max).
double load_increment(double K_eq, double K_Ic, double R_n, double dR_max);

}  // namespace pdfem
