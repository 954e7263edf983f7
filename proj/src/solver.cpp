#include "pdfem/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>
#include <Eigen/UmfPackSupport>

#include <algorithm>
#include <cmath>

namespace pdfem {

namespace {

using ColMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

double reference_norm(const LinearSystem& sys, const Vec& u) {
  const double fnorm = sys.F.norm();
  return fnorm > 0.0 ? fnorm : sys.K.norm_frobenius() * u.norm();
}

bool accurate(const EigenCsr& A, const LinearSystem& sys, const Vec& u) {
  const double res = (A * u - sys.F).norm();
  const double ref = reference_norm(sys, u);
  return res <= 1e-8 * ref || (ref == 0.0 && res == 0.0);
}

bool umfpack_solve(const ColMat& Ac, const EigenCsr& A, const Vec& F, Vec& u) {
  Eigen::UmfPackLU<ColMat> lu;
  lu.compute(Ac);
  if (lu.info() != Eigen::Success) return false;
  u = lu.solve(F);
  if (lu.info() != Eigen::Success) return false;
  // one step of iterative refinement
  Vec r = F - A * u;
  u += lu.solve(r);
  return u.allFinite();
}

bool sparselu_solve(const ColMat& Ac, const EigenCsr& A, const Vec& F, Vec& u) {
  Eigen::SparseLU<ColMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(Ac);
  if (lu.info() != Eigen::Success) return false;
  u = lu.solve(F);
  if (lu.info() != Eigen::Success) return false;
  Vec r = F - A * u;
  u += lu.solve(r);
  return u.allFinite();
}

bool iterative_solve(const EigenCsr& A, const Vec& F, const SolveOptions& opt, Vec& u, int& iters) {
  Eigen::BiCGSTAB<EigenCsr, Eigen::IncompleteLUT<double>> solver;
  solver.preconditioner().setDroptol(1e-4);
  solver.preconditioner().setFillfactor(20);
  solver.setTolerance(opt.tol);
  solver.setMaxIterations(opt.max_iterations);
  solver.compute(A);
  if (solver.info() != Eigen::Success) return false;
  u = solver.solve(F);
  iters = static_cast<int>(solver.iterations());
  return solver.info() == Eigen::Success && u.allFinite();
}

}  // namespace

Vec solve_static(const LinearSystem& sys, const SolveOptions& opt, SolveStats* stats) {
  const EigenCsr A = sys.K.to_eigen();
  Vec u;
  SolveStats st;
  bool ok = false;
  if (opt.method != SolverMethod::Iterative) {
    // Some BLAS builds hand UMFPACK wrong dense kernels; a failed residual check falls
    // back to the BLAS-free SparseLU before giving up on direct factorization.
    ColMat Ac = A;
    ok = umfpack_solve(Ac, A, sys.F, u) && accurate(A, sys, u);
    st.method = "umfpack";
    if (!ok) {
      ok = sparselu_solve(Ac, A, sys.F, u) && accurate(A, sys, u);
      st.method = "sparselu";
    }
    if (!ok && opt.method == SolverMethod::Direct) throw SolverError("sparse LU factorization failed (singular system?)");
  }
  if (!ok) {
    ok = iterative_solve(A, sys.F, opt, u, st.iterations);
    st.method = "bicgstab";
    if (!ok) throw SolverError("iterative solver did not converge");
  }
  const double res = (A * u - sys.F).norm();
  const double ref = reference_norm(sys, u);
  st.relative_residual = ref > 0.0 ? res / ref : res;
  if (!(res <= 1e-8 * ref) && !(ref == 0.0 && res == 0.0))
    throw SolverError("linear solve residual check failed: relative residual " + std::to_string(st.relative_residual));
  if (stats) *stats = st;
  return u;
}

std::vector<double> reaction_forces(const CsrMatrix& K, const Vec& u, const Vec& F_ext, const std::vector<Index>& dofs) {
  std::vector<double> r;
  r.reserve(dofs.size());
  for (Index d : dofs) {
    double s = -F_ext[d];
    for (Index p = K.row_ptr[d]; p < K.row_ptr[d + 1]; ++p) s += K.val[p] * u[K.col[p]];
    r.push_back(s);
  }
  return r;
}

double load_increment(double K_eq, double K_Ic, double R_n, double dR_max) {
  if (!(K_eq > 0.0)) throw Error("load increment needs a positive equivalent SIF");
  return std::min((K_Ic / K_eq - 1.0) * R_n, dR_max);
}

}  // namespace pdfem
