#pragma once

#include "pdfem/types.hpp"

#include <Eigen/Sparse>

#include <span>
#include <vector>

namespace pdfem {

using EigenCsr = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// Compressed sparse row matrix with sorted, unique column indices per row.
struct CsrMatrix {
  Index rows = 0, cols = 0;
  std::vector<Index> row_ptr{0};
  std::vector<Index> col;
  std::vector<double> val;

  size_t nnz() const { return col.size(); }
  size_t memory_bytes() const {
    return row_ptr.size() * sizeof(Index) + col.size() * sizeof(Index) + val.size() * sizeof(double);
  }
  /// Position of (r, c) in col/val or -1.
  Index find(Index r, Index c) const;
  double at(Index r, Index c) const;

  Vec multiply(const Vec& x) const;
  /// Max absolute row sum.
  double norm_inf() const;
  double norm_frobenius() const;
  /// Drops stored entries that are exactly zero.
  void drop_zeros();
  EigenCsr to_eigen() const;
};

/// Pattern from per-block-row sorted unique block columns, each block bs x bs.
CsrMatrix block_pattern(std::span<const std::vector<Index>> block_cols, int bs, Index num_block_cols);

CsrMatrix csr_from_dense(const Mat& A, double drop = 0.0);

}  // namespace pdfem
