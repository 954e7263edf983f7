#include "pdfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdfem {

Index CsrMatrix::find(Index r, Index c) const {
  auto b = col.begin() + row_ptr[r], e = col.begin() + row_ptr[r + 1];
  auto it = std::lower_bound(b, e, c);
  return it != e && *it == c ? static_cast<Index>(it - col.begin()) : -1;
}

double CsrMatrix::at(Index r, Index c) const {
  const Index p = find(r, c);
  return p < 0 ? 0.0 : val[p];
}

Vec CsrMatrix::multiply(const Vec& x) const {
  Vec y(rows);
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < rows; ++r) {
    double s = 0.0;
    for (Index p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += val[p] * x[col[p]];
    y[r] = s;
  }
  return y;
}

double CsrMatrix::norm_inf() const {
  double m = 0.0;
  for (Index r = 0; r < rows; ++r) {
    double s = 0.0;
    for (Index p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += std::abs(val[p]);
    m = std::max(m, s);
  }
  return m;
}

double CsrMatrix::norm_frobenius() const {
  double s = 0.0;
  for (double v : val) s += v * v;
  return std::sqrt(s);
}

void CsrMatrix::drop_zeros() {
  Index out = 0;
  Index start = 0;
  for (Index r = 0; r < rows; ++r) {
    const Index end = row_ptr[r + 1];
    for (Index p = start; p < end; ++p)
      if (val[p] != 0.0) {
        col[out] = col[p];
        val[out] = val[p];
        ++out;
      }
    start = end;
    row_ptr[r + 1] = out;
  }
  col.resize(out);
  val.resize(out);
  col.shrink_to_fit();
  val.shrink_to_fit();
}

EigenCsr CsrMatrix::to_eigen() const {
  EigenCsr m(rows, cols);
  m.resizeNonZeros(static_cast<Eigen::Index>(nnz()));
  std::copy(row_ptr.begin(), row_ptr.end(), m.outerIndexPtr());
  std::copy(col.begin(), col.end(), m.innerIndexPtr());
  std::copy(val.begin(), val.end(), m.valuePtr());
  return m;
}

CsrMatrix block_pattern(std::span<const std::vector<Index>> block_cols, int bs, Index num_block_cols) {
  CsrMatrix m;
  m.rows = static_cast<Index>(block_cols.size()) * bs;
  m.cols = num_block_cols * bs;
  m.row_ptr.assign(m.rows + 1, 0);
  size_t total = 0;
  for (const auto& bc : block_cols) total += bc.size() * bs * bs;
  if (total > static_cast<size_t>(std::numeric_limits<Index>::max()))
    throw Error("sparse pattern exceeds 32-bit index range");
  m.col.resize(total);
  m.val.assign(total, 0.0);
  Index p = 0;
  for (size_t b = 0; b < block_cols.size(); ++b)
    for (int a = 0; a < bs; ++a) {
      const Index r = static_cast<Index>(b) * bs + a;
      for (Index c : block_cols[b])
        for (int k = 0; k < bs; ++k) m.col[p++] = c * bs + k;
      m.row_ptr[r + 1] = p;
    }
  return m;
}

CsrMatrix csr_from_dense(const Mat& A, double drop) {
  CsrMatrix m;
  m.rows = static_cast<Index>(A.rows());
  m.cols = static_cast<Index>(A.cols());
  m.row_ptr.assign(m.rows + 1, 0);
  for (Index r = 0; r < m.rows; ++r) {
    for (Index c = 0; c < m.cols; ++c)
      if (std::abs(A(r, c)) > drop) {
        m.col.push_back(c);
        m.val.push_back(A(r, c));
      }
    m.row_ptr[r + 1] = static_cast<Index>(m.col.size());
  }
  return m;
}

}  // namespace pdfem
