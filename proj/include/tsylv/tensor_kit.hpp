#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tsylv/error.hpp"
#include "tsylv/matrix.hpp"

namespace tsylv {

/// Column-stacking vectorization.
inline Vector vec(const DenseMatrix& m) {
  Vector v;
  v.reserve(m.size());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) v.push_back(m(i, j));
  return v;
}

inline DenseMatrix unvec(std::span<const double> v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) {
    throw Error(ErrorKind::DimensionMismatch,
                "cannot reshape length " + std::to_string(v.size()) + " into " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
  DenseMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = v[j * rows + i];
  return m;
}

inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t p = b.rows();
  const std::size_t q = b.cols();
  DenseMatrix k(a.rows() * p, a.cols() * q);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < q; ++c) k(i * p + r, j * q + c) = aij * b(r, c);
    }
  }
  return k;
}

/**
 * Commutation matrix P_mn kept as an index permutation.
 *
 * P_mn stacks the blocks I_m (x) e_jn^T for j = 1..n, so (P v)[j*m + i] =
 * v[i*n + j]. sigma maps each source index of v to its target index, which
 * makes P_mn vec(A^T) = vec(A) for every m x n matrix A.
 */
struct PermutationMap {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<std::size_t> sigma;

  std::size_t dim() const noexcept { return sigma.size(); }
  friend bool operator==(const PermutationMap&, const PermutationMap&) = default;
};

inline PermutationMap perm_build(std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw Error(ErrorKind::ShapeError, "commutation matrix needs m, n >= 1");
  PermutationMap p{m, n, std::vector<std::size_t>(m * n)};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) p.sigma[i * n + j] = j * m + i;
  return p;
}

/// Inverse permutation. For commutation maps this is P_mn^T = P_nm.
inline PermutationMap perm_transpose(const PermutationMap& p) {
  PermutationMap t{p.n, p.m, std::vector<std::size_t>(p.dim())};
  for (std::size_t k = 0; k < p.dim(); ++k) t.sigma[p.sigma[k]] = k;
  return t;
}

inline Vector perm_apply(const PermutationMap& p, std::span<const double> v) {
  if (v.size() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "permutation length");
  Vector out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[p.sigma[k]] = v[k];
  return out;
}

inline DenseMatrix perm_dense(const PermutationMap& p) {
  DenseMatrix d(p.dim(), p.dim());
  for (std::size_t k = 0; k < p.dim(); ++k) d(p.sigma[k], k) = 1.0;
  return d;
}

/// P * M without forming P: row k of M becomes row sigma[k].
inline DenseMatrix perm_rows(const PermutationMap& p, const DenseMatrix& m) {
  if (m.rows() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "permutation row count");
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const auto src = m.row(k);
    auto dst = out.row(p.sigma[k]);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

/// M * P^T without forming P: column k of M becomes column sigma[k].
inline DenseMatrix perm_cols_transposed(const DenseMatrix& m, const PermutationMap& p) {
  if (m.cols() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "permutation column count");
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) out(i, p.sigma[k]) = m(i, k);
  return out;
}

}  // namespace tsylv
