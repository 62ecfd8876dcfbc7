#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsylv/error.hpp"
#include "tsylv/matrix.hpp"

namespace tsylv {

using ComplexScalar = std::complex<double>;

inline constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

/// Pivot threshold dim * eps * ||M||_inf used by every LU-based solve.
inline double default_pivot_tol(const DenseMatrix& m) {
  return static_cast<double>(m.rows()) * kMachineEps * inf_norm(m);
}

struct LuFactorization {
  DenseMatrix lu;                 // unit-lower L below the diagonal, U on and above
  std::vector<std::size_t> perm;  // row i of PA is row perm[i] of A
  int sign = 1;
  double min_pivot = std::numeric_limits<double>::infinity();
  bool singular = false;
};

/**
 * Factor PA = LU. Never throws for singular input; a pivot whose magnitude
 * is at or below pivot_tol marks the factorization singular and the
 * elimination continues past it so min_pivot covers every column.
 */
inline LuFactorization lu_factor(const DenseMatrix& a, double pivot_tol) {
  if (!a.is_square()) throw Error(ErrorKind::ShapeError, "LU needs a square matrix");
  const std::size_t n = a.rows();
  LuFactorization f{a, std::vector<std::size_t>(n), 1};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  DenseMatrix& lu = f.lu;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        p = i;
      }
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
      std::swap(f.perm[k], f.perm[p]);
      f.sign = -f.sign;
    }
    f.min_pivot = std::min(f.min_pivot, best);
    if (best <= pivot_tol) f.singular = true;
    if (best == 0.0) continue;

    const double pivot = lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = lu(i, k) / pivot;
      lu(i, k) = factor;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
    }
  }
  if (n == 0) f.min_pivot = 0.0;
  return f;
}

namespace detail {

inline Vector lu_substitute(const LuFactorization& f, std::span<const double> rhs) {
  const std::size_t n = f.lu.rows();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * x[j];
    x[ii] = s / f.lu(ii, ii);
  }
  return x;
}

inline void require_nonsingular(const LuFactorization& f) {
  if (f.singular) {
    throw Error(ErrorKind::SingularMatrix,
                "pivot magnitude " + format_real(f.min_pivot) + " below tolerance");
  }
}

}  // namespace detail

/// Solve Mx = rhs by partial-pivoting LU.
inline Vector lu_solve(const DenseMatrix& m, std::span<const double> rhs) {
  if (!m.is_square()) throw Error(ErrorKind::ShapeError, "lu_solve needs a square matrix");
  if (rhs.size() != m.rows()) throw Error(ErrorKind::DimensionMismatch, "rhs length");
  const auto f = lu_factor(m, default_pivot_tol(m));
  detail::require_nonsingular(f);
  return detail::lu_substitute(f, rhs);
}

/// Solve MX = R column by column with one factorization.
inline DenseMatrix lu_solve(const DenseMatrix& m, const DenseMatrix& rhs) {
  if (!m.is_square()) throw Error(ErrorKind::ShapeError, "lu_solve needs a square matrix");
  if (rhs.rows() != m.rows()) throw Error(ErrorKind::DimensionMismatch, "rhs rows");
  const auto f = lu_factor(m, default_pivot_tol(m));
  detail::require_nonsingular(f);
  DenseMatrix x(rhs.rows(), rhs.cols());
  Vector col(rhs.rows());
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    for (std::size_t i = 0; i < rhs.rows(); ++i) col[i] = rhs(i, j);
    const Vector sol = detail::lu_substitute(f, col);
    for (std::size_t i = 0; i < rhs.rows(); ++i) x(i, j) = sol[i];
  }
  return x;
}

inline DenseMatrix inverse(const DenseMatrix& m) {
  return lu_solve(m, DenseMatrix::identity(m.rows()));
}

inline double determinant(const DenseMatrix& m) {
  const auto f = lu_factor(m, 0.0);
  double det = f.sign;
  for (std::size_t i = 0; i < m.rows(); ++i) det *= f.lu(i, i);
  return det;
}

// ---------------------------------------------------------------------------
// Singular value decomposition (one-sided Jacobi)
// ---------------------------------------------------------------------------

/// Thin SVD M = U diag(s) V^T with s sorted in decreasing order.
struct Svd {
  DenseMatrix u;  // rows(M) x k
  Vector s;       // k = min(rows, cols)
  DenseMatrix v;  // cols(M) x k
};

namespace detail {

// Orthogonalizes the rows of w (each row is one column of the tall matrix
// being decomposed). On return the row norms of w are the singular values and
// vt accumulates the right rotations.
inline void jacobi_sweeps(DenseMatrix& w, DenseMatrix& vt) {
  const std::size_t k = w.rows();
  constexpr int kMaxSweeps = 80;
  // Rounding alone leaves |gamma| near sqrt(len) eps sqrt(alpha beta), and
  // columns at the noise floor never orthogonalize; both are left alone.
  const double orth_tol = kMachineEps * std::sqrt(static_cast<double>(std::max<std::size_t>(w.cols(), 1)));
  const double floor = kMachineEps * frobenius_norm(w);
  const double floor_sq = floor * floor;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        auto wp = w.row(p);
        auto wq = w.row(q);
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < wp.size(); ++i) {
          alpha += wp[i] * wp[i];
          beta += wq[i] * wq[i];
          gamma += wp[i] * wq[i];
        }
        if (alpha <= floor_sq || beta <= floor_sq) continue;
        if (std::abs(gamma) <= orth_tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (std::size_t i = 0; i < wp.size(); ++i) {
          const double a = wp[i];
          const double b = wq[i];
          wp[i] = c * a - s * b;
          wq[i] = s * a + c * b;
        }
        auto vp = vt.row(p);
        auto vq = vt.row(q);
        for (std::size_t i = 0; i < vp.size(); ++i) {
          const double a = vp[i];
          const double b = vq[i];
          vp[i] = c * a - s * b;
          vq[i] = s * a + c * b;
        }
      }
    }
    if (!rotated) return;
  }
  throw Error(ErrorKind::NoConvergence, "Jacobi SVD did not converge");
}

}  // namespace detail

inline Svd svd(const DenseMatrix& m) {
  const bool wide = m.rows() < m.cols();
  // Work on the tall orientation; rows of w are its columns.
  DenseMatrix w = wide ? m : m.transpose();
  const std::size_t k = w.rows();
  const std::size_t len = w.cols();
  DenseMatrix vt = DenseMatrix::identity(k);
  detail::jacobi_sweeps(w, vt);

  std::vector<double> norms(k);
  for (std::size_t p = 0; p < k; ++p) norms[p] = norm2(w.row(p));
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });

  DenseMatrix left(len, k);   // orthonormal factor of the tall orientation
  DenseMatrix right(k, k);    // accumulated rotations
  Vector s(k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t p = order[c];
    s[c] = norms[p];
    for (std::size_t i = 0; i < len; ++i) left(i, c) = s[c] > 0.0 ? w(p, i) / s[c] : 0.0;
    for (std::size_t i = 0; i < k; ++i) right(i, c) = vt(p, i);
  }
  if (wide) return Svd{std::move(right), std::move(s), std::move(left)};
  return Svd{std::move(left), std::move(s), std::move(right)};
}

/// Default relative rank cutoff max(rows, cols) * eps.
inline double default_rank_tol(const DenseMatrix& m) {
  return static_cast<double>(std::max(m.rows(), m.cols())) * kMachineEps;
}

inline std::size_t numerical_rank(const Svd& d, double rel_tol) {
  if (d.s.empty() || d.s.front() == 0.0) return 0;
  const double cutoff = rel_tol * d.s.front();
  return static_cast<std::size_t>(
      std::count_if(d.s.begin(), d.s.end(), [&](double x) { return x > cutoff; }));
}

inline std::size_t rank(const DenseMatrix& m) {
  if (m.empty()) return 0;
  return numerical_rank(svd(m), default_rank_tol(m));
}

// ---------------------------------------------------------------------------
// Minimum-norm least squares
// ---------------------------------------------------------------------------

struct LeastSquaresResult {
  Vector solution;
  double residual_norm = 0.0;  // ||M x - rhs||_2
  std::size_t rank = 0;
};

/**
 * Minimum-norm minimizer of ||Mx - rhs||_2. Singular values at or below
 * tol * sigma_max are treated as zero. Rank deficiency and inconsistency are
 * reported through the result instead of thrown.
 */
inline LeastSquaresResult least_squares_min_norm(const DenseMatrix& m, std::span<const double> rhs,
                                                 double tol) {
  if (rhs.size() != m.rows()) throw Error(ErrorKind::DimensionMismatch, "rhs length");
  LeastSquaresResult out;
  out.solution.assign(m.cols(), 0.0);
  if (!m.empty()) {
    const Svd d = svd(m);
    out.rank = numerical_rank(d, tol);
    for (std::size_t c = 0; c < out.rank; ++c) {
      double proj = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) proj += d.u(i, c) * rhs[i];
      proj /= d.s[c];
      for (std::size_t j = 0; j < m.cols(); ++j) out.solution[j] += d.v(j, c) * proj;
    }
  }
  out.residual_norm = norm2(subtract(m * std::span<const double>(out.solution), rhs));
  return out;
}

inline LeastSquaresResult least_squares_min_norm(const DenseMatrix& m, std::span<const double> rhs) {
  return least_squares_min_norm(m, rhs, default_rank_tol(m));
}

// ---------------------------------------------------------------------------
// Nonsymmetric eigenvalues: balance, Householder Hessenberg, Francis QR
// ---------------------------------------------------------------------------

namespace detail {

inline void balance(DenseMatrix& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const std::size_t n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

inline void hessenberg_reduce(DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (n < 3) return;
  Vector v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm += a(i, k) * a(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double alpha = a(k + 1, k) > 0.0 ? -norm : norm;
    for (std::size_t i = 0; i < n; ++i) v[i] = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;
    // A <- H A
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i] * a(i, j);
      s *= beta;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
    }
    // A <- A H
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= beta;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
    }
    a(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix. Indices inside are
// 1-based through h() to keep the deflation bookkeeping readable.
inline std::vector<ComplexScalar> hessenberg_qr_eigenvalues(DenseMatrix& mat) {
  const int n = static_cast<int>(mat.rows());
  auto h = [&](int i, int j) -> double& { return mat(i - 1, j - 1); };
  std::vector<double> wr(n + 1, 0.0), wi(n + 1, 0.0);
  const long max_iterations = 100L * n;
  long total_iterations = 0;

  double anorm = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = std::max(i - 1, 1); j <= n; ++j) anorm += std::abs(h(i, j));

  int nn = n;
  double t = 0.0;
  double p = 0.0, q = 0.0, r = 0.0, s = 0.0, w = 0.0, x = 0.0, y = 0.0, z = 0.0;
  while (nn >= 1) {
    int its = 0;
    int l = 1;
    do {
      for (l = nn; l >= 2; --l) {
        s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(h(l, l - 1)) + s == s) {
          h(l, l - 1) = 0.0;
          break;
        }
      }
      x = h(nn, nn);
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn--] = 0.0;
      } else {
        y = h(nn - 1, nn - 1);
        w = h(nn, nn - 1) * h(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + w;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + std::copysign(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0.0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn - 1] = -(wi[nn] = z);
          }
          nn -= 2;
        } else {
          if (++total_iterations > max_iterations) {
            throw Error(ErrorKind::NoConvergence,
                        "QR iteration exceeded " + std::to_string(max_iterations) + " steps");
          }
          if (its > 0 && its % 10 == 0) {
            // Exceptional shift.
            t += x;
            for (int i = 1; i <= nn; ++i) h(i, i) -= x;
            s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          for (; m >= l; --m) {
            z = h(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
            q = h(m + 1, m + 1) - z - r - s;
            r = h(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) +
                                            std::abs(h(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            h(i, i - 2) = 0.0;
            if (i != m + 2) h(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = h(k, k - 1);
              q = h(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = h(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            if ((s = std::copysign(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == m) {
                if (l != m) h(k, k - 1) = -h(k, k - 1);
              } else {
                h(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = h(k, j) + q * h(k + 1, j);
                if (k != nn - 1) {
                  p += r * h(k + 2, j);
                  h(k + 2, j) -= p * z;
                }
                h(k + 1, j) -= p * y;
                h(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * h(i, k) + y * h(i, k + 1);
                if (k != nn - 1) {
                  p += z * h(i, k + 2);
                  h(i, k + 2) -= p * r;
                }
                h(i, k + 1) -= p * q;
                h(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l < nn - 1);
  }

  std::vector<ComplexScalar> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) out.emplace_back(wr[i], wi[i]);
  return out;
}

}  // namespace detail

/**
 * All eigenvalues of a real square matrix, with algebraic multiplicity.
 * Complex eigenvalues come out as adjacent conjugate pairs.
 *
 * Throws NoConvergence once the QR sweep count exceeds 100 * dim.
 */
inline std::vector<ComplexScalar> eigenvalues(const DenseMatrix& m) {
  if (!m.is_square() || m.rows() == 0) {
    throw Error(ErrorKind::ShapeError, "eigenvalues need a non-empty square matrix");
  }
  DenseMatrix h = m;
  detail::balance(h);
  detail::hessenberg_reduce(h);
  return detail::hessenberg_qr_eigenvalues(h);
}

// ---------------------------------------------------------------------------
// Full-rank Moore-Penrose inverses
// ---------------------------------------------------------------------------

namespace detail {

/// V diag(1/s) U^T from a decomposition with no zero singular values.
inline DenseMatrix pinv_from_svd(const Svd& d) {
  DenseMatrix p(d.v.rows(), d.u.rows());
  for (std::size_t c = 0; c < d.s.size(); ++c) {
    const double inv = 1.0 / d.s[c];
    for (std::size_t i = 0; i < d.v.rows(); ++i) {
      const double vic = d.v(i, c) * inv;
      for (std::size_t j = 0; j < d.u.rows(); ++j) p(i, j) += vic * d.u(j, c);
    }
  }
  return p;
}

}  // namespace detail

// Both pseudoinverses equal (A^T A)^{-1} A^T resp. A^T (A A^T)^{-1}, but are
// evaluated through the SVD: forming A^T A squares the condition number.

/// A^+ = (A^T A)^{-1} A^T for A with full column rank.
inline DenseMatrix pinv_full_column_rank(const DenseMatrix& a) {
  if (a.rows() < a.cols()) {
    throw Error(ErrorKind::ShapeError, "full column rank pseudoinverse needs rows >= cols");
  }
  const Svd d = svd(a);
  const std::size_t r = numerical_rank(d, default_rank_tol(a));
  if (r < a.cols()) {
    throw Error(ErrorKind::RankDeficient,
                "rank " + std::to_string(r) + " < " + std::to_string(a.cols()) + " columns");
  }
  return detail::pinv_from_svd(d);
}

/// A^+ = A^T (A A^T)^{-1} for A with full row rank.
inline DenseMatrix pinv_full_row_rank(const DenseMatrix& a) {
  if (a.rows() > a.cols()) {
    throw Error(ErrorKind::ShapeError, "full row rank pseudoinverse needs rows <= cols");
  }
  const Svd d = svd(a);
  const std::size_t r = numerical_rank(d, default_rank_tol(a));
  if (r < a.rows()) {
    throw Error(ErrorKind::RankDeficient,
                "rank " + std::to_string(r) + " < " + std::to_string(a.rows()) + " rows");
  }
  return detail::pinv_from_svd(d);
}

}  // namespace tsylv
