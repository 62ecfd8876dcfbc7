#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "tsylv/matrix.hpp"
#include "tsylv/matrix_core.hpp"
#include "tsylv/tensor_kit.hpp"

namespace tsylv {

/// Eigenvalue multiset of a square real matrix.
struct Spectrum {
  std::vector<ComplexScalar> values;
  std::size_t source_dim = 0;

  double max_modulus() const {
    double best = 0.0;
    for (const auto& v : values) best = std::max(best, std::abs(v));
    return best;
  }
};

inline Spectrum spectrum(const DenseMatrix& s) {
  return Spectrum{eigenvalues(s), s.rows()};
}

/// 1e-8 * (1 + max|lambda|^2)
inline double default_reciprocal_tol(const Spectrum& sp) {
  const double r = sp.max_modulus();
  return 1e-8 * (1.0 + r * r);
}

struct ReciprocalCheck {
  bool free = true;
  // min |lambda_i lambda_j - 1| over all ordered pairs, i == j included.
  double margin = std::numeric_limits<double>::infinity();
  // Pair attaining the margin; set only when the check fails.
  std::optional<ReciprocalWitness> witness;
};

/**
 * Reciprocal-free test: no pair (i, j), i == j allowed, has lambda_i *
 * lambda_j within tol of 1 in complex modulus. Zero eigenvalues are harmless.
 */
inline ReciprocalCheck is_reciprocal_free(const Spectrum& sp, double tol) {
  ReciprocalCheck out;
  std::size_t bi = 0, bj = 0;
  const auto& v = sp.values;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i; j < v.size(); ++j) {
      const double gap = std::abs(v[i] * v[j] - 1.0);
      if (gap < out.margin) {
        out.margin = gap;
        bi = i;
        bj = j;
      }
    }
  }
  if (out.margin <= tol) {
    out.free = false;
    out.witness = ReciprocalWitness{bi, bj, v[bi], v[bj]};
  }
  return out;
}

inline ReciprocalCheck is_reciprocal_free(const Spectrum& sp) {
  return is_reciprocal_free(sp, default_reciprocal_tol(sp));
}

struct DetCheck {
  bool free = true;
  double min_pivot = 0.0;
  double threshold = 0.0;
};

/**
 * Eigenvalue-free cross-check: reciprocal free iff I - S (x) S is
 * nonsingular. A pivot at or below max(dim * eps * ||M||_inf,
 * rel_tol * ||M||_inf) counts as singular; rel_tol = 0 gives the bare
 * LU pivot tolerance.
 */
inline DetCheck reciprocal_free_det_check(const DenseMatrix& s, double rel_tol) {
  if (!s.is_square()) throw Error(ErrorKind::ShapeError, "S must be square");
  DenseMatrix m = DenseMatrix::identity(s.rows() * s.rows());
  m -= kron(s, s);
  const double threshold = std::max(default_pivot_tol(m), rel_tol * inf_norm(m));
  const auto f = lu_factor(m, threshold);
  return DetCheck{!f.singular, f.min_pivot, threshold};
}

}  // namespace tsylv
