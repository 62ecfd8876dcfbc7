#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "tsylv/error.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/matrix_core.hpp"
#include "tsylv/tensor_kit.hpp"
#include "tsylv/transforms.hpp"

namespace tsylv {

enum class Method { DirectVec, Over, Under, LyapOozawa, LyapUnder };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::DirectVec: return "DIRECT_VEC";
    case Method::Over: return "OVER";
    case Method::Under: return "UNDER";
    case Method::LyapOozawa: return "LYAP_OOZAWA";
    case Method::LyapUnder: return "LYAP_UNDER";
  }
  return "UNKNOWN";
}

inline Method method_for(FormKind k) {
  switch (k) {
    case FormKind::GenSylvOver: return Method::Over;
    case FormKind::GenSylvUnder: return Method::Under;
    case FormKind::LyapOozawa: return Method::LyapOozawa;
    case FormKind::LyapUnder: return Method::LyapUnder;
  }
  return Method::DirectVec;
}

struct SolveReport {
  Method method = Method::DirectVec;
  DenseMatrix x;               // n x m
  double residual = 0.0;       // ||A X + X^T B - C||_F
  std::size_t system_rank = 0;
  std::size_t unknowns = 0;    // column count of the solved linear system
  bool consistent = false;     // residual <= tolerance
  double tolerance = 0.0;      // absolute residual threshold used for `consistent`
  std::optional<double> margin;
  // Transformed unknown before recovery (X~ or X^) and, for LYAP_UNDER, X~.
  std::optional<DenseMatrix> transformed_solution;
  std::optional<DenseMatrix> intermediate;

  bool full_rank() const noexcept { return system_rank == unknowns; }
};

inline double residual(const ProblemInstance& inst, const DenseMatrix& x) {
  if (x.rows() != inst.n() || x.cols() != inst.m()) {
    throw Error(ErrorKind::DimensionMismatch, "X must be " + std::to_string(inst.n()) + "x" +
                                                  std::to_string(inst.m()));
  }
  return frobenius_norm(inst.a() * x + x.transpose() * inst.b() - inst.c());
}

struct VecSystem {
  DenseMatrix matrix;  // m^2 x mn
  Vector rhs;          // vec(C)
};

/// {I_m (x) A + P_mm (I_m (x) B^T)} vec(X) = vec(C).
inline VecSystem assemble_vec_system(const ProblemInstance& inst) {
  const std::size_t m = inst.m();
  const DenseMatrix eye = DenseMatrix::identity(m);
  DenseMatrix mat = kron(eye, inst.a());
  mat += perm_dense(perm_build(m, m)) * kron(eye, inst.b().transpose());
  return {std::move(mat), vec(inst.c())};
}

/// Brute-force oracle: minimum-norm least-squares solve of the stacked system.
inline SolveReport solve_direct(const ProblemInstance& inst, double tol) {
  const VecSystem sys = assemble_vec_system(inst);
  const LeastSquaresResult ls = least_squares_min_norm(sys.matrix, sys.rhs);
  SolveReport r;
  r.method = Method::DirectVec;
  r.x = unvec(ls.solution, inst.n(), inst.m());
  r.residual = residual(inst, r.x);
  r.system_rank = ls.rank;
  r.unknowns = sys.matrix.cols();
  r.tolerance = tol * inst.scale();
  r.consistent = r.residual <= r.tolerance;
  return r;
}

/// Solves X - S X S^T = Q through (I - S (x) S) vec(X) = vec(Q).
inline DenseMatrix solve_lyapunov_kron(const DenseMatrix& s, const DenseMatrix& q) {
  if (!s.is_square() || !q.is_square() || s.rows() != q.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "S and Q must be square of equal size");
  }
  const std::size_t m = s.rows();
  DenseMatrix sys = DenseMatrix::identity(m * m);
  sys -= kron(s, s);
  return unvec(lu_solve(sys, vec(q)), m, m);
}

/// Coefficient of vec(Y) in  L Y - R Y S^T = rhs : I (x) L - S (x) R.
inline DenseMatrix assemble_transformed_system(const EquivalentForm& form) {
  DenseMatrix mat = kron(DenseMatrix::identity(form.s_matrix.rows()), form.coeff_left);
  mat -= kron(form.s_matrix, form.coeff_right_outer);
  return mat;
}

/// Unknown of  L Y - R Y S^T = rhs : LU for the (square, nonsingular)
/// Lyapunov kinds, minimum-norm least squares for the rectangular ones.
inline DenseMatrix solve_form_unknown(const EquivalentForm& form, const DenseMatrix& rhs,
                                      std::size_t* rank = nullptr, std::size_t* unknowns = nullptr) {
  if (form.kind == FormKind::LyapOozawa || form.kind == FormKind::LyapUnder) {
    DenseMatrix y = solve_lyapunov_kron(form.s_matrix, rhs);
    if (rank) *rank = y.size();
    if (unknowns) *unknowns = y.size();
    return y;
  }
  const DenseMatrix sys = assemble_transformed_system(form);
  const LeastSquaresResult ls = least_squares_min_norm(sys, vec(rhs));
  if (rank) *rank = ls.rank;
  if (unknowns) *unknowns = sys.cols();
  return unvec(ls.solution, form.unknown_rows(), form.unknown_cols());
}

/**
 * Solves a transformed equation and maps the result back to X.
 *
 * `refine_steps` rounds of iterative refinement follow, each solving the same
 * transformed equation for the residual C - (A X + X^T B) and adding the
 * recovered correction. For square A close to singular, S = B^T A^{-1} is
 * large and one round recovers the digits lost in I - S (x) S.
 */
inline SolveReport solve_transformed(const EquivalentForm& form, double tol,
                                     std::size_t refine_steps = 1) {
  const ProblemInstance& inst = form.source;
  SolveReport r;
  r.method = method_for(form.kind);
  r.margin = form.margin;
  DenseMatrix y = solve_form_unknown(form, form.rhs, &r.system_rank, &r.unknowns);
  r.x = recover_x(form, y);
  for (std::size_t step = 0; step < refine_steps; ++step) {
    const DenseMatrix res = inst.c() - inst.a() * r.x - r.x.transpose() * inst.b();
    const DenseMatrix dy = solve_form_unknown(form, transformed_rhs(form, res));
    y += dy;
    r.x += recover_x(form, dy);
  }
  if (form.kind == FormKind::LyapUnder) r.intermediate = recover_intermediate(form, y);
  r.transformed_solution = std::move(y);
  r.residual = residual(inst, r.x);
  r.tolerance = tol * inst.scale();
  r.consistent = r.residual <= r.tolerance;
  return r;
}

struct Verdict {
  bool equivalent = false;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool compared_x = false;
  double x_difference = 0.0;  // relative Frobenius difference, when compared
};

/**
 * Two reports are equivalent when both residuals are within tol * scale.
 * If either linear system had full column rank the solution is unique, and
 * the two X must then also agree to tol relative.
 */
inline Verdict compare_solutions(const SolveReport& r1, const SolveReport& r2,
                                 const ProblemInstance& inst, double tol) {
  Verdict v;
  v.threshold = tol * inst.scale();
  v.max_residual = std::max(residual(inst, r1.x), residual(inst, r2.x));
  v.equivalent = v.max_residual <= v.threshold;
  if (r1.full_rank() || r2.full_rank()) {
    v.compared_x = true;
    v.x_difference = frobenius_norm(r1.x - r2.x) / std::max(1.0, frobenius_norm(r1.x));
    v.equivalent = v.equivalent && v.x_difference <= tol;
  }
  return v;
}

}  // namespace tsylv
