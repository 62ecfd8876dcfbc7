#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "tsylv/error.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/matrix_core.hpp"
#include "tsylv/spectra.hpp"
#include "tsylv/tensor_kit.hpp"

namespace tsylv {

/// The T-congruence Sylvester equation A X + X^T B = C.
class ProblemInstance {
 public:
  ProblemInstance(DenseMatrix a, DenseMatrix b, DenseMatrix c)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    const std::size_t m = a_.rows();
    const std::size_t n = a_.cols();
    if (m == 0 || n == 0) throw Error(ErrorKind::DimensionMismatch, "A must be non-empty");
    if (b_.rows() != n || b_.cols() != m) {
      throw Error(ErrorKind::DimensionMismatch, "B must be " + std::to_string(n) + "x" +
                                                    std::to_string(m) + " for A " +
                                                    std::to_string(m) + "x" + std::to_string(n));
    }
    if (c_.rows() != m || c_.cols() != m) {
      throw Error(ErrorKind::DimensionMismatch,
                  "C must be " + std::to_string(m) + "x" + std::to_string(m));
    }
  }

  const DenseMatrix& a() const noexcept { return a_; }
  const DenseMatrix& b() const noexcept { return b_; }
  const DenseMatrix& c() const noexcept { return c_; }
  std::size_t m() const noexcept { return a_.rows(); }
  std::size_t n() const noexcept { return a_.cols(); }

  /// 1 + ||A||_F + ||B||_F + ||C||_F, the reference magnitude for tolerances.
  double scale() const { return 1.0 + frobenius_norm(a_) + frobenius_norm(b_) + frobenius_norm(c_); }

 private:
  DenseMatrix a_;
  DenseMatrix b_;
  DenseMatrix c_;
};

enum class FormKind { GenSylvOver, GenSylvUnder, LyapOozawa, LyapUnder };

inline const char* to_string(FormKind k) {
  switch (k) {
    case FormKind::GenSylvOver: return "GEN_SYLV_OVER";
    case FormKind::GenSylvUnder: return "GEN_SYLV_UNDER";
    case FormKind::LyapOozawa: return "LYAP_OOZAWA";
    case FormKind::LyapUnder: return "LYAP_UNDER";
  }
  return "UNKNOWN";
}

enum class RecoveryKind { Identity, LeftInvertA, UnderRecovery };

inline const char* to_string(RecoveryKind k) {
  switch (k) {
    case RecoveryKind::Identity: return "IDENTITY";
    case RecoveryKind::LeftInvertA: return "LEFT_INVERT_A";
    case RecoveryKind::UnderRecovery: return "UNDER_RECOVERY";
  }
  return "UNKNOWN";
}

/**
 * Maps the unknown of a transformed equation back to X.
 *
 * When `a` is non-empty the solution is first replaced by A^{-1} * solution.
 * UnderRecovery then applies Y -> Y - D Y^T B.
 */
struct RecoveryMap {
  RecoveryKind kind = RecoveryKind::Identity;
  DenseMatrix a;
  DenseMatrix d;
  DenseMatrix b;
};

/**
 * A transformed equation  L Y - R Y S^T = rhs  together with the way back to X.
 *
 * Generalized Sylvester kinds carry L = A, R = B^T; the Lyapunov kinds carry
 * L = I and R = S.
 */
struct EquivalentForm {
  FormKind kind;
  ProblemInstance source;
  DenseMatrix coeff_left;
  DenseMatrix coeff_right_outer;
  DenseMatrix s_matrix;
  DenseMatrix rhs;
  RecoveryMap recovery;
  double margin;

  std::size_t unknown_rows() const noexcept { return coeff_left.cols(); }
  std::size_t unknown_cols() const noexcept { return s_matrix.rows(); }
};

struct TransformOptions {
  /// Relative Frobenius tolerance for B^T = S A and A D = I.
  double consistency_tol = 1e-10;
  /// Reciprocal-free tolerance; 1e-8 * (1 + max|lambda|^2) when unset.
  std::optional<double> reciprocal_tol;
};

// ---------------------------------------------------------------------------
// Coupling matrices
// ---------------------------------------------------------------------------

/// S = B^T A^+ for m >= n and A of full column rank, so that B^T = S A.
inline DenseMatrix build_s_over(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() < a.cols()) {
    throw Error(ErrorKind::ShapeError, "S = B^T A^+ needs m >= n (A is " +
                                           std::to_string(a.rows()) + "x" +
                                           std::to_string(a.cols()) + ")");
  }
  if (b.rows() != a.cols() || b.cols() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "B must be n x m");
  }
  return b.transpose() * pinv_full_column_rank(a);
}

struct ConsistencyCheck {
  bool consistent = false;
  double defect = 0.0;     // absolute Frobenius defect
  double threshold = 0.0;  // defect must not exceed this
};

/// ||B^T - S A||_F <= tol * (1 + ||B||_F).
inline ConsistencyCheck verify_s_consistency(const DenseMatrix& a, const DenseMatrix& b,
                                             const DenseMatrix& s, double tol) {
  if (s.rows() != a.rows() || s.cols() != a.rows() || b.rows() != a.cols() ||
      b.cols() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "S must be m x m and B n x m");
  }
  const double defect = frobenius_norm(b.transpose() - s * a);
  const double threshold = tol * (1.0 + frobenius_norm(b));
  return {defect <= threshold, defect, threshold};
}

/// D = A^+ for m <= n and A of full row rank, so that A D = I_m.
inline DenseMatrix build_d_under(const DenseMatrix& a) {
  if (a.rows() > a.cols()) {
    throw Error(ErrorKind::ShapeError, "D = A^+ with A D = I needs m <= n (A is " +
                                           std::to_string(a.rows()) + "x" +
                                           std::to_string(a.cols()) + ")");
  }
  return pinv_full_row_rank(a);
}

/// ||A D - I_m||_F <= tol * (1 + ||A||_F).
inline ConsistencyCheck verify_left_inverse(const DenseMatrix& a, const DenseMatrix& d,
                                            double tol) {
  if (d.rows() != a.cols() || d.cols() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "D must be n x m");
  }
  const double defect = frobenius_norm(a * d - DenseMatrix::identity(a.rows()));
  const double threshold = tol * (1.0 + frobenius_norm(a));
  return {defect <= threshold, defect, threshold};
}

// ---------------------------------------------------------------------------
// Matrices from the nonsingularity arguments
// ---------------------------------------------------------------------------

/// K = P_mm (I_m (x) S); K^2 = S (x) S.
inline DenseMatrix k_matrix_over(const DenseMatrix& s) {
  const std::size_t m = s.rows();
  return perm_rows(perm_build(m, m), kron(DenseMatrix::identity(m), s));
}

/// G = I - P_mm (I_m (x) S).
inline DenseMatrix g_matrix_over(const DenseMatrix& s) {
  const std::size_t m = s.rows();
  return DenseMatrix::identity(m * m) - k_matrix_over(s);
}

/// K = P_nm (D (x) B^T) for D n x m and B n x m; K^2 = B^T D (x) D B^T.
inline DenseMatrix k_matrix_under(const DenseMatrix& d, const DenseMatrix& b) {
  if (d.rows() != b.rows() || d.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "D and B must both be n x m");
  }
  return perm_rows(perm_build(d.rows(), d.cols()), kron(d, b.transpose()));
}

/// G = I_mn - P_nm (D (x) B^T); vec(X) = G vec(X~).
inline DenseMatrix g_matrix_under(const DenseMatrix& d, const DenseMatrix& b) {
  return DenseMatrix::identity(d.rows() * d.cols()) - k_matrix_under(d, b);
}

struct GDiagnostic {
  bool nonsingular = false;
  double min_pivot = 0.0;
  std::size_t dim = 0;
};

inline GDiagnostic g_diagnostic(const DenseMatrix& g) {
  const auto f = lu_factor(g, default_pivot_tol(g));
  return {!f.singular, f.min_pivot, g.rows()};
}

/// G of the proof that matches this form's kind.
inline DenseMatrix build_g_matrix(const EquivalentForm& form) {
  switch (form.kind) {
    case FormKind::GenSylvOver:
    case FormKind::LyapOozawa:
      return g_matrix_over(form.s_matrix);
    case FormKind::GenSylvUnder:
    case FormKind::LyapUnder:
      return g_matrix_under(form.recovery.d, form.recovery.b);
  }
  throw Error(ErrorKind::ShapeError, "unknown form kind");
}

// ---------------------------------------------------------------------------
// Transformations
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_complex(ComplexScalar z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

/// Returns the reciprocal-free margin of Lambda(S) or throws with the witness.
inline double require_reciprocal_free(const DenseMatrix& s, const TransformOptions& opts) {
  const Spectrum sp = spectrum(s);
  const double tol = opts.reciprocal_tol.value_or(default_reciprocal_tol(sp));
  const ReciprocalCheck check = is_reciprocal_free(sp, tol);
  if (!check.free) {
    const auto& w = *check.witness;
    throw NotReciprocalFreeError(w, check.margin,
                                 "spectrum of S is not reciprocal free: lambda_" +
                                     std::to_string(w.i) + " * lambda_" + std::to_string(w.j) +
                                     " = " + format_complex(w.lambda_i) + " * " +
                                     format_complex(w.lambda_j) + " is within " +
                                     format_real(tol) + " of 1");
  }
  return check.margin;
}

/// S = B^T A^{-1} for square A, raising SingularA when A is singular.
inline DenseMatrix s_from_square(const ProblemInstance& inst) {
  if (inst.m() != inst.n()) {
    throw Error(ErrorKind::ShapeError, "square route needs m = n (got " +
                                           std::to_string(inst.m()) + "x" +
                                           std::to_string(inst.n()) + ")");
  }
  try {
    // A^T S^T = B  <=>  S = B^T A^{-1}
    return lu_solve(inst.a().transpose(), inst.b()).transpose();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularMatrix) throw Error(ErrorKind::SingularA, "A is singular");
    throw;
  }
}

inline DenseMatrix inverse_of_a(const DenseMatrix& a) {
  try {
    return inverse(a);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularMatrix) throw Error(ErrorKind::SingularA, "A is singular");
    throw;
  }
}

}  // namespace detail

/// A X - B^T X S^T = C - (S C)^T for a given S with B^T = S A.
inline EquivalentForm transform_over(const ProblemInstance& inst, const DenseMatrix& s,
                                     const TransformOptions& opts = {}) {
  if (s.rows() != inst.m() || s.cols() != inst.m()) {
    throw Error(ErrorKind::ShapeError, "S must be " + std::to_string(inst.m()) + "x" +
                                           std::to_string(inst.m()));
  }
  const auto check = verify_s_consistency(inst.a(), inst.b(), s, opts.consistency_tol);
  if (!check.consistent) {
    throw Error(ErrorKind::InconsistentS, "||B^T - S A||_F = " + format_real(check.defect) +
                                              " exceeds " + format_real(check.threshold));
  }
  const double margin = detail::require_reciprocal_free(s, opts);
  DenseMatrix rhs = inst.c() - (s * inst.c()).transpose();
  return EquivalentForm{FormKind::GenSylvOver, inst,   inst.a(), inst.b().transpose(), s,
                        std::move(rhs),        RecoveryMap{RecoveryKind::Identity, {}, {}, {}},
                        margin};
}

/// transform_over with the canonical S = B^T A^+.
inline EquivalentForm transform_over(const ProblemInstance& inst,
                                     const TransformOptions& opts = {}) {
  return transform_over(inst, build_s_over(inst.a(), inst.b()), opts);
}

/// A X~ - B^T X~ S^T = C with S = B^T D, A D = I, and X = X~ - D X~^T B.
inline EquivalentForm transform_under(const ProblemInstance& inst, const DenseMatrix& d,
                                      const TransformOptions& opts = {}) {
  if (inst.m() > inst.n()) {
    throw Error(ErrorKind::ShapeError, "under-determined route needs m <= n (got " +
                                           std::to_string(inst.m()) + "x" +
                                           std::to_string(inst.n()) + ")");
  }
  const auto check = verify_left_inverse(inst.a(), d, opts.consistency_tol);
  if (!check.consistent) {
    throw Error(ErrorKind::BadLeftInverse, "||A D - I||_F = " + format_real(check.defect) +
                                               " exceeds " + format_real(check.threshold));
  }
  DenseMatrix s = inst.b().transpose() * d;
  const double margin = detail::require_reciprocal_free(s, opts);
  return EquivalentForm{FormKind::GenSylvUnder,
                        inst,
                        inst.a(),
                        inst.b().transpose(),
                        std::move(s),
                        inst.c(),
                        RecoveryMap{RecoveryKind::UnderRecovery, {}, d, inst.b()},
                        margin};
}

/// transform_under with the canonical D = A^+.
inline EquivalentForm transform_under(const ProblemInstance& inst,
                                      const TransformOptions& opts = {}) {
  return transform_under(inst, build_d_under(inst.a()), opts);
}

/// X~ - S X~ S^T = C - (S C)^T with S = B^T A^{-1} and X~ = A X.
inline EquivalentForm transform_square_oozawa(const ProblemInstance& inst,
                                              const TransformOptions& opts = {}) {
  DenseMatrix s = detail::s_from_square(inst);
  const double margin = detail::require_reciprocal_free(s, opts);
  DenseMatrix q = inst.c() - (s * inst.c()).transpose();
  DenseMatrix right = s;
  return EquivalentForm{FormKind::LyapOozawa,
                        inst,
                        DenseMatrix::identity(inst.m()),
                        std::move(right),
                        std::move(s),
                        std::move(q),
                        RecoveryMap{RecoveryKind::LeftInvertA, inst.a(), {}, {}},
                        margin};
}

/// X^ - S X^ S^T = C with S = B^T A^{-1}, X^ = A X~ and X = X~ - A^{-1} X~^T B.
inline EquivalentForm transform_square_under(const ProblemInstance& inst,
                                             const TransformOptions& opts = {}) {
  DenseMatrix s = detail::s_from_square(inst);
  const double margin = detail::require_reciprocal_free(s, opts);
  DenseMatrix a_inv = detail::inverse_of_a(inst.a());
  DenseMatrix right = s;
  return EquivalentForm{FormKind::LyapUnder,
                        inst,
                        DenseMatrix::identity(inst.m()),
                        std::move(right),
                        std::move(s),
                        inst.c(),
                        RecoveryMap{RecoveryKind::UnderRecovery, inst.a(), std::move(a_inv),
                                    inst.b()},
                        margin};
}

/// Right-hand side the form would carry for the data C: C - (S C)^T for the
/// kinds built from Q, C itself otherwise.
inline DenseMatrix transformed_rhs(const EquivalentForm& form, const DenseMatrix& c) {
  if (form.kind == FormKind::GenSylvOver || form.kind == FormKind::LyapOozawa) {
    return c - (form.s_matrix * c).transpose();
  }
  return c;
}

// ---------------------------------------------------------------------------
// Recovery
// ---------------------------------------------------------------------------

/// The solution after the optional A^{-1} step: X~ for LYAP_UNDER, X for LYAP_OOZAWA.
inline DenseMatrix recover_intermediate(const EquivalentForm& form, const DenseMatrix& solution) {
  if (solution.rows() != form.unknown_rows() || solution.cols() != form.unknown_cols()) {
    throw Error(ErrorKind::DimensionMismatch, "solution does not match the transformed unknown");
  }
  if (form.recovery.a.empty()) return solution;
  try {
    return lu_solve(form.recovery.a, solution);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularMatrix) throw Error(ErrorKind::SingularA, "A is singular");
    throw;
  }
}

inline DenseMatrix recover_x(const EquivalentForm& form, const DenseMatrix& solution) {
  DenseMatrix y = recover_intermediate(form, solution);
  if (form.recovery.kind != RecoveryKind::UnderRecovery) return y;
  return y - form.recovery.d * y.transpose() * form.recovery.b;
}

}  // namespace tsylv
