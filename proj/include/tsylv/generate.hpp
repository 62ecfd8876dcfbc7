#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "tsylv/error.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/matrix_core.hpp"
#include "tsylv/spectra.hpp"
#include "tsylv/transforms.hpp"

namespace tsylv {

/// mt19937_64 has a fully specified output sequence, which keeps seeded runs
/// byte-identical across standard libraries. Uniform draws are derived from
/// the raw bits for the same reason.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [-1, 1).
  double symmetric_unit() { return 2.0 * (static_cast<double>(engine_() >> 11) * 0x1.0p-53) - 1.0; }

  DenseMatrix matrix(std::size_t rows, std::size_t cols) {
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = symmetric_unit();
    return m;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; derives independent per-instance seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct GenOptions {
  std::size_t m = 1;
  std::size_t n = 1;
  /// Build C = A X0 + X0^T B so an exact solution exists.
  bool solvable = false;
  /// Rescale B so a pair product of Lambda(S) lands at 1 + delta.
  std::optional<double> near_reciprocal;
  /// Resample until the canonical S is reciprocal free with at least this margin.
  std::optional<double> min_margin;
  std::size_t max_attempts = 100;
};

struct GeneratedInstance {
  ProblemInstance instance;
  std::optional<DenseMatrix> x0;
  DenseMatrix s;        // canonical S (B^T A^+)
  double margin = 0.0;  // reciprocal-free margin of S
  std::size_t attempts = 0;
};

/// B^T A^+ with the pseudoinverse matching the shape of A.
inline DenseMatrix canonical_s(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() >= a.cols()) return build_s_over(a, b);
  return b.transpose() * build_d_under(a);
}

/**
 * Draws A with full column (m >= n) or row (m <= n) rank, B, and C with
 * entries uniform on [-1, 1), resampling until every requested property
 * holds. Throws GenerationFailure after max_attempts draws.
 */
inline GeneratedInstance generate_instance(const GenOptions& opts, Rng& rng) {
  if (opts.m == 0 || opts.n == 0) throw Error(ErrorKind::ShapeError, "m, n must be >= 1");
  const std::size_t full = std::min(opts.m, opts.n);
  for (std::size_t attempt = 1; attempt <= opts.max_attempts; ++attempt) {
    DenseMatrix a = rng.matrix(opts.m, opts.n);
    DenseMatrix b = rng.matrix(opts.n, opts.m);
    DenseMatrix x0 = rng.matrix(opts.n, opts.m);
    DenseMatrix c_random = rng.matrix(opts.m, opts.m);
    if (rank(a) < full) continue;

    DenseMatrix s = canonical_s(a, b);
    if (opts.near_reciprocal) {
      // S is linear in B, so scaling B by t scales every pair product by t^2.
      // The pair (lambda, conj(lambda)) has the real product |lambda|^2.
      const double r = spectrum(s).max_modulus();
      if (r == 0.0) continue;
      const double t = std::sqrt(1.0 + *opts.near_reciprocal) / r;
      b *= t;
      s = canonical_s(a, b);
    }
    const ReciprocalCheck check = is_reciprocal_free(spectrum(s));
    // The default tolerance grows with |lambda|^2, so an absolute margin alone
    // does not guarantee the transforms accept the instance.
    if (opts.min_margin && (!check.free || check.margin < *opts.min_margin)) continue;
    const double margin = check.margin;

    DenseMatrix c = opts.solvable ? a * x0 + x0.transpose() * b : std::move(c_random);
    std::optional<DenseMatrix> kept;
    if (opts.solvable) kept = std::move(x0);
    return GeneratedInstance{ProblemInstance(std::move(a), std::move(b), std::move(c)),
                             std::move(kept), std::move(s), margin, attempt};
  }
  throw Error(ErrorKind::GenerationFailure,
              "no instance with the requested properties after " +
                  std::to_string(opts.max_attempts) + " attempts");
}

}  // namespace tsylv
