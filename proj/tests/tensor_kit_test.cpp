#include <gtest/gtest.h>

#include <complex>
#include <vector>

#include "test_support.hpp"
#include "tsylv/matrix_core.hpp"
#include "tsylv/tensor_kit.hpp"

namespace {

using namespace tsylv;
using tsylv::testing::uniform_index;

TEST(Vec, StacksColumns) {
  EXPECT_EQ(vec(DenseMatrix{{1, 2}, {3, 4}}), (Vector{1, 3, 2, 4}));
  EXPECT_EQ(vec(DenseMatrix::identity(2)), (Vector{1, 0, 0, 1}));
  EXPECT_EQ(vec(DenseMatrix{{5, 6, 7}}), (Vector{5, 6, 7}));
}

TEST(Unvec, InvertsVec) {
  EXPECT_EQ(unvec(Vector{1, 3, 2, 4}, 2, 2), (DenseMatrix{{1, 2}, {3, 4}}));
  EXPECT_EQ(unvec(Vector{1, 0, 0, 1}, 2, 2), DenseMatrix::identity(2));
  EXPECT_EQ(unvec(Vector{5, 6, 7}, 1, 3), (DenseMatrix{{5, 6, 7}}));
  EXPECT_THROW(unvec(Vector{1, 2, 3}, 2, 2), Error);

  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const std::size_t r = uniform_index(rng, 1, 6), c = uniform_index(rng, 1, 6);
    const DenseMatrix m = rng.matrix(r, c);
    EXPECT_EQ(unvec(vec(m), r, c), m);
  }
}

TEST(Kron, Examples) {
  const DenseMatrix b{{1, 2}, {3, 4}};
  EXPECT_EQ(kron(DenseMatrix::identity(2), b),
            (DenseMatrix{{1, 2, 0, 0}, {3, 4, 0, 0}, {0, 0, 1, 2}, {0, 0, 3, 4}}));
  EXPECT_EQ(kron(DenseMatrix{{2}}, DenseMatrix{{1, 1}}), (DenseMatrix{{2, 2}}));
  EXPECT_EQ(kron(DenseMatrix{{0, 1}, {1, 0}}, DenseMatrix::identity(2)),
            (DenseMatrix{{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}}));
}

TEST(Kron, MatchesBlockDefinitionEntrywise) {
  Rng rng(4);
  const DenseMatrix a = rng.matrix(2, 3), b = rng.matrix(3, 2);
  const DenseMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 6u);
  ASSERT_EQ(k.cols(), 6u);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(k(i * 3 + r, j * 2 + c), a(i, j) * b(r, c));
}

TEST(Permutation, Examples) {
  const PermutationMap p1 = perm_build(1, 4);
  EXPECT_EQ(perm_dense(p1), DenseMatrix::identity(4));

  const PermutationMap p22 = perm_build(2, 2);
  EXPECT_EQ(perm_apply(p22, Vector{1, 2, 3, 4}), (Vector{1, 3, 2, 4}));
  EXPECT_EQ(perm_dense(p22),
            (DenseMatrix{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}));
  EXPECT_EQ(perm_apply(p22, Vector(4, 0.0)), Vector(4, 0.0));
  EXPECT_EQ(perm_apply(perm_build(1, 3), Vector{7, 8, 9}), (Vector{7, 8, 9}));

  // P_23^T P_23 = I with P_23^T = P_32.
  const DenseMatrix p23 = perm_dense(perm_build(2, 3));
  const DenseMatrix p32 = perm_dense(perm_build(3, 2));
  EXPECT_EQ(p23.transpose(), p32);
  EXPECT_EQ(p32 * p23, DenseMatrix::identity(6));

  EXPECT_THROW(perm_apply(p22, Vector{1, 2, 3}), Error);
  EXPECT_THROW(perm_build(0, 2), Error);
}

TEST(Permutation, MatchesDefiningStackOfUnitVectors) {
  // P_mn = [I_m (x) e_1n^T; ...; I_m (x) e_nn^T], built literally.
  for (std::size_t m = 1; m <= 4; ++m) {
    for (std::size_t n = 1; n <= 4; ++n) {
      DenseMatrix stacked(m * n, m * n);
      for (std::size_t j = 0; j < n; ++j) {
        DenseMatrix e(1, n);
        e(0, j) = 1.0;
        const DenseMatrix block = kron(DenseMatrix::identity(m), e);
        for (std::size_t r = 0; r < m; ++r)
          for (std::size_t c = 0; c < m * n; ++c) stacked(j * m + r, c) = block(r, c);
      }
      EXPECT_EQ(perm_dense(perm_build(m, n)), stacked) << m << "x" << n;
    }
  }
}

TEST(Permutation, DenseAgreesWithApplyAndIsAPermutation) {
  Rng rng(8);
  for (std::size_t m = 1; m <= 4; ++m) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const PermutationMap p = perm_build(m, n);
      const DenseMatrix d = perm_dense(p);
      for (std::size_t i = 0; i < d.rows(); ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < d.cols(); ++j) {
          row += d(i, j);
          col += d(j, i);
        }
        EXPECT_EQ(row, 1.0);
        EXPECT_EQ(col, 1.0);
      }
      const DenseMatrix v = rng.matrix(m * n, 1);
      const Vector x(v.entries().begin(), v.entries().end());
      EXPECT_EQ(d * std::span<const double>(x), perm_apply(p, x));
      EXPECT_EQ(perm_transpose(p), perm_build(n, m));
    }
  }
}

TEST(Permutation, RowAndColumnHelpersMatchDenseProducts) {
  Rng rng(9);
  const PermutationMap p = perm_build(3, 2);
  const DenseMatrix m = rng.matrix(6, 4);
  EXPECT_EQ(perm_rows(p, m), perm_dense(p) * m);
  const DenseMatrix w = rng.matrix(4, 6);
  EXPECT_EQ(perm_cols_transposed(w, p), w * perm_dense(p).transpose());
}

// Randomized identities; the acceptance suite repeats these at larger counts.
TEST(Identities, VecOfTripleProduct) {
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = uniform_index(rng, 1, 4), n = uniform_index(rng, 1, 4);
    const std::size_t p = uniform_index(rng, 1, 4), q = uniform_index(rng, 1, 4);
    const DenseMatrix a = rng.matrix(m, n), b = rng.matrix(n, p), c = rng.matrix(p, q);
    const Vector lhs = vec(a * b * c);
    const Vector rhs = kron(c.transpose(), a) * std::span<const double>(vec(b));
    EXPECT_LE(tsylv::testing::max_abs_diff(lhs, rhs), 1e-12);
  }
}

TEST(Identities, MixedProduct) {
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = uniform_index(rng, 1, 4), n = uniform_index(rng, 1, 4);
    const std::size_t p = uniform_index(rng, 1, 4), q = uniform_index(rng, 1, 4);
    const std::size_t l = uniform_index(rng, 1, 4), r = uniform_index(rng, 1, 4);
    const DenseMatrix a = rng.matrix(m, n), b = rng.matrix(p, q);
    const DenseMatrix c = rng.matrix(n, l), d = rng.matrix(q, r);
    EXPECT_LE(max_abs(kron(a, b) * kron(c, d) - kron(a * c, b * d)), 1e-12);
  }
}

TEST(Identities, CommutationProperties) {
  Rng rng(14);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = uniform_index(rng, 1, 4), n = uniform_index(rng, 1, 4);
    const std::size_t p = uniform_index(rng, 1, 4), q = uniform_index(rng, 1, 4);
    const DenseMatrix pmn = perm_dense(perm_build(m, n));
    EXPECT_EQ(pmn.transpose(), perm_dense(perm_build(n, m)));
    EXPECT_EQ(pmn.transpose() * pmn, DenseMatrix::identity(m * n));
    EXPECT_EQ(pmn * pmn.transpose(), DenseMatrix::identity(m * n));
    const DenseMatrix a = rng.matrix(m, n), b = rng.matrix(p, q);
    EXPECT_EQ(vec(a), perm_apply(perm_build(m, n), vec(a.transpose())));
    EXPECT_EQ(perm_dense(perm_build(m, p)) * kron(a, b) * perm_dense(perm_build(n, q)).transpose(),
              kron(b, a));
  }
}

TEST(Identities, KroneckerSpectrumIsPairwiseProducts) {
  Rng rng(15);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = uniform_index(rng, 1, 3), n = uniform_index(rng, 1, 3);
    const DenseMatrix a = rng.matrix(m, m), b = rng.matrix(n, n);
    const auto la = eigenvalues(a), lb = eigenvalues(b);
    std::vector<std::complex<double>> products;
    for (auto x : la)
      for (auto y : lb) products.push_back(x * y);
    EXPECT_LE(tsylv::testing::matched_max_distance(eigenvalues(kron(a, b)), products), 1e-6);
  }
}

}  // namespace
