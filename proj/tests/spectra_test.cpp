#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <vector>

#include "test_support.hpp"
#include "tsylv/spectra.hpp"

namespace {

using namespace tsylv;
using C = std::complex<double>;
using tsylv::testing::matched_max_distance;
using tsylv::testing::uniform_index;

Spectrum make(std::vector<C> values) {
  const std::size_t n = values.size();
  return Spectrum{std::move(values), n};
}

TEST(SpectrumOf, Examples) {
  const Spectrum a = spectrum(DenseMatrix{{0.5}});
  ASSERT_EQ(a.values.size(), 1u);
  EXPECT_EQ(a.values[0], C(0.5));
  EXPECT_EQ(a.source_dim, 1u);

  const Spectrum b = spectrum(DenseMatrix{{0.5, 0.5}, {0, 0}});
  EXPECT_LE(matched_max_distance(b.values, {C(0.5), C(0.0)}), 1e-14);

  const Spectrum c = spectrum(DenseMatrix::identity(2));
  EXPECT_LE(matched_max_distance(c.values, {C(1.0), C(1.0)}), 1e-14);
}

TEST(SpectrumOf, LengthAndConjugateClosure) {
  Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = uniform_index(rng, 1, 8);
    const Spectrum sp = spectrum(rng.matrix(n, n));
    ASSERT_EQ(sp.values.size(), n);
    EXPECT_EQ(sp.source_dim, n);
    std::vector<C> conj;
    for (auto v : sp.values) conj.push_back(std::conj(v));
    EXPECT_LE(matched_max_distance(sp.values, conj), 1e-10);
  }
}

TEST(ReciprocalFree, Examples) {
  const auto half = is_reciprocal_free(make({C(0.5)}), 1e-8);
  EXPECT_TRUE(half.free);
  EXPECT_DOUBLE_EQ(half.margin, 0.75);
  EXPECT_FALSE(half.witness);

  const auto one = is_reciprocal_free(make({C(1.0), C(3.0)}), 1e-8);
  EXPECT_FALSE(one.free);
  ASSERT_TRUE(one.witness);
  EXPECT_EQ(one.witness->i, 0u);
  EXPECT_EQ(one.witness->j, 0u);
  EXPECT_EQ(one.witness->lambda_i, C(1.0));
  EXPECT_EQ(one.witness->lambda_j, C(1.0));

  const auto pair = is_reciprocal_free(make({C(2.0), C(0.5)}), 1e-8);
  EXPECT_FALSE(pair.free);
  ASSERT_TRUE(pair.witness);
  EXPECT_EQ(pair.witness->i, 0u);
  EXPECT_EQ(pair.witness->j, 1u);
  EXPECT_EQ(pair.witness->lambda_i * pair.witness->lambda_j, C(1.0));
  EXPECT_EQ(pair.margin, 0.0);
}

TEST(ReciprocalFree, ZeroIsHarmlessAndComplexProductsUseModulus) {
  EXPECT_TRUE(is_reciprocal_free(make({C(0.0), C(0.0)}), 1e-8).free);
  // i * (-i) = 1
  const auto rot = is_reciprocal_free(make({C(0, 1), C(0, -1)}), 1e-8);
  EXPECT_FALSE(rot.free);
  EXPECT_EQ(rot.witness->i, 0u);
  EXPECT_EQ(rot.witness->j, 1u);
  // |e^{it}|^2 = 1 for the conjugate pair of a rotation
  const Spectrum r = spectrum(DenseMatrix{{0.6, -0.8}, {0.8, 0.6}});
  EXPECT_FALSE(is_reciprocal_free(r).free);
}

TEST(ReciprocalFree, UnitModulusRealEigenvalueNeverFree) {
  Rng rng(33);
  for (int t = 0; t < 50; ++t) {
    std::vector<C> v;
    const std::size_t n = uniform_index(rng, 0, 4);
    for (std::size_t k = 0; k < n; ++k) v.emplace_back(3.0 * rng.symmetric_unit(), 0.0);
    v.insert(v.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, 0, n)),
             C(rng.next() % 2 ? 1.0 : -1.0));
    const auto r = is_reciprocal_free(make(v), 0.0);
    EXPECT_FALSE(r.free);
    EXPECT_EQ(r.margin, 0.0);
  }
}

TEST(ReciprocalFree, InvariantUnderPermutation) {
  Rng rng(34);
  for (int t = 0; t < 100; ++t) {
    std::vector<C> v;
    const std::size_t n = uniform_index(rng, 1, 6);
    for (std::size_t k = 0; k < n; ++k) v.emplace_back(2.0 * rng.symmetric_unit(), rng.symmetric_unit());
    const double tol = 0.2 * (rng.symmetric_unit() + 1.0);
    const auto base = is_reciprocal_free(make(v), tol);
    std::vector<C> shuffled = v;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n / 2), shuffled.end());
    const auto other = is_reciprocal_free(make(shuffled), tol);
    EXPECT_EQ(base.free, other.free);
    EXPECT_NEAR(base.margin, other.margin, 1e-15);
  }
}

TEST(ReciprocalFree, WitnessAttainsTheMargin) {
  Rng rng(35);
  for (int t = 0; t < 100; ++t) {
    std::vector<C> v;
    const std::size_t n = uniform_index(rng, 1, 5);
    for (std::size_t k = 0; k < n; ++k) v.emplace_back(1.5 * rng.symmetric_unit(), 0.0);
    const auto r = is_reciprocal_free(make(v), 0.5);
    double brute = 1e300;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) brute = std::min(brute, std::abs(v[i] * v[j] - 1.0));
    EXPECT_DOUBLE_EQ(r.margin, brute);
    EXPECT_EQ(r.free, brute > 0.5);
    if (!r.free) {
      EXPECT_DOUBLE_EQ(std::abs(r.witness->lambda_i * r.witness->lambda_j - 1.0), brute);
      EXPECT_EQ(r.witness->lambda_i, v[r.witness->i]);
      EXPECT_EQ(r.witness->lambda_j, v[r.witness->j]);
    }
  }
}

TEST(ReciprocalFree, DefaultToleranceScalesWithSpectralRadius) {
  EXPECT_DOUBLE_EQ(default_reciprocal_tol(make({C(0.0)})), 1e-8);
  EXPECT_DOUBLE_EQ(default_reciprocal_tol(make({C(3.0), C(-1.0)})), 1e-7);
}

TEST(DetCheck, Examples) {
  EXPECT_TRUE(reciprocal_free_det_check(DenseMatrix{{0.5}}, 0.0).free);
  EXPECT_FALSE(reciprocal_free_det_check(DenseMatrix{{1.0}}, 0.0).free);
  EXPECT_FALSE(reciprocal_free_det_check(DenseMatrix{{2.0, 0.0}, {0.0, 0.5}}, 0.0).free);
  EXPECT_THROW(reciprocal_free_det_check(DenseMatrix(2, 3), 0.0), Error);
}

TEST(DetCheck, AgreesWithEigenvalueDecisionAwayFromTheBoundary) {
  Rng rng(36);
  int compared = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = uniform_index(rng, 1, 8);
    const DenseMatrix s = rng.matrix(n, n);
    const Spectrum sp = spectrum(s);
    const auto eig = is_reciprocal_free(sp);
    if (eig.margin < 1e-3) continue;
    ++compared;
    EXPECT_EQ(reciprocal_free_det_check(s, 0.0).free, eig.free);
  }
  EXPECT_GT(compared, 200);
}

TEST(DetCheck, PlantedReciprocalPairsAreCaught) {
  Rng rng(37);
  for (int t = 0; t < 50; ++t) {
    const double lam = 0.5 + 1.5 * (rng.symmetric_unit() + 1.0) / 2.0;
    std::vector<C> values = {C(lam), C(1.0 / lam)};
    const std::size_t extra = uniform_index(rng, 0, 3);
    for (std::size_t k = 0; k < extra; ++k) values.emplace_back(0.3 * rng.symmetric_unit(), 0.0);
    const DenseMatrix s = tsylv::testing::with_spectrum(values, rng);
    EXPECT_FALSE(is_reciprocal_free(spectrum(s)).free);
    EXPECT_FALSE(reciprocal_free_det_check(s, 1e-10).free);
  }
}

}  // namespace
