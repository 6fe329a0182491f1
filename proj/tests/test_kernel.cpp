#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "resonance/kernel.hpp"
#include "resonance/mapping.hpp"
#include "resonance/operators.hpp"

using namespace resonance;
using V = std::vector<double>;

namespace {

WavePattern wp(V a, V f) { return WavePattern::validate(a, f); }

std::vector<KernelKind> kernels() {
  std::vector<KernelKind> k{KernelKind::Scalar};
  if (kVectorizedAvailable) k.push_back(KernelKind::Vectorized);
  return k;
}

}  // namespace

TEST(Kernel, EnergyExample) {
  EXPECT_EQ(energy(wp({1.0, 2.0}, {0.3, -1.0})), 5.0);
}

TEST(Kernel, SpotValues) {
  for (auto k : kernels()) {
    EXPECT_NEAR(resonance::resonance(wp({1.0}, {0.0}), wp({2.0}, {0.0}), k), 0.72, 1e-12);
    EXPECT_NEAR(resonance::resonance(wp({1.0}, {0.0}), wp({2.0}, {kPi}), k), 0.08, 1e-12);
    EXPECT_NEAR(resonance::resonance(wp({1.0}, {0.0}), wp({1.0}, {kPi / 2.0}), k), 0.5, 1e-12);
    EXPECT_EQ(resonance::resonance(wp({1.0, 1.0}, {0.0, 0.0}), wp({1.0, 1.0}, {kPi, kPi}), k), 0.0);
  }
}

TEST(Kernel, ZeroEnergyScoresZero) {
  const auto z = wp({0.0, 0.0}, {0.0, 1.0});
  EXPECT_EQ(resonance::resonance(z, z), 0.0);
  EXPECT_EQ(resonance::resonance(z, wp({1.0, 0.0}, {0.0, 0.0})), 0.0);
}

TEST(Kernel, DimensionMismatchThrows) {
  try {
    (void)resonance::resonance(wp({1.0}, {0.0}), wp({1.0, 1.0}, {0.0, 0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Kernel, SelfMatchIsExactlyOne) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const auto p = oracle::random_pattern(rng, 1 + i % 40, 4.0);
    if (energy(p) == 0.0) continue;
    EXPECT_EQ(resonance::resonance(p, p), 1.0);
  }
}

TEST(Kernel, TermsMatchComplexOracle) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 300; ++i) {
    const std::size_t dim = 1 + static_cast<std::size_t>(i % 70);
    const auto p = oracle::random_pattern(rng, dim, 3.0);
    const auto q = oracle::random_pattern(rng, dim, 3.0);
    const double e = oracle::energy(p);
    EXPECT_NEAR(energy(p), e, 1e-12 * e + 1e-15);
    EXPECT_NEAR(inner_re(p, q), oracle::inner_re(p, q), 1e-11 * (e + oracle::energy(q)));
    for (auto k : kernels()) {
      const auto t = resonance_terms(p, q, k);
      EXPECT_NEAR(t.energy.e1, e, 1e-12 * e + 1e-15);
      EXPECT_NEAR(resonance::resonance(p, q, k), oracle::score(p, q), 1e-9);
    }
  }
}

TEST(Kernel, ClosedFormForScaledCopy) {
  std::mt19937_64 rng(4);
  const auto p = oracle::random_pattern(rng, 64, 2.0);
  for (double c : {0.1, 0.5, 1.0, 2.0, 3.0, 10.0}) {
    V scaled(p.amplitude().begin(), p.amplitude().end());
    for (double& a : scaled) a *= c;
    const auto q = WavePattern::validate(scaled, p.phase());
    const double expected = c * (1 + c) * (1 + c) / ((1 + c * c) * (1 + c * c));
    EXPECT_NEAR(resonance::resonance(p, q), expected, 1e-12) << c;
    EXPECT_NEAR(resonance::resonance(p, rotate_phase(q, kPi)), c * (1 - c) * (1 - c) / ((1 + c * c) * (1 + c * c)), 1e-12);
  }
}

TEST(Kernel, BatchMatchesPairwise) {
  std::mt19937_64 rng(6);
  const auto q = oracle::random_pattern(rng, 33);
  std::vector<WavePattern> corpus;
  for (int i = 0; i < 50; ++i) corpus.push_back(oracle::random_pattern(rng, 33));
  for (auto k : kernels()) {
    const auto scores = resonance_batch(q, corpus, k);
    ASSERT_EQ(scores.size(), corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) EXPECT_EQ(scores[i], resonance::resonance(q, corpus[i], k));
  }
  corpus.push_back(oracle::random_pattern(rng, 4));
  EXPECT_THROW((void)resonance_batch(q, corpus), Error);
}

TEST(Kernel, DistanceIsNotAMetric) {
  const auto a = wp({1.0, 1.0}, {0.0, 0.0});
  const auto b = wp({1.0, 1.0}, {kPi / 3, kPi / 3});
  const auto c = wp({1.0, 1.0}, {2 * kPi / 3, 2 * kPi / 3});
  const double dab = 1.0 - resonance::resonance(a, b);
  const double dbc = 1.0 - resonance::resonance(b, c);
  const double dac = 1.0 - resonance::resonance(a, c);
  EXPECT_NEAR(dab, 0.25, 1e-12);
  EXPECT_NEAR(dbc, 0.25, 1e-12);
  EXPECT_NEAR(dac, 0.75, 1e-12);
  EXPECT_GT(dac, dab + dbc);
}

TEST(Kernel, ViewsOverFloatStorageScoreLikeWidenedPatterns) {
  std::mt19937_64 rng(8);
  const auto p = oracle::random_pattern(rng, 17);
  const auto q = quantize(oracle::random_pattern(rng, 17));
  std::vector<float> fa;
  std::vector<float> fp;
  for (std::size_t i = 0; i < q.size(); ++i) {
    fa.push_back(static_cast<float>(q.amplitude()[i]));
    fp.push_back(static_cast<float>(q.phase()[i]));
  }
  const PatternView<float> view{fa, fp};
  EXPECT_EQ(resonance::resonance(p, view), resonance::resonance(p, q));
}

TEST(Kernel, VectorizedAgreesWithScalar) {
  if (!kVectorizedAvailable) GTEST_SKIP() << "vectorized kernel not built";
  std::mt19937_64 rng(9);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t dim = 1 + static_cast<std::size_t>(i % 37);
    const auto p = oracle::random_pattern(rng, dim, 10.0);
    const auto q = oracle::random_pattern(rng, dim, 10.0);
    ASSERT_NEAR(resonance::resonance(p, q, KernelKind::Scalar), resonance::resonance(p, q, KernelKind::Vectorized), 1e-9);
  }
}

#if defined(RESONANCE_ENABLE_VECTORIZED)
TEST(Kernel, PolynomialCosineOverPhaseDifferences) {
  // Differences of two wrapped phases lie in (-2pi, 2pi).
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> d(-2.0 * kPi, 2.0 * kPi);
  for (int i = 0; i < 100000; ++i) {
    const double x = d(rng);
    ASSERT_NEAR(detail::cos_poly(x), std::cos(x), 1e-14) << x;
  }
  EXPECT_NEAR(detail::cos_poly(kPi), -1.0, 1e-15);
  EXPECT_NEAR(detail::cos_poly(-kPi), -1.0, 1e-15);
}
#endif

TEST(Kernel, ParseKernelKind) {
  EXPECT_EQ(parse_kernel_kind("scalar"), KernelKind::Scalar);
  EXPECT_EQ(parse_kernel_kind("vectorized"), KernelKind::Vectorized);
  EXPECT_THROW((void)parse_kernel_kind("simd"), Error);
}
