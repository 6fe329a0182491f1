#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "resonance/kernel.hpp"
#include "resonance/mapping.hpp"

using namespace resonance;

TEST(Mapping, SignPhase) {
  const auto p = sign_phase(RealVector({1.5, -2.0, 0.0}));
  EXPECT_EQ(p.amplitude()[0], 1.5);
  EXPECT_EQ(p.amplitude()[1], 2.0);
  EXPECT_EQ(p.amplitude()[2], 0.0);
  EXPECT_EQ(p.phase()[0], 0.0);
  EXPECT_EQ(p.phase()[1], -kPi);
  EXPECT_EQ(p.phase()[2], 0.0);
}

TEST(Mapping, ZeroPhase) {
  const auto p = zero_phase(RealVector({0.25, 3.0}));
  EXPECT_EQ(p.amplitude()[1], 3.0);
  EXPECT_EQ(p.phase()[0], 0.0);
  try {
    (void)zero_phase(RealVector({1.0, -0.5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeAmplitude);
  }
}

TEST(Mapping, RealVectorRejectsBadInput) {
  EXPECT_THROW(RealVector({}), Error);
  EXPECT_THROW(RealVector({1.0, NAN}), Error);
}

TEST(Mapping, SignPhasePreservesRealValues) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  std::vector<double> v(64);
  for (double& x : v) x = n(rng);
  const auto p = sign_phase(RealVector(v));
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(p.amplitude()[i] * std::cos(p.phase()[i]), v[i], 1e-15);
  }
}

TEST(Mapping, CosineAndErrors) {
  EXPECT_NEAR(cosine(RealVector({1.0, 0.0}), RealVector({1.0, 1.0})), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(cosine(RealVector({2.0, 0.0}), RealVector({-3.0, 0.0})), -1.0);
  try {
    (void)cosine(RealVector({0.0, 0.0}), RealVector({1.0, 1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroNorm);
  }
  try {
    (void)cosine(RealVector({1.0}), RealVector({1.0, 1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Mapping, CosineReductionForEqualNorms) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const std::size_t dim = 1 + static_cast<std::size_t>(i % 50);
    std::vector<double> u(dim);
    std::vector<double> v(dim);
    for (auto& x : u) x = d(rng);
    for (auto& x : v) x = d(rng);
    double nu = 0;
    double nv = 0;
    for (std::size_t k = 0; k < dim; ++k) {
      nu += u[k] * u[k];
      nv += v[k] * v[k];
    }
    for (auto& x : v) x *= std::sqrt(nu / nv);
    // Cosine computed here directly, not through the library.
    double dot = 0;
    for (std::size_t k = 0; k < dim; ++k) dot += u[k] * v[k];
    const double cos_theta = dot / nu;
    EXPECT_NEAR(resonance::resonance(sign_phase(RealVector(u)), sign_phase(RealVector(v))), (1.0 + cos_theta) / 2.0, 1e-9);
  }
}

TEST(Mapping, Distances) {
  const auto d = to_distances(0.5, 0.75);
  EXPECT_EQ(d.d_cos, 0.25);
  EXPECT_EQ(d.d_res, 0.25);
  EXPECT_EQ(to_distances(-1.0, 0.0).d_cos, 1.0);
  EXPECT_EQ(to_distances(1.0, 1.0).d_res, 0.0);
  for (auto [c, s] : {std::pair{1.5, 0.5}, std::pair{0.0, -0.1}, std::pair{0.0, 1.1}}) {
    try {
      (void)to_distances(c, s);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
    }
  }
}
