#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "resonance/kernel.hpp"
#include "resonance/mapping.hpp"
#include "resonance/operators.hpp"

using namespace resonance;

namespace {

// Equal as complex vectors: phases compared on the circle.
void expect_same_wave(const WavePattern& a, const WavePattern& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a.amplitude()[i], b.amplitude()[i], tol);
    EXPECT_NEAR(oracle::wrap(a.phase()[i] - b.phase()[i]), 0.0, tol);
  }
}

}  // namespace

TEST(Operators, NegIsAnInvolution) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto p = oracle::random_pattern(rng, 32);
    const auto neg = OperatorSpec::neg();
    expect_same_wave(apply(neg, apply(neg, p)), p, 1e-12);
    EXPECT_LE(resonance::resonance(p, apply(neg, p)), 1e-12);
  }
}

TEST(Operators, ShiftHasAnInverse) {
  std::mt19937_64 rng(2);
  for (double delta : {0.1, kPi / 4.0, 1.0, 3.0}) {
    const auto p = oracle::random_pattern(rng, 32);
    expect_same_wave(rotate_phase(apply(OperatorSpec::shift(delta), p), -delta), p, 1e-12);
  }
}

TEST(Operators, ScoresAgainstTheBase) {
  std::mt19937_64 rng(3);
  const auto p = oracle::random_pattern(rng, 128, 2.0);
  EXPECT_NEAR(resonance::resonance(p, apply(OperatorSpec::shift(kPi / 2.0), p)), 0.5, 1e-12);
  EXPECT_NEAR(resonance::resonance(p, apply(OperatorSpec::shift(kPi / 4.0), p)), (1.0 + std::cos(kPi / 4.0)) / 2.0, 1e-12);
  EXPECT_NEAR(resonance::resonance(p, apply(OperatorSpec::int_up(2.0), p)), 0.72, 1e-12);
  EXPECT_NEAR(resonance::resonance(p, apply(OperatorSpec::int_down(0.5), p)), 0.72, 1e-12);
  const double c = kDefaultIntDown;
  EXPECT_NEAR(resonance::resonance(p, apply(OperatorSpec::int_down(), p)), c * (1 + c) * (1 + c) / ((1 + c * c) * (1 + c * c)),
              1e-12);
}

TEST(Operators, DefaultScoresAreDistinctAndNegIsLowest) {
  std::mt19937_64 rng(4);
  const auto p = oracle::random_pattern(rng, 64);
  std::vector<double> s;
  for (const auto& op : default_operators()) s.push_back(resonance::resonance(p, apply(op, p)));
  ASSERT_EQ(s.size(), 4u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) EXPECT_GT(std::fabs(s[i] - s[j]), 0.01) << i << ' ' << j;
  }
  EXPECT_LT(s[0], s[1]);
  EXPECT_LT(s[0], s[2]);
  EXPECT_LT(s[0], s[3]);
}

TEST(Operators, PhaseOperatorsLeaveAmplitudesAlone) {
  std::mt19937_64 rng(5);
  const auto p = oracle::random_pattern(rng, 64);
  for (const auto& op : {OperatorSpec::neg(), OperatorSpec::shift()}) {
    const auto q = apply(op, p);
    EXPECT_EQ(cosine(amplitude_vector(p), amplitude_vector(q)), 1.0);
  }
}

TEST(Operators, Validation) {
  for (const auto& bad : {OperatorSpec::shift(0.0), OperatorSpec::shift(kPi), OperatorSpec::int_up(1.0),
                          OperatorSpec::int_up(0.5), OperatorSpec::int_down(1.0), OperatorSpec::int_down(0.0)}) {
    try {
      validate_operator(bad);
      ADD_FAILURE() << to_string(bad);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidOperator);
    }
  }
}

TEST(Operators, ParseAndFormat) {
  EXPECT_EQ(parse_operator("neg"), OperatorSpec::neg());
  EXPECT_EQ(parse_operator("shift"), OperatorSpec::shift());
  EXPECT_EQ(parse_operator("shift:1.5"), OperatorSpec::shift(1.5));
  EXPECT_EQ(parse_operator("int_up:3"), OperatorSpec::int_up(3.0));
  EXPECT_EQ(parse_operator("int_down"), OperatorSpec::int_down());
  EXPECT_EQ(to_string(OperatorSpec::int_up(2.0)), "int_up:2");
  EXPECT_EQ(to_string(OperatorSpec::neg()), "neg");
  for (const char* bad : {"flip", "neg:1", "shift:", "shift:abc", "int_up:0.5", "shift:4"}) {
    EXPECT_THROW((void)parse_operator(bad), Error) << bad;
  }
}

TEST(Operators, PhaseSweepWithUnitAmplitudes) {
  const auto p = WavePattern::validate(std::vector<double>(16, 1.0), std::vector<double>(16, 0.0));
  for (int i = 0; i <= 64; ++i) {
    const double delta = -kPi + 2.0 * kPi * i / 64.0;
    EXPECT_NEAR(resonance::resonance(p, rotate_phase(p, delta)), (1.0 + std::cos(delta)) / 2.0, 1e-12) << delta;
  }
}
