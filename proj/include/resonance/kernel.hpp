#pragma once

// Resonance scoring.
//
//   S = (E1 + E2 + 2 Re<psi1, psi2>) * sqrt(E1 * E2) / (E1 + E2)^2
//
// which equals the interference form
//
//   S = 1/2 * sum|psi1 + psi2|^2 / sum(|psi1|^2 + |psi2|^2) * 2 sqrt(E1 E2) / (E1 + E2)
//
// with S = 0 when E1 + E2 = 0. One pass accumulates the three terms E1, E2
// and Re<psi1, psi2> = sum A1 A2 cos(phi1 - phi2) in double precision, no
// matter what precision the inputs are stored in.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "resonance/core_types.hpp"
#include "resonance/error.hpp"

namespace resonance {

enum class KernelKind { Scalar, Vectorized };

/// True when the vectorized kernel was compiled in.
inline constexpr bool kVectorizedAvailable =
#if defined(RESONANCE_ENABLE_VECTORIZED)
    true;
#else
    false;
#endif

constexpr std::string_view to_string(KernelKind k) noexcept {
  return k == KernelKind::Scalar ? "scalar" : "vectorized";
}

[[nodiscard]] inline KernelKind parse_kernel_kind(std::string_view s) {
  if (s == "scalar") return KernelKind::Scalar;
  if (s == "vectorized") return KernelKind::Vectorized;
  throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + std::string(s) + "'");
}

struct EnergyPair {
  double e1 = 0.0;
  double e2 = 0.0;
};

/// The three accumulators of one comparison.
struct ResonanceTerms {
  EnergyPair energy;
  double inner_re = 0.0;
};

namespace detail {

template <PatternLike P1, PatternLike P2>
void require_same_dim(const P1& p1, const P2& p2) {
  if (p1.size() != p2.size()) {
    throw Error(ErrorCode::DimensionMismatch, "patterns have dimensions " +
                                                  std::to_string(p1.size()) + " and " +
                                                  std::to_string(p2.size()));
  }
}

// Fixed left-to-right order; bit-stable across runs.
template <PatternLike P1, PatternLike P2>
ResonanceTerms accumulate_scalar(const P1& p1, const P2& p2) noexcept {
  const auto a1 = p1.amplitude();
  const auto f1 = p1.phase();
  const auto a2 = p2.amplitude();
  const auto f2 = p2.phase();
  double e1 = 0.0;
  double e2 = 0.0;
  double re = 0.0;
  const std::size_t n = p1.size();
  for (std::size_t x = 0; x < n; ++x) {
    const double amp1 = static_cast<double>(a1[x]);
    const double amp2 = static_cast<double>(a2[x]);
    const double delta = static_cast<double>(f1[x]) - static_cast<double>(f2[x]);
    e1 += amp1 * amp1;
    e2 += amp2 * amp2;
    re += amp1 * amp2 * std::cos(delta);
  }
  return {{e1, e2}, re};
}

#if defined(RESONANCE_ENABLE_VECTORIZED)

inline constexpr std::size_t kLanes = 8;

// Branch-free cosine for |d| < 2pi: reduce to [-pi, pi], evaluate cos(d/2)
// by its Taylor series through degree 22 (truncation < 1e-19 on
// [-pi/2, pi/2]), then apply cos d = 2 cos^2(d/2) - 1.
inline double cos_poly(double d) noexcept {
  // (-1)^k / (2k)!
  constexpr double kCoef[] = {
      1.0,
      -1.0 / 2.0,
      1.0 / 24.0,
      -1.0 / 720.0,
      1.0 / 40320.0,
      -1.0 / 3628800.0,
      1.0 / 479001600.0,
      -1.0 / 87178291200.0,
      1.0 / 20922789888000.0,
      -1.0 / 6402373705728000.0,
      1.0 / 2432902008176640000.0,
      -1.0 / 1124000727777607680000.0,
  };
  d = d > kPi ? d - kTwoPi : d;
  d = d < -kPi ? d + kTwoPi : d;
  const double h = 0.5 * d;
  const double y = h * h;
  double c = kCoef[11];
  for (int k = 10; k >= 0; --k) c = c * y + kCoef[k];
  return 2.0 * c * c - 1.0;
}

// kLanes independent accumulators over fixed-width blocks; the block loop is
// free of calls and branches so the compiler can map it onto SIMD registers.
template <PatternLike P1, PatternLike P2>
ResonanceTerms accumulate_vectorized(const P1& p1, const P2& p2) noexcept {
  const auto a1 = p1.amplitude();
  const auto f1 = p1.phase();
  const auto a2 = p2.amplitude();
  const auto f2 = p2.phase();
  std::array<double, kLanes> e1{};
  std::array<double, kLanes> e2{};
  std::array<double, kLanes> re{};
  const std::size_t n = p1.size();
  const std::size_t blocked = n - n % kLanes;
  for (std::size_t base = 0; base < blocked; base += kLanes) {
    for (std::size_t j = 0; j < kLanes; ++j) {
      const double amp1 = static_cast<double>(a1[base + j]);
      const double amp2 = static_cast<double>(a2[base + j]);
      const double c = cos_poly(static_cast<double>(f1[base + j]) - static_cast<double>(f2[base + j]));
      e1[j] += amp1 * amp1;
      e2[j] += amp2 * amp2;
      re[j] += amp1 * amp2 * c;
    }
  }
  for (std::size_t x = blocked; x < n; ++x) {
    const double amp1 = static_cast<double>(a1[x]);
    const double amp2 = static_cast<double>(a2[x]);
    const double c = cos_poly(static_cast<double>(f1[x]) - static_cast<double>(f2[x]));
    e1[0] += amp1 * amp1;
    e2[0] += amp2 * amp2;
    re[0] += amp1 * amp2 * c;
  }
  ResonanceTerms t;
  for (std::size_t j = 0; j < kLanes; ++j) {
    t.energy.e1 += e1[j];
    t.energy.e2 += e2[j];
    t.inner_re += re[j];
  }
  return t;
}

#endif

}  // namespace detail

/// Sum of A(x)^2; the phase drops out of |psi(x)|^2.
template <PatternLike P>
[[nodiscard]] double energy(const P& p) noexcept {
  double e = 0.0;
  for (auto a : p.amplitude()) {
    const double amp = static_cast<double>(a);
    e += amp * amp;
  }
  return e;
}

/// Re<psi1, psi2> = sum A1 A2 cos(phi1 - phi2).
template <PatternLike P1, PatternLike P2>
[[nodiscard]] double inner_re(const P1& p1, const P2& p2) {
  detail::require_same_dim(p1, p2);
  return detail::accumulate_scalar(p1, p2).inner_re;
}

template <PatternLike P1, PatternLike P2>
[[nodiscard]] ResonanceTerms resonance_terms(const P1& p1, const P2& p2,
                                             KernelKind kind = KernelKind::Scalar) {
  detail::require_same_dim(p1, p2);
  if (kind == KernelKind::Vectorized) {
#if defined(RESONANCE_ENABLE_VECTORIZED)
    return detail::accumulate_vectorized(p1, p2);
#else
    throw Error(ErrorCode::Unsupported, "vectorized kernel not built");
#endif
  }
  return detail::accumulate_scalar(p1, p2);
}

/// Compact-form score without clamping. Rounding can leave it an ulp or so
/// outside [0, 1].
[[nodiscard]] inline double raw_score(const ResonanceTerms& t) noexcept {
  const double sum = t.energy.e1 + t.energy.e2;
  if (sum == 0.0) return 0.0;
  return (sum + 2.0 * t.inner_re) * std::sqrt(t.energy.e1 * t.energy.e2) / (sum * sum);
}

[[nodiscard]] inline double score_from_terms(const ResonanceTerms& t) noexcept {
  return std::clamp(raw_score(t), 0.0, 1.0);
}

/// Resonance score S in [0, 1].
template <PatternLike P1, PatternLike P2>
[[nodiscard]] double resonance(const P1& p1, const P2& p2, KernelKind kind = KernelKind::Scalar) {
  return score_from_terms(resonance_terms(p1, p2, kind));
}

/// Scores every corpus entry against one query. Throws DimensionMismatch on
/// the first entry whose dimension differs.
template <PatternLike Q, class Range>
[[nodiscard]] std::vector<double> resonance_batch(const Q& query, const Range& corpus,
                                                  KernelKind kind = KernelKind::Scalar) {
  std::vector<double> scores;
  if constexpr (requires { corpus.size(); }) scores.reserve(corpus.size());
  for (const auto& p : corpus) {
    scores.push_back(resonance(query, p, kind));
  }
  return scores;
}

}  // namespace resonance
