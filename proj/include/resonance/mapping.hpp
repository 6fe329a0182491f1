#pragma once

// Bridges real-valued embeddings to wave patterns, plus the cosine baseline
// and the [0, 1] distance normalizations used by the evaluations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "resonance/core_types.hpp"
#include "resonance/error.hpp"

namespace resonance {

class RealVector {
 public:
  explicit RealVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorCode::LengthMismatch, "vector dimension must be at least 1");
    for (std::size_t x = 0; x < values_.size(); ++x) {
      if (!std::isfinite(values_[x])) {
        throw Error(ErrorCode::NonFiniteValue, "non-finite value at index " + std::to_string(x));
      }
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  std::vector<double> values_;
};

struct DistancePair {
  double d_cos = 0.0;
  double d_res = 0.0;
};

/// A(x) = |v(x)|; phi(x) = 0 where v(x) >= 0, otherwise the canonical
/// anti-phase value -pi (pi wrapped into [-pi, pi)).
[[nodiscard]] inline WavePattern sign_phase(const RealVector& v) {
  std::vector<double> amp(v.size());
  std::vector<double> ph(v.size());
  for (std::size_t x = 0; x < v.size(); ++x) {
    amp[x] = std::fabs(v[x]);
    ph[x] = v[x] >= 0.0 ? 0.0 : wrap_phase(kPi);
  }
  return WavePattern::validate(amp, ph);
}

/// phi(x) = 0 everywhere; only defined for vectors without negative entries.
[[nodiscard]] inline WavePattern zero_phase(const RealVector& v) {
  for (std::size_t x = 0; x < v.size(); ++x) {
    if (v[x] < 0.0) {
      throw Error(ErrorCode::NegativeAmplitude,
                  "zero-phase mapping needs non-negative entries; v[" + std::to_string(x) +
                      "] = " + std::to_string(v[x]));
    }
  }
  std::vector<double> amp(v.values().begin(), v.values().end());
  return WavePattern::validate(amp, std::vector<double>(v.size(), 0.0));
}

/// Amplitude projection A of a pattern, the phase-blind input of the cosine
/// baseline.
[[nodiscard]] inline RealVector amplitude_vector(const WavePattern& p) {
  return RealVector(std::vector<double>(p.amplitude().begin(), p.amplitude().end()));
}

[[nodiscard]] inline double cosine(const RealVector& u, const RealVector& v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vectors have dimensions " + std::to_string(u.size()) +
                                                  " and " + std::to_string(v.size()));
  }
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t x = 0; x < u.size(); ++x) {
    dot += u[x] * v[x];
    uu += u[x] * u[x];
    vv += v[x] * v[x];
  }
  if (uu == 0.0 || vv == 0.0) throw Error(ErrorCode::ZeroNorm, "cosine of a zero-norm vector");
  const double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, -1.0, 1.0);
}

/// d_cos = (1 - cosine) / 2, d_res = 1 - S.
[[nodiscard]] inline DistancePair to_distances(double cos_sim, double res_score) {
  if (!(cos_sim >= -1.0 && cos_sim <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "cosine similarity " + std::to_string(cos_sim) +
                                           " outside [-1, 1]");
  }
  if (!(res_score >= 0.0 && res_score <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "resonance score " + std::to_string(res_score) +
                                           " outside [0, 1]");
  }
  return {(1.0 - cos_sim) / 2.0, 1.0 - res_score};
}

}  // namespace resonance
