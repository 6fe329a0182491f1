#pragma once

// WavePattern, PatternId and Hit: the value types shared by every module.
//
// A pattern is the discrete waveform psi(x) = A(x) * exp(i * phi(x)) kept in
// polar form. Amplitudes are non-negative, phases live in the half-open
// interval [-pi, pi). Patterns are immutable once validated.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "resonance/error.hpp"

namespace resonance {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps any finite angle onto its representative in [-pi, pi).
/// +pi canonicalizes to -pi.
[[nodiscard]] inline double wrap_phase(double theta) {
  if (!std::isfinite(theta)) {
    throw Error(ErrorCode::NonFiniteValue, "phase is not finite");
  }
  double r = std::fmod(theta, kTwoPi);  // exact, in (-2pi, 2pi)
  if (r >= kPi) {
    r -= kTwoPi;
  } else if (r < -kPi) {
    r += kTwoPi;
  }
  if (r >= kPi) r = -kPi;
  return r;
}

/// Read access shared by owned patterns and views over stored records.
template <class P>
concept PatternLike = requires(const P& p) {
  { p.size() } -> std::convertible_to<std::size_t>;
  { p.amplitude()[0] } -> std::convertible_to<double>;
  { p.phase()[0] } -> std::convertible_to<double>;
};

/// Non-owning view over amplitude/phase arrays of one precision.
template <class Real>
struct PatternView {
  std::span<const Real> amp;
  std::span<const Real> ph;

  [[nodiscard]] std::size_t size() const noexcept { return amp.size(); }
  [[nodiscard]] std::span<const Real> amplitude() const noexcept { return amp; }
  [[nodiscard]] std::span<const Real> phase() const noexcept { return ph; }
};

class WavePattern {
 public:
  /// Checks the invariants and wraps every phase into [-pi, pi).
  [[nodiscard]] static WavePattern validate(std::span<const double> amplitude,
                                            std::span<const double> phase) {
    if (amplitude.size() != phase.size()) {
      throw Error(ErrorCode::LengthMismatch,
                  "amplitude has " + std::to_string(amplitude.size()) + " entries, phase has " +
                      std::to_string(phase.size()));
    }
    if (amplitude.empty()) {
      throw Error(ErrorCode::LengthMismatch, "pattern dimension must be at least 1");
    }
    WavePattern p;
    p.amplitude_.assign(amplitude.begin(), amplitude.end());
    p.phase_.resize(phase.size());
    for (std::size_t x = 0; x < amplitude.size(); ++x) {
      if (!std::isfinite(amplitude[x]) || !std::isfinite(phase[x])) {
        throw Error(ErrorCode::NonFiniteValue, "non-finite value at index " + std::to_string(x));
      }
      if (amplitude[x] < 0.0) {
        throw Error(ErrorCode::NegativeAmplitude,
                    "amplitude[" + std::to_string(x) + "] = " + std::to_string(amplitude[x]));
      }
      p.phase_[x] = wrap_phase(phase[x]);
    }
    return p;
  }

  [[nodiscard]] static WavePattern validate(const std::vector<double>& amplitude,
                                            const std::vector<double>& phase) {
    return validate(std::span<const double>(amplitude), std::span<const double>(phase));
  }

  [[nodiscard]] std::size_t size() const noexcept { return amplitude_.size(); }
  [[nodiscard]] std::span<const double> amplitude() const noexcept { return amplitude_; }
  [[nodiscard]] std::span<const double> phase() const noexcept { return phase_; }
  [[nodiscard]] PatternView<double> view() const noexcept { return {amplitude_, phase_}; }

  /// Equality on the stored (A, phi) pairs, not on complex values.
  friend bool operator==(const WavePattern&, const WavePattern&) = default;

 private:
  WavePattern() = default;

  std::vector<double> amplitude_;
  std::vector<double> phase_;
};

// ---------------------------------------------------------------------------
// Storage precision. Records keep A and phi as 32-bit floats. float(pi) lies
// above pi, so a phase that rounds onto it is stored as float(-pi), which in
// turn reads back as exactly -pi.

[[nodiscard]] inline float to_storage_amplitude(double a) noexcept {
  return static_cast<float>(a);
}

[[nodiscard]] inline float to_storage_phase(double phi) noexcept {
  float f = static_cast<float>(phi);
  if (static_cast<double>(f) >= kPi) f = static_cast<float>(-kPi);
  return f;
}

[[nodiscard]] inline double from_storage_phase(float f) noexcept {
  double d = static_cast<double>(f);
  return d < -kPi ? -kPi : d;
}

/// The pattern exactly as the store will hand it back.
[[nodiscard]] inline WavePattern quantize(const WavePattern& p) {
  std::vector<double> amp(p.size());
  std::vector<double> ph(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    amp[x] = static_cast<double>(to_storage_amplitude(p.amplitude()[x]));
    ph[x] = from_storage_phase(to_storage_phase(p.phase()[x]));
  }
  return WavePattern::validate(amp, ph);
}

// ---------------------------------------------------------------------------

/// 16 opaque bytes. Ordered lexicographically; text form is 32 lowercase hex digits.
class PatternId {
 public:
  static constexpr std::size_t kSize = 16;
  using Bytes = std::array<std::uint8_t, kSize>;

  constexpr PatternId() noexcept = default;
  constexpr explicit PatternId(const Bytes& bytes) noexcept : bytes_(bytes) {}

  [[nodiscard]] static PatternId from_hex(std::string_view text) {
    if (text.size() != 2 * kSize) {
      throw Error(ErrorCode::InvalidArgument,
                  "pattern id must be 32 hex digits, got " + std::to_string(text.size()));
    }
    auto nibble = [&](char c) -> std::uint8_t {
      if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
      if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
      if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
      throw Error(ErrorCode::InvalidArgument, "invalid hex digit in pattern id");
    };
    Bytes b{};
    for (std::size_t i = 0; i < kSize; ++i) {
      b[i] = static_cast<std::uint8_t>((nibble(text[2 * i]) << 4) | nibble(text[2 * i + 1]));
    }
    return PatternId(b);
  }

  /// Big-endian counter in the low 8 bytes, so id order follows counter order.
  [[nodiscard]] static constexpr PatternId from_counter(std::uint64_t n) noexcept {
    Bytes b{};
    for (std::size_t i = 0; i < 8; ++i) {
      b[kSize - 1 - i] = static_cast<std::uint8_t>(n >> (8 * i));
    }
    return PatternId(b);
  }

  [[nodiscard]] std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(2 * kSize, '0');
    for (std::size_t i = 0; i < kSize; ++i) {
      out[2 * i] = kDigits[bytes_[i] >> 4];
      out[2 * i + 1] = kDigits[bytes_[i] & 0x0f];
    }
    return out;
  }

  [[nodiscard]] constexpr const Bytes& bytes() const noexcept { return bytes_; }

  friend constexpr auto operator<=>(const PatternId&, const PatternId&) = default;

 private:
  Bytes bytes_{};
};

namespace detail {

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> data, std::uint64_t basis) noexcept {
  std::uint64_t h = basis;
  for (std::uint8_t byte : data) {
    h ^= byte;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Deterministic id derived from the pattern's storage bytes (A then phi, as
/// little-endian float32), so identical content always maps to the same id.
[[nodiscard]] inline PatternId content_id(const WavePattern& p) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(p.size() * 8);
  auto put = [&](float f) {
    auto u = std::bit_cast<std::uint32_t>(f);
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
  };
  for (double a : p.amplitude()) put(to_storage_amplitude(a));
  for (double phi : p.phase()) put(to_storage_phase(phi));

  const std::uint64_t hi = detail::mix64(detail::fnv1a64(bytes, 1469598103934665603ULL));
  const std::uint64_t lo = detail::mix64(detail::fnv1a64(bytes, 0x84222325cbf29ce4ULL) ^ p.size());
  PatternId::Bytes b{};
  for (std::size_t i = 0; i < 8; ++i) {
    b[7 - i] = static_cast<std::uint8_t>(hi >> (8 * i));
    b[15 - i] = static_cast<std::uint8_t>(lo >> (8 * i));
  }
  return PatternId(b);
}

struct Hit {
  PatternId id;
  double score = 0.0;

  friend bool operator==(const Hit&, const Hit&) = default;
};

/// Ranking order for hits: higher score first, then lower id.
[[nodiscard]] inline bool ranks_before(const Hit& a, const Hit& b) noexcept {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

}  // namespace resonance

template <>
struct std::hash<resonance::PatternId> {
  std::size_t operator()(const resonance::PatternId& id) const noexcept {
    std::uint64_t h = 0;
    for (std::uint8_t b : id.bytes()) h = (h << 8 | h >> 56) ^ b;
    return static_cast<std::size_t>(resonance::detail::mix64(h));
  }
};
