#pragma once

// Semantic operators as pattern transforms.
//
//   NEG       phi -> wrap(phi + pi)
//   SHIFT     phi -> wrap(phi + delta), the same offset on every dimension
//   INT_UP    A   -> factor * A, factor > 1
//   INT_DOWN  A   -> factor * A, 0 < factor < 1

#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resonance/core_types.hpp"
#include "resonance/error.hpp"

namespace resonance {

enum class OperatorKind { Neg, Shift, IntUp, IntDown };

inline constexpr double kDefaultShift = kPi / 4.0;
inline constexpr double kDefaultIntUp = 2.0;
// 0.5 would give the same score as 2.0 (S(p, cp) == S(p, p/c)), so the
// default down factor is kept off the reciprocal.
inline constexpr double kDefaultIntDown = 0.6;

struct OperatorSpec {
  OperatorKind kind = OperatorKind::Neg;
  double delta = kDefaultShift;  // SHIFT only
  double factor = 1.0;           // INT_UP / INT_DOWN only

  [[nodiscard]] static OperatorSpec neg() { return {OperatorKind::Neg, kDefaultShift, 1.0}; }
  [[nodiscard]] static OperatorSpec shift(double delta = kDefaultShift) {
    return {OperatorKind::Shift, delta, 1.0};
  }
  [[nodiscard]] static OperatorSpec int_up(double factor = kDefaultIntUp) {
    return {OperatorKind::IntUp, kDefaultShift, factor};
  }
  [[nodiscard]] static OperatorSpec int_down(double factor = kDefaultIntDown) {
    return {OperatorKind::IntDown, kDefaultShift, factor};
  }

  friend bool operator==(const OperatorSpec&, const OperatorSpec&) = default;
};

inline void validate_operator(const OperatorSpec& op) {
  switch (op.kind) {
    case OperatorKind::Neg:
      return;
    case OperatorKind::Shift:
      if (!(op.delta > 0.0 && op.delta < kPi)) {
        throw Error(ErrorCode::InvalidOperator, "shift delta must lie in (0, pi)");
      }
      return;
    case OperatorKind::IntUp:
      if (!(op.factor > 1.0) || !std::isfinite(op.factor)) {
        throw Error(ErrorCode::InvalidOperator, "int_up factor must be > 1");
      }
      return;
    case OperatorKind::IntDown:
      if (!(op.factor > 0.0 && op.factor < 1.0)) {
        throw Error(ErrorCode::InvalidOperator, "int_down factor must lie in (0, 1)");
      }
      return;
  }
}

/// Adds delta to every phase. Unlike SHIFT, any finite delta is accepted,
/// which makes it usable for inverse shifts and global phase rotations.
[[nodiscard]] inline WavePattern rotate_phase(const WavePattern& p, double delta) {
  std::vector<double> ph(p.phase().begin(), p.phase().end());
  for (double& phi : ph) phi = wrap_phase(phi + delta);
  return WavePattern::validate(p.amplitude(), ph);
}

[[nodiscard]] inline WavePattern apply(const OperatorSpec& op, const WavePattern& p) {
  validate_operator(op);
  switch (op.kind) {
    case OperatorKind::Neg:
      return rotate_phase(p, kPi);
    case OperatorKind::Shift:
      return rotate_phase(p, op.delta);
    case OperatorKind::IntUp:
    case OperatorKind::IntDown:
      break;
  }
  std::vector<double> amp(p.amplitude().begin(), p.amplitude().end());
  for (double& a : amp) a *= op.factor;
  return WavePattern::validate(amp, p.phase());
}

/// Short operator name as used in CSV rows: neg, shift, int_up, int_down.
[[nodiscard]] inline std::string_view operator_name(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::Neg: return "neg";
    case OperatorKind::Shift: return "shift";
    case OperatorKind::IntUp: return "int_up";
    case OperatorKind::IntDown: return "int_down";
  }
  return "?";
}

/// Canonical text form, e.g. "neg", "shift:0.7854", "int_up:2".
[[nodiscard]] inline std::string to_string(const OperatorSpec& op) {
  std::string out(operator_name(op.kind));
  char buf[64];
  switch (op.kind) {
    case OperatorKind::Neg:
      break;
    case OperatorKind::Shift:
      std::snprintf(buf, sizeof buf, ":%.6g", op.delta);
      out += buf;
      break;
    case OperatorKind::IntUp:
    case OperatorKind::IntDown:
      std::snprintf(buf, sizeof buf, ":%.6g", op.factor);
      out += buf;
      break;
  }
  return out;
}

/// Parses "neg", "shift[:delta]", "int_up[:factor]", "int_down[:factor]".
[[nodiscard]] inline OperatorSpec parse_operator(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  std::optional<double> param;
  if (colon != std::string_view::npos) {
    const std::string arg(text.substr(colon + 1));
    char* end = nullptr;
    const double v = std::strtod(arg.c_str(), &end);
    if (arg.empty() || end != arg.c_str() + arg.size()) {
      throw Error(ErrorCode::InvalidOperator, "bad operator parameter in '" + std::string(text) + "'");
    }
    param = v;
  }
  OperatorSpec op;
  if (name == "neg") {
    if (param) throw Error(ErrorCode::InvalidOperator, "neg takes no parameter");
    op = OperatorSpec::neg();
  } else if (name == "shift") {
    op = OperatorSpec::shift(param.value_or(kDefaultShift));
  } else if (name == "int_up") {
    op = OperatorSpec::int_up(param.value_or(kDefaultIntUp));
  } else if (name == "int_down") {
    op = OperatorSpec::int_down(param.value_or(kDefaultIntDown));
  } else {
    throw Error(ErrorCode::InvalidOperator, "unknown operator '" + std::string(name) + "'");
  }
  validate_operator(op);
  return op;
}

[[nodiscard]] inline std::vector<OperatorSpec> default_operators() {
  return {OperatorSpec::neg(), OperatorSpec::shift(), OperatorSpec::int_up(),
          OperatorSpec::int_down()};
}

}  // namespace resonance
