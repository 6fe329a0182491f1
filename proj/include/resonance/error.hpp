#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace resonance {

enum class ErrorCode {
  LengthMismatch,
  NegativeAmplitude,
  NonFiniteValue,
  DimensionMismatch,
  ZeroNorm,
  OutOfRange,
  InvalidOperator,
  DimMismatch,  // existing segments disagree with the requested dimension
  CorruptHeader,
  DuplicateId,
  NotFound,
  IoFailure,
  EmptyStore,
  Unsupported,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NegativeAmplitude: return "NegativeAmplitude";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidOperator: return "InvalidOperator";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::CorruptHeader: return "CorruptHeader";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::EmptyStore: return "EmptyStore";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Exception type thrown by every fallible operation in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace resonance
