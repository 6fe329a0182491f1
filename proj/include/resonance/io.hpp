#pragma once

// JSON Lines ingest records and hit output.
//
// Ingest record, one JSON object per line:
//   {"id": "<32 hex>"?, "vector": [..]}                  mapped per MapMode
//   {"id": "<32 hex>"?, "amplitude": [..], "phase": [..]} taken as-is
// Without an id, the id is derived from the stored content.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "resonance/core_types.hpp"
#include "resonance/error.hpp"
#include "resonance/mapping.hpp"

namespace resonance {

enum class MapMode { SignPhase, ZeroPhase, Native };

[[nodiscard]] inline MapMode parse_map_mode(std::string_view s) {
  if (s == "sign-phase") return MapMode::SignPhase;
  if (s == "zero-phase") return MapMode::ZeroPhase;
  if (s == "native") return MapMode::Native;
  throw Error(ErrorCode::InvalidArgument, "unknown mapping '" + std::string(s) + "'");
}

[[nodiscard]] inline WavePattern map_vector(const RealVector& v, MapMode mode) {
  switch (mode) {
    case MapMode::SignPhase: return sign_phase(v);
    case MapMode::ZeroPhase: return zero_phase(v);
    case MapMode::Native: break;
  }
  throw Error(ErrorCode::InvalidArgument, "native mapping needs amplitude and phase fields");
}

struct IngestRecord {
  std::optional<PatternId> id;
  WavePattern pattern;

  [[nodiscard]] PatternId resolved_id() const { return id ? *id : content_id(pattern); }
};

namespace detail {

inline std::vector<double> number_array(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, std::string(field) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, std::string(field) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

/// Parses one ingest/query line. `dim` of 0 skips the dimension check.
[[nodiscard]] inline IngestRecord parse_record(std::string_view line, MapMode mode, std::size_t dim = 0) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "record must be a JSON object");

  std::optional<PatternId> id;
  if (const auto it = j.find("id"); it != j.end()) {
    if (!it->is_string()) throw Error(ErrorCode::InvalidArgument, "id must be a string");
    id = PatternId::from_hex(it->get<std::string>());
  }
  const bool has_vector = j.contains("vector");
  const bool has_amp = j.contains("amplitude");
  const bool has_phase = j.contains("phase");
  if (has_amp != has_phase) throw Error(ErrorCode::InvalidArgument, "amplitude and phase come together");
  if (has_vector == has_amp) {
    throw Error(ErrorCode::InvalidArgument, "record needs exactly one of vector or amplitude+phase");
  }

  std::optional<WavePattern> pattern;
  if (has_vector) {
    if (mode == MapMode::Native) {
      throw Error(ErrorCode::InvalidArgument, "native mapping needs amplitude and phase fields");
    }
    pattern = map_vector(RealVector(detail::number_array(j["vector"], "vector")), mode);
  } else {
    pattern = WavePattern::validate(detail::number_array(j["amplitude"], "amplitude"),
                                    detail::number_array(j["phase"], "phase"));
  }
  if (dim != 0 && pattern->size() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "record has dimension " + std::to_string(pattern->size()) +
                                                  ", store has " + std::to_string(dim));
  }
  return {id, std::move(*pattern)};
}

/// {"id":"<hex>","score":<shortest round-trip double>}
[[nodiscard]] inline std::string hit_to_json(const Hit& hit) {
  nlohmann::ordered_json j;
  j["id"] = hit.id.to_hex();
  j["score"] = hit.score;
  return j.dump();
}

}  // namespace resonance
