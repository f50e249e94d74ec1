#pragma once

// Structured run reports (JSON) and their plain-text rendering.

#include <string>

#include <json.hpp>

#include "primbound/bounds.hpp"
#include "primbound/oracles.hpp"

namespace primbound {

inline constexpr const char* kPrecisionNote = "numerical, not certified-rounded";

/// Significant digits used for logs, step contributions and error estimates.
inline constexpr int kLogDigits = 25;

nlohmann::ordered_json config_json(const BoundConfig& config);
nlohmann::ordered_json bound_json(const BoundReport& report, double wall_seconds);
nlohmann::ordered_json oracle_json(std::string_view quantity, const OracleResult& result,
                                   std::optional<std::size_t> l = {});
nlohmann::ordered_json table_json(const CountTable& table, double wall_seconds);

std::string bound_text(const BoundReport& report, double wall_seconds);
std::string oracle_text(std::string_view quantity, const OracleResult& result);

/// Copy of `report` without fields that vary between identical runs.
nlohmann::ordered_json without_timing(nlohmann::ordered_json report);

}  // namespace primbound
