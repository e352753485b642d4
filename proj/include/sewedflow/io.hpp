#pragma once

#include "sewedflow/analysis.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <string_view>

namespace sewedflow {

/// 17 significant digits, so every double round-trips.
[[nodiscard]] std::string format_real(double v);

/// {"points": [...], "intervals": [[lo, hi], ...]}, positive half only.
[[nodiscard]] CompactSymmetricSet set_from_json(const nlohmann::json& j);

/// Either {"family": name, "k": int, "set": {...}} or
/// {"q_upper_coeffs": [...], "q_lower_coeffs": [...]}.
[[nodiscard]] PiecewiseSystem system_from_json(const nlohmann::json& j, double window = 1.0);

/// Inline JSON when the text starts with '{', otherwise a file path.
[[nodiscard]] nlohmann::json load_json_argument(std::string_view text_or_path);

[[nodiscard]] nlohmann::json describe_system(const PiecewiseSystem& system);
[[nodiscard]] nlohmann::json to_json(const ValidationReport& r);
[[nodiscard]] nlohmann::json to_json(const Timing& t);
[[nodiscard]] nlohmann::json to_json(const Classification& c);
[[nodiscard]] nlohmann::json to_json(const CrossingSequence& s);

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& points);
void write_crossings_csv(std::ostream& os, const CrossingSequence& seq);
void write_chi_csv(std::ostream& os, const std::vector<double>& x, const std::vector<double>& chi);

} // namespace sewedflow
