#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fluxres/invariant.hpp"

namespace fluxres {

/// Shortest decimal text that parses back to exactly `v`; '.' separator
/// regardless of locale.
std::string format_double(double v);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

/// {"mean", "peak_to_peak", "rms_dev", "window": [a, b], "count"}.
nlohmann::json to_json(const DriftMetrics &metrics);

}  // namespace fluxres
