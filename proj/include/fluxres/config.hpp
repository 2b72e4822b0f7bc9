#pragma once

// JSON run configuration shared by every CLI workflow. Field names follow the
// model's symbols spelled in ASCII (omega_r, epsilon, xi0, ...). Unknown keys
// are rejected at every level.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fluxres/experiments.hpp"
#include "fluxres/optimize.hpp"

namespace fluxres {

struct SweepSettings {
    std::string axis;
    std::vector<double> values;
    bool numerical{false};
};

struct OptimizeSettings {
    SearchInterval search{0.5, 3.0};
    double tol{1e-3};
};

struct RunConfig {
    std::string name{"run"};
    Scenario scenario;
    std::optional<SweepSettings> sweep;
    OptimizeSettings optimize;
    std::string output_dir{"out"};
};

Scenario scenario_from_json(const nlohmann::json &j);
nlohmann::json to_json(const Scenario &scenario);

RunConfig run_config_from_json(const nlohmann::json &j);
nlohmann::json to_json(const RunConfig &config);

/// Reads and parses a config file; the name defaults to the file stem.
RunConfig load_run_config(const std::filesystem::path &path);

/// Directory holding the shipped presets: $FLUXRES_PRESET_DIR if set,
/// otherwise the source tree's presets/.
std::filesystem::path preset_directory();

/// Throws InvalidArgument if no preset of that name exists.
std::filesystem::path preset_path(std::string_view name,
                                  const std::optional<std::filesystem::path> &dir = std::nullopt);

/// FNV-1a 64-bit hash of the compact dump, as 16 hex digits. nlohmann::json
/// keeps object keys sorted, so equal configs hash equally.
std::string config_hash(const nlohmann::json &j);

/// {"config": j, "config_hash": config_hash(j)}.
nlohmann::json provenance(const nlohmann::json &j);

}  // namespace fluxres
