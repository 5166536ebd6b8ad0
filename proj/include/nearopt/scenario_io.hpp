#pragma once

#include <filesystem>
#include <vector>

#include "json.hpp"
#include "nearopt/cep_model.hpp"

namespace nearopt::cep {

/// Reads a `timestep,value` CSV. Timesteps must run 0, 1, 2, ... in order.
/// IoError (naming the path) when unreadable, ParseError on malformed content.
std::vector<double> read_series_csv(const std::filesystem::path& path);

/// Builds a ScenarioConfig from its JSON form. Time series are inline arrays or
/// CSV paths resolved against base_dir. Missing optional fields take the
/// ScenarioConfig defaults; null capacities and caps mean unlimited.
ScenarioConfig parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir);

ScenarioConfig load_scenario(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace nearopt::cep
