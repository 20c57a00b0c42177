#pragma once

#include "isac/montecarlo.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace isac::config {

/// Invalid or unknown configuration entry; what() starts with the field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    mc::CampaignConfig campaign;
    std::string output_dir = "out";
    int verbosity = 1;
};

/// Parses and validates eagerly. Absent keys keep their defaults.
RunConfig parse(const nlohmann::json& doc);

RunConfig load(const std::filesystem::path& path);

/// Human-readable list of every accepted key with its unit and default.
std::string reference();

}  // namespace isac::config
