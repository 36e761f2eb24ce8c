#pragma once

#include <filesystem>
#include <string>

#include "precnet/simgen.hpp"

namespace precnet::cli {

// Parses a `key = value` experiment file ('#' starts a comment). Unknown or
// repeated keys and malformed values throw ConfigError naming the line.
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace precnet::cli
