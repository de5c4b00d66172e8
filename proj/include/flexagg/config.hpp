#pragma once

// JSON configuration files; the schema is documented in docs/configuration.md.

#include "flexagg/experiment.hpp"

#include <filesystem>
#include <string>

namespace flexagg {

/// Parses a configuration document. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);

/// Throws IoError for unreadable files and InvalidArgument for bad content.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace flexagg
