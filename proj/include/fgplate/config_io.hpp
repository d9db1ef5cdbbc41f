#pragma once

#include <string>

#include "fgplate/material.hpp"

namespace fgplate {

/// Parses a plate description from JSON text. Unknown fields are rejected;
/// error messages name the offending field (and the parse location for
/// malformed documents). `origin` labels the source in diagnostics.
PlateConfig parse_config(const std::string& json_text, const std::string& origin = "<string>");

/// Loads and parses a JSON config file.
PlateConfig load_config(const std::string& path);

/// Serializes a config back to JSON (round-trips through parse_config).
std::string config_to_json(const PlateConfig& config);

} // namespace fgplate
