#pragma once

#include <string>
#include <string_view>

#include "ptpsim/scenario.hpp"

namespace ptpsim {

/// Parses a JSON scenario document. Every key is optional; omitted keys keep
/// the ScenarioConfig defaults, or those of the builtin named by "base".
/// Unknown keys and ill-typed values are reported together in one
/// ConfigError, one message per field.
ScenarioConfig parse_config(std::string_view json_text);

/// Reads and parses a JSON file; I/O failures also surface as ConfigError.
ScenarioConfig load_config(const std::string& path);

/// Complete JSON rendering of `config` (parse_config accepts it back).
std::string to_json(const ScenarioConfig& config);

}  // namespace ptpsim
