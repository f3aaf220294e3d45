#pragma once

// Scenario files: flat `key = value` lines grouped under [section] headers.
// Values are numbers, bare words, or bracketed lists (nested for matrices);
// a list may continue over several lines. `#` starts a comment. Agent
// indices in files are 1-based.
//
//   [agents]      n, initial_state
//   [timing]      tau_u_min, tau_u_max, schedule, gaps, horizon, sample_dt, seed
//   [topology]    kind, weights, weight_min, weight_max, rules, probability
//   [delays]      K, policy, matrix, strategy
//
// A top-level `name` key labels the scenario.

#include <filesystem>
#include <string>
#include <string_view>

#include "consensus/scenario.hpp"

namespace consensus {

/// Throws ConfigError with a line number on malformed or unknown input.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config; numbers use shortest round-trip formatting.
std::string format_config(const ScenarioConfig& c);

/// Applies CONSENSUS_SIM_SEED when it is set to an unsigned integer.
void apply_seed_override(ScenarioConfig& c);

}  // namespace consensus
