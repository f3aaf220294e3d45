#pragma once

// Ready-made scenarios: the four-agent reference network with and without
// delays, its switching variant, and the unbounded-gap counterexample.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "consensus/scenario.hpp"

namespace consensus::builtin {

/// Weights of the four-agent reference network.
Matrix reference_weights();

/// Four agents, reference weights, independent gaps in [0.2, 0.9], no delays.
ScenarioConfig example_fixed(std::uint64_t seed = 1, double horizon = 100.0);

/// Same network with one shared update schedule.
ScenarioConfig example_fixed_synchronous(std::uint64_t seed = 1, double horizon = 100.0);

/// Two agents swapping states with gaps (k + 3) ln 2; `events` transitions
/// are simulated.
ScenarioConfig counterexample(std::size_t events = 30);

/// Reference network with uniform random delays bounded by K * 0.2 s.
ScenarioConfig example_delay(std::size_t K, Strategy strategy, std::uint64_t seed = 1,
                             double horizon = 30.0);

/// Four-phase reception schedule with delays bounded by 2 s.
ScenarioConfig example_switching(std::uint64_t seed = 1, double horizon = 200.0);

std::vector<std::string> names();

}  // namespace consensus::builtin
