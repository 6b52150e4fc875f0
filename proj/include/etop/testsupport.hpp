#pragma once

#include <cstdint>

#include "etop/model.hpp"

namespace etop {

/// Knobs for the random model generator. Defaults keep region automata
/// small enough for exhaustive analysis in tests.
struct GenSpec {
    int max_locations = 4;
    int max_clocks = 2;
    long long max_constant = 5;
    double edge_density = 0.35;   // extra edges per location pair
    double strict_prob = 0.35;    // probability of a strict comparison
    std::uint64_t seed = 0;
};

/// Deterministic per seed: same spec, same system. Always valid and
/// parameter-free; a spine of edges from init to final (through the
/// private location) biases runs toward reaching the final location.
TimedSystem gen_ta(const GenSpec& spec);

}  // namespace etop
