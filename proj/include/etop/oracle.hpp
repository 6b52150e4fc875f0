#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "etop/durations.hpp"

namespace etop {

/// Breadth-first sampler of the concrete semantics on the 1/g time grid.
/// Every reported arrival is realizable (delays are real delays); sampled
/// completeness relies on g being fine enough for the region structure.
struct OracleResult {
    long long granularity = 1;  // g: atomic delay is 1/g
    long long horizon = 0;      // explored up to this duration (time units)
    bool truncated = false;     // some run hit the step cap (or config cap)

    struct Arrival {
        long long duration;  // grid units: duration/g time units
        bool visited;        // private location seen before completion
        long long lag;       // grid units since its last entrance (if visited)

        friend auto operator<=>(const Arrival&, const Arrival&) = default;
    };
    std::vector<Arrival> arrivals;  // sorted, unique

    // Exploration tree for replay checks: one node per discovered
    // configuration, root first.
    struct Move {
        bool is_delay = true;        // delay of 1/g, else edges[edge_index]
        std::size_t edge_index = 0;
    };
    struct Node {
        std::size_t parent = SIZE_MAX;  // SIZE_MAX for the root
        Move move;
    };
    std::vector<Node> nodes;
    std::vector<std::size_t> arrival_nodes;  // node of each arrival (parallel)
};

/// step_cap bounds the transition count of any single explored run;
/// 0 selects the default 10 * g * horizon * |edges|.
OracleResult oracle_explore(const TimedSystem& sys, long long g, long long horizon,
                            std::uint64_t step_cap = 0);

struct OracleAgreement {
    bool agree = false;
    bool inconclusive = false;  // truncated exploration explains the misses
    std::vector<std::string> mismatches;
};

/// Compares oracle-sampled class memberships against the region pipeline
/// at every integer and half-integer duration below the horizon.
OracleAgreement oracle_agrees(const TimedSystem& sys, const Bound& delta, long long g,
                              long long horizon, const AnalysisCaps& caps = {},
                              std::uint64_t step_cap = 0);

}  // namespace etop
