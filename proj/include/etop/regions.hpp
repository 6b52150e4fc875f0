#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "etop/errors.hpp"
#include "etop/model.hpp"

namespace etop {

/// Per-clock ceiling: the largest integer constant the clock is compared
/// against anywhere in the system (0 when never compared).
struct Ceiling {
    std::vector<long long> per_clock;

    long long of(ClockId c) const { return per_clock[c.value]; }
};

Ceiling ceilings(const TimedSystem& sys);

/// One region: a location plus, for every clock, its integer part (with
/// ceiling + 1 acting as the "above the ceiling" marker) and its position
/// in the ordering of fractional parts. fclass 0 means the clock value is
/// an integer (or the clock is capped); fclass k >= 1 places the clock in
/// the k-th equality class, classes numbered by increasing fraction.
struct Region {
    LocationId loc;
    std::vector<std::uint16_t> ipart;
    std::vector<std::uint8_t> fclass;
    std::uint8_t num_classes = 0;

    bool capped(std::size_t clock, const Ceiling& c) const {
        return ipart[clock] > c.per_clock[clock];
    }
    bool integer_valued(std::size_t clock, const Ceiling& c) const {
        return !capped(clock, c) && fclass[clock] == 0;
    }

    friend bool operator==(const Region&, const Region&) = default;
};

/// Canonical region of an exact clock valuation.
Region region_of(LocationId loc, std::span<const Rational> values, const Ceiling& c);

/// True when every valuation in the region satisfies the constraint
/// (equivalently, some valuation does; regions are uniform w.r.t. atoms
/// whose constants are bounded by the ceilings).
bool region_satisfies(const Region& r, const AtomicConstraint& atom, const Ceiling& c);
bool region_satisfies(const Region& r, const Guard& g, const Ceiling& c);

/// The immediate delay successor. For a fully capped region this is the
/// region itself (time flows within it forever).
Region delay_successor(const Region& r, const Ceiling& c);

/// Region after resetting the given clocks to zero.
Region region_reset(const Region& r, const std::vector<ClockId>& resets, const Ceiling& c);

/// A representative valuation: integer parts as stated, fractions spread
/// evenly in (0,1) by class, capped clocks at ceiling + 1/2.
std::vector<Rational> region_representative(const Region& r, const Ceiling& c);

/// Finite automaton over regions whose single letter "tick" marks each
/// elapse of one time unit. Acceptance at the selected final location is
/// split by the tick clock's value on arrival:
///   - integer tick value v in {0, 1}: exact arrival, offset v
///     (a path with k ticks and offset v encodes duration exactly k + v);
///   - tick value strictly inside (0, 1): fractional arrival
///     (a path with k ticks encodes durations filling (k, k+1)).
struct RegionAutomaton {
    struct Transition {
        std::uint32_t source;
        bool tick;
        std::uint32_t target;
    };

    std::vector<Region> states;
    std::vector<Transition> transitions;
    int initial = -1;  // -1 when even the initial valuation violates its invariant
    LocationId selected_final;
    ClockId tick_clock;
    Ceiling ceiling;
    std::vector<std::string> location_names;
    std::vector<std::string> clock_names;

    std::vector<std::pair<std::uint32_t, int>> accept_exact;  // (state, offset)
    std::vector<std::uint32_t> accept_frac;

    std::size_t state_count() const { return states.size(); }
};

/// Builds the reachable region automaton of a tick-augmented system with
/// integer constants. Exploration stops at `selected_final` and at every
/// location listed in `absorbing_extra` (used for the classified product,
/// whose three finals are all absorbing).
RegionAutomaton region_automaton(const TimedSystem& sys, LocationId selected_final,
                                 ClockId tick_clock, const AnalysisCaps& caps = {},
                                 const std::vector<LocationId>& absorbing_extra = {});

/// Acceptance sets of an already-built automaton at another absorbing
/// final location (same split as above).
void acceptance_at(const RegionAutomaton& ra, LocationId final_loc,
                   std::vector<std::pair<std::uint32_t, int>>& exact,
                   std::vector<std::uint32_t>& frac);

/// Short human-readable description of a region's clock constraints.
std::string region_label(const RegionAutomaton& ra, std::uint32_t state);

}  // namespace etop
