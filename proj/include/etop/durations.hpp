#pragma once

#include <optional>
#include <vector>

#include "etop/transforms.hpp"
#include "etop/unary.hpp"

namespace etop {

/// Exact set of run durations: rational points k/denom plus open unit
/// cells (k/denom, (k+1)/denom). Duration sets of timed automata are
/// unions of intervals with integer bounds once scaled by denom, so this
/// representation is lossless.
struct DurationSet {
    UPSet points;
    UPSet opens;
    long long denom = 1;

    bool empty() const { return points.empty() && opens.empty(); }
};

/// Sizes of the intermediate constructions, for reporting.
struct PipelineStats {
    std::size_t region_states = 0;
    std::size_t subset_states = 0;
};

/// Durations of the runs reaching `selected_final` (first visit), via
/// scale-to-integer, final absorption, tick augmentation, the region
/// automaton and its tick languages. Result denom == sys.denom.
DurationSet duration_set(const TimedSystem& sys, LocationId selected_final,
                         const AnalysisCaps& caps = {}, PipelineStats* stats = nullptr);

/// The three class duration sets of a system under an expiration bound,
/// sharing one region automaton and one determinization.
struct ClassDurationSets {
    DurationSet secret;   // private seen within delta of completion
    DurationSet expired;  // private seen, longer than delta before completion
    DurationSet pub;      // private never seen
    PipelineStats stats;
};

ClassDurationSets class_duration_sets(const TimedSystem& sys, const Bound& delta,
                                      const AnalysisCaps& caps = {});

/// Same real set over a finer grid; new_denom must be a multiple of denom.
DurationSet ds_rescale(const DurationSet& a, long long new_denom);

DurationSet ds_union(const DurationSet& a, const DurationSet& b);
/// a is a subset of b.
bool ds_includes(const DurationSet& a, const DurationSet& b);
bool ds_equals(const DurationSet& a, const DurationSet& b);
bool ds_contains(const DurationSet& a, const Rational& value);

/// Grid-cell witness: the point index/denom or the open cell
/// (index, index+1)/denom. `in_first` tells which side of the comparison
/// the witness belongs to.
struct DsWitness {
    bool is_point = true;
    long long index = 0;
    long long denom = 1;
    bool in_first = true;

    Rational lo() const { return Rational(index, denom); }
    Rational hi() const { return is_point ? lo() : Rational(index + 1, denom); }
};

/// Least grid cell of the symmetric difference (points checked before the
/// open cell at the same index).
std::optional<DsWitness> ds_first_diff(const DurationSet& a, const DurationSet& b);
/// Least grid cell in a \ b.
std::optional<DsWitness> ds_first_excess(const DurationSet& a, const DurationSet& b);

/// Maximal-interval rendering. `hi` empty means unbounded.
struct Interval {
    Rational lo;
    bool lo_open = false;
    std::optional<Rational> hi;
    bool hi_open = false;
};

struct IntervalView {
    std::vector<Interval> intervals;  // sorted, disjoint, maximal
    bool eventually_periodic = false; // true when the set repeats forever
    Rational tail_start;              // membership repeats with `period`...
    Rational period;                  // ...from tail_start on
};

IntervalView ds_intervals(const DurationSet& a);

}  // namespace etop
