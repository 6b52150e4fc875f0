#pragma once

#include <optional>
#include <string>
#include <vector>

#include "etop/durations.hpp"

namespace etop {

enum class Mode { Weak, Full };

inline const char* mode_text(Mode m) { return m == Mode::Weak ? "weak" : "full"; }

/// A duration separating the two compared sets: either the exact point
/// lo == hi or the whole open interval (lo, hi). `secret_side` tells
/// whether it is realizable only as a secret duration (true) or only as a
/// non-secret one (false).
struct OpacityWitness {
    bool is_point = true;
    Rational lo;
    Rational hi;
    bool secret_side = true;
};

struct Stats {
    std::size_t region_states = 0;
    std::size_t subset_states = 0;
    double wall_ms = 0;
};

struct Verdict {
    bool opaque = false;
    std::optional<OpacityWitness> witness;  // present iff not opaque
    Stats stats;
};

/// Expiring execution-time opacity at a fixed bound: weak compares the
/// secret durations for inclusion in expired-or-public, full for equality.
Verdict decide(const TimedSystem& sys, const Bound& delta, Mode mode,
               const AnalysisCaps& caps = {});

/// Verdict shared by every bound inside the open band (band, band + 1),
/// decided at the representative band + 1/2. Requires integer constants.
bool decide_real_band(const TimedSystem& sys, long long band, Mode mode,
                      const AnalysisCaps& caps = {});

/// The set of expiration bounds for which the system is opaque: either
/// every bound (including +infinity), or a finite union of grid points
/// k/denom and open grid cells (k/denom, (k+1)/denom).
struct DeltaSet {
    bool all = false;
    std::vector<long long> points;
    std::vector<long long> cells;
    bool includes_infinity = false;
    long long denom = 1;

    bool empty_set() const {
        return !all && points.empty() && cells.empty() && !includes_infinity;
    }
};

DeltaSet compute_weak_set(const TimedSystem& sys, const AnalysisCaps& caps = {});

/// True iff no bound at all makes the system weakly opaque.
bool weak_emptiness(const TimedSystem& sys, const AnalysisCaps& caps = {});

enum class Exactness { Exact, EmptinessOnly };

struct FullEmptinessResult {
    bool nonempty = false;
    std::optional<DeltaSet> set;  // synthesized only when exactness == Exact
    Exactness exactness = Exactness::Exact;
};

/// Emptiness of the full-opacity bound set. When the weak set is finite
/// the full set is synthesized exactly; when the weak set is everything,
/// only emptiness is decided (the exact set is not computed).
FullEmptinessResult full_emptiness(const TimedSystem& sys, const AnalysisCaps& caps = {});

/// Decision at a fixed parameter valuation of a parametric system.
Verdict decide_pta(const TimedSystem& pta, const ParamValuation& v, const Bound& delta,
                   Mode mode, const AnalysisCaps& caps = {});

struct GridAxis {
    ParamId param;
    Rational lo;
    Rational hi;
    Rational step;
};

struct SweepCell {
    ParamValuation valuation;
    Bound delta;
    std::optional<Verdict> verdict;  // empty when the cell errored
    std::string error;
};

struct SweepReport {
    std::vector<SweepCell> cells;
};

/// decide_pta over the product grid, lexicographic by parameter (in axis
/// order, values ascending) then by the given delta order. Per-cell
/// errors are recorded, not fatal.
SweepReport sweep(const TimedSystem& pta, const std::vector<GridAxis>& grid,
                  const std::vector<Bound>& deltas, Mode mode,
                  const AnalysisCaps& caps = {});

}  // namespace etop
