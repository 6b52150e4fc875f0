#include "etop/opacity.hpp"

#include <chrono>

namespace etop {

namespace {

OpacityWitness to_witness(const DsWitness& w) {
    OpacityWitness o;
    o.is_point = w.is_point;
    o.lo = w.lo();
    o.hi = w.hi();
    o.secret_side = w.in_first;
    return o;
}

}  // namespace

Verdict decide(const TimedSystem& sys, const Bound& delta, Mode mode,
               const AnalysisCaps& caps) {
    auto start = std::chrono::steady_clock::now();
    ClassDurationSets sets = class_duration_sets(sys, delta, caps);
    DurationSet non_secret = ds_union(sets.expired, sets.pub);

    Verdict v;
    if (mode == Mode::Weak) {
        auto w = ds_first_excess(sets.secret, non_secret);
        v.opaque = !w.has_value();
        if (w) v.witness = to_witness(*w);
    } else {
        auto w = ds_first_diff(sets.secret, non_secret);
        v.opaque = !w.has_value();
        if (w) v.witness = to_witness(*w);
    }
    v.stats.region_states = sets.stats.region_states;
    v.stats.subset_states = sets.stats.subset_states;
    v.stats.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    return v;
}

bool decide_real_band(const TimedSystem& sys, long long band, Mode mode,
                      const AnalysisCaps& caps) {
    if (band < 0) throw InvalidArgument("decide_real_band: band must be >= 0");
    if (sys.denom != 1)
        throw InvalidArgument(
            "decide_real_band: bands follow the 1/denom grid; scale the system to "
            "integer constants first");
    return decide(sys, Bound::of(Rational(band) + Rational(1, 2)), mode, caps).opaque;
}

DeltaSet compute_weak_set(const TimedSystem& sys, const AnalysisCaps& caps) {
    long long q = sys.denom;
    TimedSystem integral = scale(sys, q);

    Verdict at_inf = decide(integral, Bound::infinity(), Mode::Weak, caps);
    if (at_inf.opaque) {
        // Secret durations only shrink as the bound shrinks, so inclusion
        // at +infinity carries down to every bound.
        DeltaSet all;
        all.all = true;
        all.includes_infinity = true;
        all.denom = q;
        return all;
    }

    // Smallest duration realizable with the secret but not publicly. No
    // bound at or above it can be weakly opaque; everything below it on
    // the grid is tested individually (band verdicts via the half
    // representative).
    const OpacityWitness& w = *at_inf.witness;
    long long witness_cell = w.lo.floor();  // integral units: lo is k or (k, k+1)
    long long last_point = w.is_point ? witness_cell : witness_cell + 1;
    long long last_cell = witness_cell - 1;

    DeltaSet out;
    out.denom = q;
    for (long long j = 0; j <= last_point; ++j)
        if (decide(integral, Bound::of(Rational(j)), Mode::Weak, caps).opaque)
            out.points.push_back(j);
    for (long long j = 0; j <= last_cell; ++j)
        if (decide_real_band(integral, j, Mode::Weak, caps)) out.cells.push_back(j);
    return out;
}

bool weak_emptiness(const TimedSystem& sys, const AnalysisCaps& caps) {
    return compute_weak_set(sys, caps).empty_set();
}

FullEmptinessResult full_emptiness(const TimedSystem& sys, const AnalysisCaps& caps) {
    DeltaSet weak = compute_weak_set(sys, caps);
    FullEmptinessResult res;
    if (weak.all) {
        // Weak everywhere: some bound achieves full opacity iff +infinity
        // does; which bounds do is not synthesized.
        res.nonempty = decide(sys, Bound::infinity(), Mode::Full, caps).opaque;
        res.exactness = Exactness::EmptinessOnly;
        return res;
    }
    DeltaSet full;
    full.denom = weak.denom;
    for (long long j : weak.points)
        if (decide(sys, Bound::of(Rational(j, weak.denom)), Mode::Full, caps).opaque)
            full.points.push_back(j);
    for (long long j : weak.cells)
        if (decide(sys, Bound::of(Rational(2 * j + 1, 2 * weak.denom)), Mode::Full, caps)
                .opaque)
            full.cells.push_back(j);
    res.nonempty = !full.empty_set();
    res.set = std::move(full);
    res.exactness = Exactness::Exact;
    return res;
}

Verdict decide_pta(const TimedSystem& pta, const ParamValuation& v, const Bound& delta,
                   Mode mode, const AnalysisCaps& caps) {
    return decide(instantiate(pta, v), delta, mode, caps);
}

SweepReport sweep(const TimedSystem& pta, const std::vector<GridAxis>& grid,
                  const std::vector<Bound>& deltas, Mode mode, const AnalysisCaps& caps) {
    std::vector<std::vector<Rational>> axis_values;
    for (const GridAxis& ax : grid) {
        if (!(ax.step > Rational(0)))
            throw InvalidArgument("sweep: grid step must be positive");
        if (ax.lo.is_negative())
            throw InvalidArgument("sweep: grid values must be non-negative");
        std::vector<Rational> vals;
        for (Rational v = ax.lo; v <= ax.hi; v = v + ax.step) vals.push_back(v);
        axis_values.push_back(std::move(vals));
    }

    SweepReport report;
    std::vector<std::size_t> idx(grid.size(), 0);
    bool done = std::any_of(axis_values.begin(), axis_values.end(),
                            [](const auto& v) { return v.empty(); });
    while (!done) {
        ParamValuation v;
        for (std::size_t a = 0; a < grid.size(); ++a)
            v.values[grid[a].param] = axis_values[a][idx[a]];
        for (const Bound& d : deltas) {
            SweepCell cell;
            cell.valuation = v;
            cell.delta = d;
            try {
                cell.verdict = decide_pta(pta, v, d, mode, caps);
            } catch (const Error& e) {
                cell.error = e.what();
            }
            report.cells.push_back(std::move(cell));
        }
        // advance the last axis fastest
        std::size_t a = grid.size();
        while (a > 0) {
            --a;
            if (++idx[a] < axis_values[a].size()) break;
            idx[a] = 0;
            if (a == 0) done = true;
        }
        if (grid.empty()) done = true;
    }
    return report;
}

}  // namespace etop
