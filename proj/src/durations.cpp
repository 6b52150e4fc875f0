#include "etop/durations.hpp"

#include <algorithm>

namespace etop {

DurationSet duration_set(const TimedSystem& sys, LocationId selected_final,
                         const AnalysisCaps& caps, PipelineStats* stats) {
    long long q = sys.denom;
    TimedSystem integral = scale(sys, q);
    TimedSystem absorbed = absorb_final(integral, selected_final);
    TickedSystem ticked = add_tick(absorbed, {selected_final});
    RegionAutomaton ra =
        region_automaton(ticked.sys, selected_final, ticked.tick_clock, caps);
    TickLasso lasso = tick_lasso(ra, caps.max_subsets);
    if (stats) {
        stats->region_states = ra.state_count();
        stats->subset_states = lasso.distinct_subsets;
    }
    DurationSet out;
    out.points = unary_language_at(ra, lasso, selected_final, LangKind::Exact);
    out.opens = unary_language_at(ra, lasso, selected_final, LangKind::Frac);
    out.denom = q;
    return out;
}

ClassDurationSets class_duration_sets(const TimedSystem& sys, const Bound& delta,
                                      const AnalysisCaps& caps) {
    long long q = lcm_ll(sys.denom, delta.is_infinite() ? 1 : delta.value().den());
    TimedSystem integral = scale(sys, q);
    Bound scaled_delta =
        delta.is_infinite() ? delta : Bound::of(delta.value() * Rational(q));
    ClassifiedSystem cs = classify(integral, scaled_delta);
    TickedSystem ticked = add_tick(cs.product, cs.finals());
    RegionAutomaton ra =
        region_automaton(ticked.sys, cs.final_secret, ticked.tick_clock, caps,
                         {cs.final_expired, cs.final_public});
    TickLasso lasso = tick_lasso(ra, caps.max_subsets);

    auto set_at = [&](LocationId f) {
        DurationSet d;
        d.points = unary_language_at(ra, lasso, f, LangKind::Exact);
        d.opens = unary_language_at(ra, lasso, f, LangKind::Frac);
        d.denom = q;
        return d;
    };
    ClassDurationSets out;
    out.secret = set_at(cs.final_secret);
    out.expired = set_at(cs.final_expired);
    out.pub = set_at(cs.final_public);
    out.stats.region_states = ra.state_count();
    out.stats.subset_states = lasso.distinct_subsets;
    return out;
}

DurationSet ds_rescale(const DurationSet& a, long long new_denom) {
    if (new_denom <= 0 || new_denom % a.denom != 0)
        throw InvalidArgument("ds_rescale: new denom must be a positive multiple of " +
                              std::to_string(a.denom));
    long long m = new_denom / a.denom;
    if (m == 1) return a;
    std::size_t stem =
        static_cast<std::size_t>(m) * std::max(a.points.stem(), a.opens.stem());
    std::size_t period = static_cast<std::size_t>(m) *
                         std::lcm(a.points.period(), a.opens.period());
    DurationSet out;
    out.denom = new_denom;
    // A point stays a point on the finer grid; an open cell contributes m
    // open cells plus the m-1 interior grid points.
    out.points = UPSet::from_function(
        [&](std::uint64_t j) {
            if (j % static_cast<std::uint64_t>(m) == 0)
                return a.points.contains(j / static_cast<std::uint64_t>(m));
            return a.opens.contains(j / static_cast<std::uint64_t>(m));
        },
        stem, period);
    out.opens = UPSet::from_function(
        [&](std::uint64_t j) { return a.opens.contains(j / static_cast<std::uint64_t>(m)); },
        stem, period);
    return out;
}

namespace {

std::pair<DurationSet, DurationSet> aligned(const DurationSet& a, const DurationSet& b) {
    long long d = lcm_ll(a.denom, b.denom);
    return {ds_rescale(a, d), ds_rescale(b, d)};
}

}  // namespace

DurationSet ds_union(const DurationSet& a, const DurationSet& b) {
    auto [x, y] = aligned(a, b);
    DurationSet out;
    out.denom = x.denom;
    out.points = up_union(x.points, y.points);
    out.opens = up_union(x.opens, y.opens);
    return out;
}

bool ds_includes(const DurationSet& a, const DurationSet& b) {
    auto [x, y] = aligned(a, b);
    return up_includes(x.points, y.points) && up_includes(x.opens, y.opens);
}

bool ds_equals(const DurationSet& a, const DurationSet& b) {
    auto [x, y] = aligned(a, b);
    return x.points == y.points && x.opens == y.opens;
}

bool ds_contains(const DurationSet& a, const Rational& value) {
    if (value.is_negative()) return false;
    Rational scaled = value * Rational(a.denom);
    if (scaled.is_integer())
        return a.points.contains(static_cast<std::uint64_t>(scaled.num()));
    return a.opens.contains(static_cast<std::uint64_t>(scaled.floor()));
}

namespace {

std::optional<DsWitness> scan_diff(const DurationSet& a, const DurationSet& b,
                                   bool symmetric) {
    auto [x, y] = aligned(a, b);
    std::uint64_t stem = std::max({x.points.stem(), x.opens.stem(), y.points.stem(),
                                   y.opens.stem()});
    std::uint64_t period = std::lcm(std::lcm<std::uint64_t>(x.points.period(), x.opens.period()),
                                    std::lcm<std::uint64_t>(y.points.period(), y.opens.period()));
    for (std::uint64_t k = 0; k < stem + period; ++k) {
        bool pa = x.points.contains(k), pb = y.points.contains(k);
        if (pa != pb && (symmetric || pa))
            return DsWitness{true, static_cast<long long>(k), x.denom, pa};
        bool oa = x.opens.contains(k), ob = y.opens.contains(k);
        if (oa != ob && (symmetric || oa))
            return DsWitness{false, static_cast<long long>(k), x.denom, oa};
    }
    return std::nullopt;
}

}  // namespace

std::optional<DsWitness> ds_first_diff(const DurationSet& a, const DurationSet& b) {
    return scan_diff(a, b, true);
}

std::optional<DsWitness> ds_first_excess(const DurationSet& a, const DurationSet& b) {
    return scan_diff(a, b, false);
}

IntervalView ds_intervals(const DurationSet& a) {
    IntervalView view;
    std::uint64_t stem = std::max(a.points.stem(), a.opens.stem());
    std::uint64_t period = std::lcm<std::uint64_t>(a.points.period(), a.opens.period());

    bool tail_full = true, tail_some = false;
    for (std::uint64_t k = stem; k < stem + period; ++k) {
        bool p = a.points.contains(k), o = a.opens.contains(k);
        tail_full = tail_full && p && o;
        tail_some = tail_some || p || o;
    }

    // Primitive slots in real order: 2k is the point k/denom, 2k+1 the open
    // cell (k/denom, (k+1)/denom).
    auto bit = [&](std::uint64_t slot) {
        return slot % 2 == 0 ? a.points.contains(slot / 2) : a.opens.contains(slot / 2);
    };
    std::uint64_t emit_below = 2 * (stem + period);
    std::uint64_t scan_end = tail_full ? emit_below : 2 * (stem + 2 * period) + 2;

    std::optional<std::uint64_t> run_start;
    for (std::uint64_t slot = 0; slot < scan_end; ++slot) {
        if (bit(slot)) {
            if (!run_start) run_start = slot;
            continue;
        }
        if (run_start && *run_start < emit_below) {
            Interval iv;
            iv.lo = Rational(static_cast<long long>(*run_start / 2), a.denom);
            iv.lo_open = *run_start % 2 == 1;
            std::uint64_t last = slot - 1;
            iv.hi = Rational(static_cast<long long>(last / 2 + last % 2), a.denom);
            iv.hi_open = last % 2 == 1;
            view.intervals.push_back(iv);
        }
        run_start.reset();
    }
    if (run_start && *run_start < emit_below) {
        // Only a fully present tail can sustain a run to the scan end.
        Interval iv;
        iv.lo = Rational(static_cast<long long>(*run_start / 2), a.denom);
        iv.lo_open = *run_start % 2 == 1;
        view.intervals.push_back(iv);  // hi empty: unbounded
    }

    view.eventually_periodic = tail_some && !tail_full;
    if (view.eventually_periodic) {
        view.tail_start = Rational(static_cast<long long>(stem), a.denom);
        view.period = Rational(static_cast<long long>(period), a.denom);
    }
    return view;
}

}  // namespace etop
