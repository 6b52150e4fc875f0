#include "etop/regions.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace etop {

Ceiling ceilings(const TimedSystem& sys) {
    if (!sys.parameter_free())
        throw InvalidArgument("ceilings: system must be parameter-free");
    Ceiling c;
    c.per_clock.assign(sys.clock_count(), 0);
    auto visit = [&](const Guard& g) {
        for (const AtomicConstraint& a : g.atoms) {
            if (!a.rhs.constant.is_integer())
                throw InvalidArgument("ceilings: constants must be integers; scale first");
            c.per_clock[a.clock.value] =
                std::max(c.per_clock[a.clock.value], a.rhs.constant.num());
        }
    };
    for (const Guard& g : sys.invariants) visit(g);
    for (const Edge& e : sys.edges) visit(e.guard);
    return c;
}

Region region_of(LocationId loc, std::span<const Rational> values, const Ceiling& c) {
    std::size_t n = values.size();
    Region r;
    r.loc = loc;
    r.ipart.assign(n, 0);
    r.fclass.assign(n, 0);

    std::map<Rational, std::vector<std::size_t>> by_frac;
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i].is_negative())
            throw InvalidArgument("region_of: clock values must be non-negative");
        if (values[i] > Rational(c.per_clock[i])) {
            r.ipart[i] = static_cast<std::uint16_t>(c.per_clock[i] + 1);
            continue;
        }
        long long k = values[i].floor();
        r.ipart[i] = static_cast<std::uint16_t>(k);
        Rational frac = values[i] - Rational(k);
        if (!frac.is_zero()) by_frac[frac].push_back(i);
    }
    std::uint8_t cls = 0;
    for (const auto& [frac, clocks] : by_frac) {
        ++cls;
        for (std::size_t i : clocks) r.fclass[i] = cls;
    }
    r.num_classes = cls;
    return r;
}

bool region_satisfies(const Region& r, const AtomicConstraint& atom, const Ceiling& c) {
    std::size_t i = static_cast<std::size_t>(atom.clock.value);
    if (!atom.rhs.is_constant() || !atom.rhs.constant.is_integer())
        throw InvalidArgument("region_satisfies: constraint must be an integer constant");
    long long cst = atom.rhs.constant.num();
    if (r.capped(i, c)) {
        // value > ceiling >= cst
        return atom.op == CmpOp::Ge || atom.op == CmpOp::Gt;
    }
    long long k = r.ipart[i];
    if (r.fclass[i] == 0) {
        switch (atom.op) {
            case CmpOp::Lt: return k < cst;
            case CmpOp::Le: return k <= cst;
            case CmpOp::Eq: return k == cst;
            case CmpOp::Ge: return k >= cst;
            case CmpOp::Gt: return k > cst;
        }
    }
    // value strictly inside (k, k+1)
    switch (atom.op) {
        case CmpOp::Lt: return k < cst;
        case CmpOp::Le: return k < cst;
        case CmpOp::Eq: return false;
        case CmpOp::Ge: return k >= cst;
        case CmpOp::Gt: return k >= cst;
    }
    return false;
}

bool region_satisfies(const Region& r, const Guard& g, const Ceiling& c) {
    for (const AtomicConstraint& a : g.atoms)
        if (!region_satisfies(r, a, c)) return false;
    return true;
}

Region delay_successor(const Region& r, const Ceiling& c) {
    std::size_t n = r.ipart.size();
    bool all_capped = true;
    bool any_integer = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (r.capped(i, c)) continue;
        all_capped = false;
        if (r.fclass[i] == 0) any_integer = true;
    }
    if (all_capped) return r;

    Region s = r;
    if (any_integer) {
        // Integer-valued clocks start to age: the ones below their ceiling
        // form a new lowest fractional class, the ones at it become capped.
        bool new_class = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (r.capped(i, c) || r.fclass[i] != 0) continue;
            if (static_cast<long long>(r.ipart[i]) == c.per_clock[i])
                s.ipart[i] = static_cast<std::uint16_t>(c.per_clock[i] + 1);
            else
                new_class = true;
        }
        if (new_class) {
            for (std::size_t i = 0; i < n; ++i)
                if (!r.capped(i, c) && r.fclass[i] != 0)
                    s.fclass[i] = static_cast<std::uint8_t>(r.fclass[i] + 1);
            for (std::size_t i = 0; i < n; ++i)
                if (!r.capped(i, c) && r.fclass[i] == 0 &&
                    static_cast<long long>(r.ipart[i]) < c.per_clock[i])
                    s.fclass[i] = 1;
            s.num_classes = static_cast<std::uint8_t>(r.num_classes + 1);
        }
        return s;
    }

    // No integer-valued clock: the topmost fractional class reaches the
    // next integer. Its members stay below their ceilings (a fractional
    // clock above it would already be capped).
    for (std::size_t i = 0; i < n; ++i) {
        if (r.capped(i, c)) continue;
        if (r.fclass[i] == r.num_classes) {
            s.ipart[i] = static_cast<std::uint16_t>(r.ipart[i] + 1);
            s.fclass[i] = 0;
        }
    }
    s.num_classes = static_cast<std::uint8_t>(r.num_classes - 1);
    return s;
}

Region region_reset(const Region& r, const std::vector<ClockId>& resets, const Ceiling& c) {
    Region s = r;
    for (ClockId clk : resets) {
        s.ipart[clk.value] = 0;
        s.fclass[clk.value] = 0;
    }
    // Compact class indices (a class may have emptied).
    std::vector<std::uint8_t> remap(static_cast<std::size_t>(r.num_classes) + 1, 0);
    for (std::size_t i = 0; i < s.fclass.size(); ++i)
        if (!s.capped(i, c) && s.fclass[i] != 0) remap[s.fclass[i]] = 1;
    std::uint8_t next = 0;
    for (std::size_t k = 1; k < remap.size(); ++k)
        if (remap[k]) remap[k] = ++next;
    for (std::size_t i = 0; i < s.fclass.size(); ++i)
        if (s.fclass[i] != 0) s.fclass[i] = remap[s.fclass[i]];
    s.num_classes = next;
    return s;
}

std::vector<Rational> region_representative(const Region& r, const Ceiling& c) {
    std::vector<Rational> vals(r.ipart.size());
    long long den = 2 * (static_cast<long long>(r.num_classes) + 1);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (r.capped(i, c)) {
            vals[i] = Rational(c.per_clock[i]) + Rational(1, 2);
        } else if (r.fclass[i] == 0) {
            vals[i] = Rational(r.ipart[i]);
        } else {
            // class k of m gets fraction (2k-1) / (2(m+1)), preserving order
            vals[i] = Rational(r.ipart[i]) + Rational(2LL * r.fclass[i] - 1, den);
        }
    }
    return vals;
}

namespace {

struct RegionHash {
    std::size_t operator()(const Region& r) const noexcept {
        std::size_t h = std::hash<int>{}(r.loc.value);
        auto mix = [&h](std::size_t v) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        };
        for (auto v : r.ipart) mix(v);
        for (auto v : r.fclass) mix(v);
        mix(r.num_classes);
        return h;
    }
};

}  // namespace

RegionAutomaton region_automaton(const TimedSystem& sys, LocationId selected_final,
                                 ClockId tick_clock, const AnalysisCaps& caps,
                                 const std::vector<LocationId>& absorbing_extra) {
    if (!sys.parameter_free())
        throw InvalidArgument("region_automaton: system must be parameter-free");
    if (sys.denom != 1)
        throw InvalidArgument("region_automaton: constants must be integers; scale first");

    RegionAutomaton ra;
    ra.selected_final = selected_final;
    ra.tick_clock = tick_clock;
    ra.ceiling = ceilings(sys);
    ra.location_names = sys.locations;
    ra.clock_names = sys.clocks;
    const Ceiling& ceil = ra.ceiling;

    for (long long c : ceil.per_clock)
        if (c + 1 > 0xFFFF)
            throw CapExceeded("clock ceiling", 0xFFFE);

    for (const Edge& e : sys.edges)
        if (e.source == selected_final)
            throw InvalidArgument("region_automaton: selected final has outgoing edges");

    auto absorbing = [&](LocationId l) {
        if (l == selected_final) return true;
        return std::find(absorbing_extra.begin(), absorbing_extra.end(), l) !=
               absorbing_extra.end();
    };

    // Edges grouped by source location.
    std::vector<std::vector<const Edge*>> out_edges(sys.location_count());
    for (const Edge& e : sys.edges) out_edges[e.source.value].push_back(&e);

    std::unordered_map<Region, std::uint32_t, RegionHash> index;
    std::deque<std::uint32_t> queue;

    auto intern = [&](Region r) -> std::pair<std::uint32_t, bool> {
        auto it = index.find(r);
        if (it != index.end()) return {it->second, false};
        if (ra.states.size() >= caps.max_region_states)
            throw CapExceeded("region states", caps.max_region_states);
        std::uint32_t id = static_cast<std::uint32_t>(ra.states.size());
        ra.states.push_back(r);
        index.emplace(std::move(r), id);
        return {id, true};
    };

    Region init;
    init.loc = sys.init;
    init.ipart.assign(sys.clock_count(), 0);
    init.fclass.assign(sys.clock_count(), 0);
    if (region_satisfies(init, sys.invariant(sys.init), ceil)) {
        auto [id, fresh] = intern(init);
        ra.initial = static_cast<int>(id);
        if (fresh) queue.push_back(id);
    }

    while (!queue.empty()) {
        std::uint32_t sid = queue.front();
        queue.pop_front();
        Region r = ra.states[sid];  // by value: ra.states may reallocate
        if (absorbing(r.loc)) continue;

        Region d = delay_successor(r, ceil);
        if (region_satisfies(d, sys.invariant(r.loc), ceil)) {
            auto [tid, fresh] = intern(d);
            ra.transitions.push_back({sid, false, tid});
            if (fresh) queue.push_back(tid);
        }

        for (const Edge* e : out_edges[r.loc.value]) {
            if (!region_satisfies(r, e->guard, ceil)) continue;
            Region t = region_reset(r, e->resets, ceil);
            t.loc = e->target;
            if (!region_satisfies(t, sys.invariant(e->target), ceil)) continue;
            bool tick = std::find(e->resets.begin(), e->resets.end(), tick_clock) !=
                        e->resets.end();
            auto [tid, fresh] = intern(std::move(t));
            ra.transitions.push_back({sid, tick, tid});
            if (fresh) queue.push_back(tid);
        }
    }

    acceptance_at(ra, selected_final, ra.accept_exact, ra.accept_frac);
    return ra;
}

void acceptance_at(const RegionAutomaton& ra, LocationId final_loc,
                   std::vector<std::pair<std::uint32_t, int>>& exact,
                   std::vector<std::uint32_t>& frac) {
    exact.clear();
    frac.clear();
    std::size_t t = static_cast<std::size_t>(ra.tick_clock.value);
    for (std::uint32_t i = 0; i < ra.states.size(); ++i) {
        const Region& r = ra.states[i];
        if (r.loc != final_loc) continue;
        if (r.capped(t, ra.ceiling))
            throw Error("region automaton: tick clock above 1 at a final region");
        if (r.fclass[t] == 0)
            exact.emplace_back(i, static_cast<int>(r.ipart[t]));
        else
            frac.push_back(i);
    }
}

std::string region_label(const RegionAutomaton& ra, std::uint32_t state) {
    const Region& r = ra.states[state];
    std::string out = ra.location_names[r.loc.value];
    for (std::size_t i = 0; i < r.ipart.size(); ++i) {
        out += i == 0 ? ": " : ", ";
        const std::string& cn = ra.clock_names[i];
        if (r.capped(i, ra.ceiling)) {
            out += cn + ">" + std::to_string(ra.ceiling.per_clock[i]);
        } else if (r.fclass[i] == 0) {
            out += cn + "=" + std::to_string(r.ipart[i]);
        } else {
            out += cn + "in(" + std::to_string(r.ipart[i]) + "," +
                   std::to_string(r.ipart[i] + 1) + ")#" + std::to_string(r.fclass[i]);
        }
    }
    return out;
}

}  // namespace etop
