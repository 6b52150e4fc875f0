#include "etop/unary.hpp"

#include <algorithm>
#include <unordered_map>

namespace etop {

namespace {

std::size_t min_cycle(const std::vector<std::uint8_t>& cycle) {
    std::size_t p = cycle.size();
    for (std::size_t d = 1; d <= p; ++d) {
        if (p % d != 0) continue;
        bool ok = true;
        for (std::size_t i = d; i < p && ok; ++i) ok = cycle[i] == cycle[i % d];
        if (ok) return d;
    }
    return p;
}

}  // namespace

UPSet UPSet::from_bits(std::vector<std::uint8_t> prefix, std::vector<std::uint8_t> cycle) {
    if (cycle.empty()) cycle.push_back(0);
    for (auto& b : prefix) b = b ? 1 : 0;
    for (auto& b : cycle) b = b ? 1 : 0;

    std::size_t d = min_cycle(cycle);
    cycle.resize(d);

    // Absorb prefix bits that already follow the cycle: popping the last
    // prefix bit re-anchors the cycle one step earlier (rotate right).
    while (!prefix.empty() && prefix.back() == cycle[d - 1]) {
        prefix.pop_back();
        std::rotate(cycle.rbegin(), cycle.rbegin() + 1, cycle.rend());
    }

    UPSet s;
    s.prefix_ = std::move(prefix);
    s.cycle_ = std::move(cycle);
    return s;
}

UPSet UPSet::from_function(const std::function<bool(std::uint64_t)>& f,
                           std::size_t stem_bound, std::size_t period_bound) {
    if (period_bound == 0) period_bound = 1;
    std::vector<std::uint8_t> prefix(stem_bound), cycle(period_bound);
    for (std::size_t k = 0; k < stem_bound; ++k) prefix[k] = f(k) ? 1 : 0;
    for (std::size_t k = 0; k < period_bound; ++k) cycle[k] = f(stem_bound + k) ? 1 : 0;
    return from_bits(std::move(prefix), std::move(cycle));
}

bool UPSet::empty() const {
    for (auto b : prefix_)
        if (b) return false;
    for (auto b : cycle_)
        if (b) return false;
    return true;
}

namespace {

// Horizon after which two ultimately periodic sets agree everywhere if
// they agree pointwise below it.
std::uint64_t compare_horizon(const UPSet& a, const UPSet& b) {
    std::uint64_t stem = std::max(a.stem(), b.stem());
    std::uint64_t l = std::lcm<std::uint64_t>(a.period(), b.period());
    return stem + l;
}

UPSet pointwise(const UPSet& a, const UPSet& b, const std::function<bool(bool, bool)>& op) {
    std::uint64_t stem = std::max(a.stem(), b.stem());
    std::uint64_t l = std::lcm<std::uint64_t>(a.period(), b.period());
    return UPSet::from_function(
        [&](std::uint64_t k) { return op(a.contains(k), b.contains(k)); },
        static_cast<std::size_t>(stem), static_cast<std::size_t>(l));
}

}  // namespace

UPSet up_union(const UPSet& a, const UPSet& b) {
    return pointwise(a, b, [](bool x, bool y) { return x || y; });
}
UPSet up_intersect(const UPSet& a, const UPSet& b) {
    return pointwise(a, b, [](bool x, bool y) { return x && y; });
}
UPSet up_difference(const UPSet& a, const UPSet& b) {
    return pointwise(a, b, [](bool x, bool y) { return x && !y; });
}

bool up_includes(const UPSet& a, const UPSet& b) {
    return !up_first_excess(a, b).has_value();
}

bool up_equals(const UPSet& a, const UPSet& b) { return a == b; }

std::optional<std::uint64_t> up_first_diff(const UPSet& a, const UPSet& b) {
    std::uint64_t h = compare_horizon(a, b);
    for (std::uint64_t k = 0; k < h; ++k)
        if (a.contains(k) != b.contains(k)) return k;
    return std::nullopt;
}

std::optional<std::uint64_t> up_first_excess(const UPSet& a, const UPSet& b) {
    std::uint64_t h = compare_horizon(a, b);
    for (std::uint64_t k = 0; k < h; ++k)
        if (a.contains(k) && !b.contains(k)) return k;
    return std::nullopt;
}

bool TickLasso::any_accepting(const std::vector<std::uint32_t>& states,
                              std::size_t step) const {
    const auto& bits = subsets[step];
    for (std::uint32_t s : states)
        if (bits[s >> 6] & (1ULL << (s & 63))) return true;
    return false;
}

bool TickLasso::any_exact(const std::vector<std::pair<std::uint32_t, int>>& states,
                          int offset, std::size_t step) const {
    const auto& bits = subsets[step];
    for (auto [s, o] : states)
        if (o == offset && (bits[s >> 6] & (1ULL << (s & 63)))) return true;
    return false;
}

namespace {

struct BitsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
        std::size_t h = v.size();
        for (std::uint64_t w : v)
            h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace

TickLasso tick_lasso(const RegionAutomaton& ra, std::size_t subset_cap) {
    TickLasso lasso;
    std::size_t n = ra.states.size();
    std::size_t words = (n + 63) / 64;

    std::vector<std::vector<std::uint32_t>> eps(n), tick(n);
    for (const auto& t : ra.transitions)
        (t.tick ? tick : eps)[t.source].push_back(t.target);

    std::vector<std::uint32_t> stack;
    auto closure = [&](std::vector<std::uint64_t>& bits) {
        stack.clear();
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t m = bits[w];
            while (m) {
                std::uint32_t s = static_cast<std::uint32_t>(w * 64 + std::countr_zero(m));
                m &= m - 1;
                stack.push_back(s);
            }
        }
        while (!stack.empty()) {
            std::uint32_t s = stack.back();
            stack.pop_back();
            for (std::uint32_t t : eps[s]) {
                if (!(bits[t >> 6] & (1ULL << (t & 63)))) {
                    bits[t >> 6] |= 1ULL << (t & 63);
                    stack.push_back(t);
                }
            }
        }
    };

    std::vector<std::uint64_t> cur(words, 0);
    if (ra.initial >= 0) {
        cur[static_cast<std::size_t>(ra.initial) >> 6] |=
            1ULL << (static_cast<std::size_t>(ra.initial) & 63);
        closure(cur);
    }

    std::unordered_map<std::vector<std::uint64_t>, std::size_t, BitsHash> seen;
    for (;;) {
        auto it = seen.find(cur);
        if (it != seen.end()) {
            lasso.stem = it->second;
            lasso.period = lasso.subsets.size() - it->second;
            break;
        }
        if (lasso.subsets.size() >= subset_cap)
            throw CapExceeded("determinization subsets", subset_cap);
        seen.emplace(cur, lasso.subsets.size());
        lasso.subsets.push_back(cur);

        std::vector<std::uint64_t> next(words, 0);
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t m = cur[w];
            while (m) {
                std::uint32_t s = static_cast<std::uint32_t>(w * 64 + std::countr_zero(m));
                m &= m - 1;
                for (std::uint32_t t : tick[s]) next[t >> 6] |= 1ULL << (t & 63);
            }
        }
        closure(next);
        cur = std::move(next);
    }
    lasso.distinct_subsets = lasso.subsets.size();
    return lasso;
}

namespace {

UPSet language_from_flags(const TickLasso& lasso,
                          const std::vector<std::pair<std::uint32_t, int>>& exact,
                          const std::vector<std::uint32_t>& frac, LangKind which) {
    auto step_of = [&](std::uint64_t k) -> std::size_t {
        if (k < lasso.subsets.size()) return static_cast<std::size_t>(k);
        return lasso.stem + static_cast<std::size_t>((k - lasso.stem) % lasso.period);
    };
    if (which == LangKind::Frac) {
        return UPSet::from_function(
            [&](std::uint64_t k) { return lasso.any_accepting(frac, step_of(k)); },
            lasso.stem, lasso.period);
    }
    // Duration k is realized exactly either on arrival with the pending
    // tick (k-1 ticks, tick clock at 1) or just after it fired (k ticks,
    // tick clock at 0).
    return UPSet::from_function(
        [&](std::uint64_t k) {
            if (lasso.any_exact(exact, 0, step_of(k))) return true;
            return k >= 1 && lasso.any_exact(exact, 1, step_of(k - 1));
        },
        lasso.stem + 1, lasso.period);
}

}  // namespace

UPSet unary_language(const RegionAutomaton& ra, LangKind which, std::size_t subset_cap) {
    TickLasso lasso = tick_lasso(ra, subset_cap);
    return language_from_flags(lasso, ra.accept_exact, ra.accept_frac, which);
}

UPSet unary_language_at(const RegionAutomaton& ra, const TickLasso& lasso,
                        LocationId final_loc, LangKind which) {
    std::vector<std::pair<std::uint32_t, int>> exact;
    std::vector<std::uint32_t> frac;
    acceptance_at(ra, final_loc, exact, frac);
    return language_from_flags(lasso, exact, frac, which);
}

}  // namespace etop
