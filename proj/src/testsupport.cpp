#include "etop/testsupport.hpp"

#include <algorithm>
#include <random>

namespace etop {

namespace {

// Thin wrapper over mt19937_64 with hand-rolled bounded draws, so the
// generated models do not depend on the standard library's distribution
// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }
    long long below(long long n) { return n <= 1 ? 0 : static_cast<long long>(raw() % n); }
    long long between(long long lo, long long hi) { return lo + below(hi - lo + 1); }
    bool chance(double p) { return (raw() >> 11) * 0x1.0p-53 < p; }

private:
    std::mt19937_64 engine_;
};

CmpOp pick_op(Rng& rng, double strict_prob) {
    if (rng.chance(strict_prob)) return rng.chance(0.5) ? CmpOp::Lt : CmpOp::Gt;
    switch (rng.below(3)) {
        case 0: return CmpOp::Le;
        case 1: return CmpOp::Ge;
        default: return CmpOp::Eq;
    }
}

Guard random_guard(Rng& rng, const GenSpec& spec, int nclocks, int max_atoms) {
    Guard g;
    int atoms = static_cast<int>(rng.below(max_atoms + 1));
    for (int i = 0; i < atoms; ++i) {
        AtomicConstraint a;
        a.clock = ClockId(static_cast<int>(rng.below(nclocks)));
        a.op = pick_op(rng, spec.strict_prob);
        a.rhs = LinExpr(Rational(rng.between(0, spec.max_constant)));
        g.atoms.push_back(std::move(a));
    }
    return g;
}

std::vector<ClockId> random_resets(Rng& rng, int nclocks) {
    std::vector<ClockId> r;
    for (int c = 0; c < nclocks; ++c)
        if (rng.chance(0.3)) r.push_back(ClockId(c));
    return r;
}

TimedSystem attempt(Rng& rng, const GenSpec& spec) {
    TimedSystem sys;
    sys.name = "gen";
    int nloc = static_cast<int>(rng.between(2, std::max(2, spec.max_locations)));
    int nclk = static_cast<int>(rng.between(1, std::max(1, spec.max_clocks)));

    for (int i = 0; i < nloc; ++i) sys.add_location("l" + std::to_string(i));
    for (int c = 0; c < nclk; ++c) sys.add_clock("x" + std::to_string(c));

    sys.init = LocationId(0);
    sys.final_loc = LocationId(nloc - 1);
    sys.priv_loc = LocationId(static_cast<int>(rng.below(nloc - 1)));  // may equal init

    // Upper-bound invariants keep time from escaping to infinity too often.
    for (int i = 0; i < nloc; ++i) {
        if (LocationId(i) == sys.final_loc || !rng.chance(0.5)) continue;
        AtomicConstraint a;
        a.clock = ClockId(static_cast<int>(rng.below(nclk)));
        a.op = rng.chance(spec.strict_prob) ? CmpOp::Lt : CmpOp::Le;
        a.rhs = LinExpr(Rational(rng.between(1, spec.max_constant)));
        sys.invariants[i].atoms.push_back(std::move(a));
    }

    // Spine: a permutation of all locations from init to final, so the
    // final (and usually the private location) sits on a guarded path.
    std::vector<int> middle;
    for (int i = 1; i + 1 < nloc; ++i) middle.push_back(i);
    for (std::size_t i = middle.size(); i > 1; --i)
        std::swap(middle[i - 1], middle[rng.below(static_cast<long long>(i))]);
    std::vector<int> spine{0};
    spine.insert(spine.end(), middle.begin(), middle.end());
    spine.push_back(nloc - 1);
    for (std::size_t i = 0; i + 1 < spine.size(); ++i) {
        Edge e;
        e.source = LocationId(spine[i]);
        e.target = LocationId(spine[i + 1]);
        if (rng.chance(0.6)) e.guard = random_guard(rng, spec, nclk, 1);
        e.resets = random_resets(rng, nclk);
        sys.edges.push_back(std::move(e));
    }

    int extra = static_cast<int>(spec.edge_density * nloc * nloc);
    for (int i = 0; i < extra; ++i) {
        Edge e;
        e.source = LocationId(static_cast<int>(rng.below(nloc)));
        e.target = LocationId(static_cast<int>(rng.below(nloc)));
        if (e.source == sys.final_loc) continue;  // keep the final absorbing-ish
        e.guard = random_guard(rng, spec, nclk, 2);
        e.resets = random_resets(rng, nclk);
        sys.edges.push_back(std::move(e));
    }

    sys.denom = 1;
    return sys;
}

}  // namespace

TimedSystem gen_ta(const GenSpec& spec) {
    for (std::uint64_t round = 0;; ++round) {
        Rng rng(spec.seed * 0x9e3779b97f4a7c15ULL + round + 1);
        TimedSystem sys = attempt(rng, spec);
        if (validate(sys).empty()) return sys;
    }
}

}  // namespace etop
