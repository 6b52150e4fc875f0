#include "etop/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

namespace etop {

namespace {

// Configuration on the grid: location, visited flag, lag and every clock
// in 1/g units, plus elapsed total time.
struct Config {
    int loc;
    std::uint8_t visited;
    long long lag;
    long long elapsed;
    std::vector<long long> clocks;

    friend bool operator==(const Config&, const Config&) = default;
};

struct ConfigHash {
    std::size_t operator()(const Config& c) const noexcept {
        std::size_t h = std::hash<int>{}(c.loc);
        auto mix = [&h](std::size_t v) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        };
        mix(c.visited);
        mix(static_cast<std::size_t>(c.lag));
        mix(static_cast<std::size_t>(c.elapsed));
        for (long long v : c.clocks) mix(static_cast<std::size_t>(v));
        return h;
    }
};

bool satisfied_on_grid(const Guard& guard, const std::vector<long long>& clocks,
                       long long g) {
    for (const AtomicConstraint& a : guard.atoms) {
        Rational value(clocks[a.clock.value], g);
        const Rational& c = a.rhs.constant;
        bool ok = false;
        switch (a.op) {
            case CmpOp::Lt: ok = value < c; break;
            case CmpOp::Le: ok = value <= c; break;
            case CmpOp::Eq: ok = value == c; break;
            case CmpOp::Ge: ok = value >= c; break;
            case CmpOp::Gt: ok = value > c; break;
        }
        if (!ok) return false;
    }
    return true;
}

constexpr std::size_t kConfigHardCap = 4'000'000;

}  // namespace

OracleResult oracle_explore(const TimedSystem& sys, long long g, long long horizon,
                            std::uint64_t step_cap) {
    if (!sys.parameter_free())
        throw InvalidArgument("oracle_explore: system must be parameter-free");
    if (g <= 0 || g % (2 * sys.denom) != 0)
        throw InvalidArgument("oracle_explore: granularity must be a positive multiple of "
                              "2 * denom = " + std::to_string(2 * sys.denom));
    if (horizon < 0) throw InvalidArgument("oracle_explore: horizon must be >= 0");
    if (step_cap == 0)
        step_cap = 10ULL * static_cast<std::uint64_t>(g) *
                   static_cast<std::uint64_t>(horizon ? horizon : 1) *
                   std::max<std::uint64_t>(sys.edges.size(), 1);

    OracleResult res;
    res.granularity = g;
    res.horizon = horizon;
    const long long max_elapsed = g * horizon;

    std::unordered_map<Config, std::size_t, ConfigHash> seen;
    std::deque<std::pair<std::size_t, std::uint64_t>> queue;  // node, depth
    std::vector<Config> configs;
    std::set<OracleResult::Arrival> arrivals;
    std::vector<std::size_t> arrival_nodes;

    auto discover = [&](Config c, std::size_t parent, OracleResult::Move move,
                        std::uint64_t depth) {
        if (seen.contains(c)) return;
        if (configs.size() >= kConfigHardCap) {
            res.truncated = true;
            return;
        }
        if (depth > step_cap) {
            res.truncated = true;
            return;
        }
        std::size_t id = configs.size();
        seen.emplace(c, id);
        configs.push_back(c);
        res.nodes.push_back({parent, move});
        if (LocationId(c.loc) == sys.final_loc) {
            OracleResult::Arrival a{c.elapsed, c.visited != 0, c.visited ? c.lag : 0};
            if (arrivals.insert(a).second) arrival_nodes.push_back(id);
            return;  // runs end at the first visit of the final location
        }
        queue.emplace_back(id, depth);
    };

    Config root;
    root.loc = sys.init.value;
    root.visited = sys.init == sys.priv_loc ? 1 : 0;
    root.lag = 0;
    root.elapsed = 0;
    root.clocks.assign(sys.clock_count(), 0);
    if (satisfied_on_grid(sys.invariant(sys.init), root.clocks, g))
        discover(root, SIZE_MAX, {}, 0);

    while (!queue.empty()) {
        auto [id, depth] = queue.front();
        queue.pop_front();
        Config cur = configs[id];

        // delay of one grid step
        if (cur.elapsed + 1 <= max_elapsed) {
            Config d = cur;
            d.elapsed += 1;
            for (long long& v : d.clocks) v += 1;
            if (d.visited) d.lag += 1;
            if (satisfied_on_grid(sys.invariant(LocationId(cur.loc)), d.clocks, g))
                discover(std::move(d), id, {true, 0}, depth + 1);
        }

        for (std::size_t ei = 0; ei < sys.edges.size(); ++ei) {
            const Edge& e = sys.edges[ei];
            if (e.source.value != cur.loc) continue;
            if (!satisfied_on_grid(e.guard, cur.clocks, g)) continue;
            Config t = cur;
            t.loc = e.target.value;
            for (ClockId r : e.resets) t.clocks[r.value] = 0;
            if (!satisfied_on_grid(sys.invariant(e.target), t.clocks, g)) continue;
            if (e.target == sys.priv_loc) {
                t.visited = 1;
                t.lag = 0;
            }
            discover(std::move(t), id, {false, ei}, depth + 1);
        }
    }

    res.arrivals.assign(arrivals.begin(), arrivals.end());
    // arrival_nodes was filled in discovery order; re-sort to match
    std::vector<std::pair<OracleResult::Arrival, std::size_t>> paired;
    std::size_t k = 0;
    for (std::size_t node : arrival_nodes) {
        const Config& c = configs[node];
        paired.push_back({{c.elapsed, c.visited != 0, c.visited ? c.lag : 0}, node});
        ++k;
    }
    std::sort(paired.begin(), paired.end());
    res.arrival_nodes.clear();
    for (auto& [a, node] : paired) res.arrival_nodes.push_back(node);
    return res;
}

OracleAgreement oracle_agrees(const TimedSystem& sys, const Bound& delta, long long g,
                              long long horizon, const AnalysisCaps& caps,
                              std::uint64_t step_cap) {
    if (!delta.is_infinite() && g % (2 * delta.value().den()) != 0)
        throw InvalidArgument(
            "oracle_agrees: granularity must be an even multiple of the delta denominator");

    OracleResult oracle = oracle_explore(sys, g, horizon, step_cap);

    // Oracle-side class memberships, on the grid.
    std::set<long long> o_pub, o_sec, o_exp;
    for (const auto& a : oracle.arrivals) {
        if (!a.visited) {
            o_pub.insert(a.duration);
        } else if (delta.is_infinite() ||
                   Rational(a.lag, g) <= delta.value()) {
            o_sec.insert(a.duration);
        } else {
            o_exp.insert(a.duration);
        }
    }

    ClassDurationSets sets = class_duration_sets(sys, delta, caps);

    OracleAgreement out;
    bool pipeline_only = false;

    auto compare = [&](const char* name, const DurationSet& pipe,
                       const std::set<long long>& orc, const Rational& r) {
        bool p = ds_contains(pipe, r);
        long long grid = (r * Rational(g)).num();  // exact by the g preconditions
        bool o = orc.contains(grid);
        if (p == o) return;
        std::string msg = std::string(name) + " @ " + r.str() + ": pipeline=" +
                          (p ? "yes" : "no") + " oracle=" + (o ? "yes" : "no");
        out.mismatches.push_back(std::move(msg));
        if (p && !o) pipeline_only = true;
    };

    for (long long k = 0; k + 1 <= horizon; ++k) {
        for (const Rational& r : {Rational(k), Rational(k) + Rational(1, 2)}) {
            compare("public", sets.pub, o_pub, r);
            compare("secret", sets.secret, o_sec, r);
            compare("expired", sets.expired, o_exp, r);
        }
    }

    bool oracle_only = false;
    for (const auto& m : out.mismatches)
        if (m.find("pipeline=no") != std::string::npos) oracle_only = true;

    if (out.mismatches.empty()) {
        out.agree = true;
    } else if (oracle.truncated && pipeline_only && !oracle_only) {
        out.agree = false;
        out.inconclusive = true;  // rerun with a larger step cap
    } else {
        out.agree = false;
    }
    return out;
}

}  // namespace etop
