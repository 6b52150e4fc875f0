#include "etop/model.hpp"

#include <algorithm>
#include <set>

namespace etop {

const char* cmp_op_text(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Eq: return "==";
        case CmpOp::Ge: return ">=";
        case CmpOp::Gt: return ">";
    }
    return "?";
}

LocationId TimedSystem::add_location(std::string name) {
    locations.push_back(std::move(name));
    invariants.emplace_back();
    return LocationId(static_cast<int>(locations.size()) - 1);
}

ClockId TimedSystem::add_clock(std::string name) {
    clocks.push_back(std::move(name));
    return ClockId(static_cast<int>(clocks.size()) - 1);
}

ParamId TimedSystem::add_param(std::string name) {
    params.push_back(std::move(name));
    return ParamId(static_cast<int>(params.size()) - 1);
}

void TimedSystem::note_action(const std::string& action) {
    if (action.empty()) return;
    if (std::find(actions.begin(), actions.end(), action) == actions.end())
        actions.push_back(action);
}

namespace {

template <class Vec>
std::optional<int> find_name(const Vec& names, const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

}  // namespace

std::optional<LocationId> TimedSystem::find_location(const std::string& name) const {
    if (auto i = find_name(locations, name)) return LocationId(*i);
    return std::nullopt;
}
std::optional<ClockId> TimedSystem::find_clock(const std::string& name) const {
    if (auto i = find_name(clocks, name)) return ClockId(*i);
    return std::nullopt;
}
std::optional<ParamId> TimedSystem::find_param(const std::string& name) const {
    if (auto i = find_name(params, name)) return ParamId(*i);
    return std::nullopt;
}

namespace {

void check_unique(const std::vector<std::string>& names, const char* kind,
                  std::vector<std::string>& out) {
    std::set<std::string> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second)
            out.push_back(std::string(kind) + " name not unique: " + n);
}

bool in_range(int v, std::size_t n) { return v >= 0 && static_cast<std::size_t>(v) < n; }

void check_linexpr(const TimedSystem& sys, const LinExpr& e, const std::string& where,
                   std::vector<std::string>& out) {
    for (const auto& [p, c] : e.coeffs) {
        if (!in_range(p.value, sys.params.size()))
            out.push_back(where + ": unknown parameter index " + std::to_string(p.value));
        if (c == 0)
            out.push_back(where + ": zero coefficient stored (not canonical)");
    }
    if (e.constant.den() <= 0)
        out.push_back(where + ": non-positive constant denominator");
    else if (sys.denom % e.constant.den() != 0)
        out.push_back(where + ": constant denominator " + std::to_string(e.constant.den()) +
                      " does not divide system denom " + std::to_string(sys.denom));
}

void check_guard(const TimedSystem& sys, const Guard& g, const std::string& where,
                 std::vector<std::string>& out) {
    for (const auto& a : g.atoms) {
        if (!in_range(a.clock.value, sys.clocks.size()))
            out.push_back(where + ": unknown clock index " + std::to_string(a.clock.value));
        check_linexpr(sys, a.rhs, where, out);
    }
}

}  // namespace

std::vector<std::string> validate(const TimedSystem& sys) {
    std::vector<std::string> out;

    check_unique(sys.locations, "location", out);
    check_unique(sys.clocks, "clock", out);
    check_unique(sys.params, "param", out);

    if (!in_range(sys.init.value, sys.location_count()))
        out.push_back("init location undefined");
    if (!in_range(sys.priv_loc.value, sys.location_count()))
        out.push_back("private location undefined");
    if (!in_range(sys.final_loc.value, sys.location_count()))
        out.push_back("final location undefined");
    if (sys.init == sys.final_loc) out.push_back("init equals final");
    if (sys.priv_loc == sys.final_loc) out.push_back("private equals final");

    if (sys.denom < 1) out.push_back("denom must be >= 1");

    if (sys.invariants.size() != sys.location_count())
        out.push_back("invariant table size differs from location count");
    for (std::size_t i = 0; i < sys.invariants.size() && i < sys.location_count(); ++i)
        check_guard(sys, sys.invariants[i], "invariant of " + sys.locations[i], out);

    for (std::size_t i = 0; i < sys.edges.size(); ++i) {
        const Edge& e = sys.edges[i];
        std::string where = "edge #" + std::to_string(i);
        if (!in_range(e.source.value, sys.location_count()))
            out.push_back(where + ": source location undefined");
        else
            where += " (" + sys.locations[e.source.value] +
                     (in_range(e.target.value, sys.location_count())
                          ? " -> " + sys.locations[e.target.value]
                          : "") +
                     ")";
        if (!in_range(e.target.value, sys.location_count()))
            out.push_back(where + ": target location undefined");
        for (ClockId c : e.resets)
            if (!in_range(c.value, sys.clocks.size()))
                out.push_back(where + ": resets undeclared clock index " +
                              std::to_string(c.value));
        if (!std::is_sorted(e.resets.begin(), e.resets.end()) ||
            std::adjacent_find(e.resets.begin(), e.resets.end()) != e.resets.end())
            out.push_back(where + ": reset set not sorted/unique");
        check_guard(sys, e.guard, where, out);
    }
    return out;
}

namespace {

LinExpr substitute(const LinExpr& e, const ParamValuation& v) {
    LinExpr r;
    r.constant = e.constant;
    for (const auto& [p, c] : e.coeffs) {
        auto it = v.values.find(p);
        if (it == v.values.end())
            throw InvalidArgument("instantiate: missing value for parameter index " +
                                  std::to_string(p.value));
        r.constant = r.constant + Rational(c) * it->second;
    }
    return r;
}

void for_each_linexpr(TimedSystem& sys, const std::function<void(LinExpr&)>& fn) {
    for (Guard& g : sys.invariants)
        for (AtomicConstraint& a : g.atoms) fn(a.rhs);
    for (Edge& e : sys.edges)
        for (AtomicConstraint& a : e.guard.atoms) fn(a.rhs);
}

void refresh_denom(TimedSystem& sys, long long floor_denom) {
    long long d = floor_denom;
    for_each_linexpr(sys, [&](LinExpr& e) { d = lcm_ll(d, e.constant.den()); });
    sys.denom = d;
}

}  // namespace

TimedSystem instantiate(const TimedSystem& sys, const ParamValuation& v) {
    for (std::size_t i = 0; i < sys.params.size(); ++i) {
        auto it = v.values.find(ParamId(static_cast<int>(i)));
        if (it == v.values.end())
            throw InvalidArgument("instantiate: missing value for parameter " + sys.params[i]);
        if (it->second.is_negative())
            throw InvalidArgument("instantiate: negative value for parameter " + sys.params[i]);
    }
    TimedSystem out = sys;
    out.params.clear();
    for_each_linexpr(out, [&](LinExpr& e) { e = substitute(e, v); });
    refresh_denom(out, sys.denom);
    return out;
}

TimedSystem scale(const TimedSystem& sys, long long q) {
    if (q <= 0) throw InvalidArgument("scale: factor must be positive");
    if (!sys.parameter_free()) throw InvalidArgument("scale: system must be parameter-free");
    TimedSystem out = sys;
    Rational factor(q);
    for_each_linexpr(out, [&](LinExpr& e) { e.constant = e.constant * factor; });
    refresh_denom(out, 1);
    return out;
}

LUClassification lu_classify(const TimedSystem& sys) {
    LUClassification cls;
    std::size_t n = sys.params.size();
    std::vector<bool> lower_ok(n, true), upper_ok(n, true), used(n, false);

    auto visit = [&](const Guard& g) {
        for (const AtomicConstraint& a : g.atoms) {
            for (const auto& [p, coeff] : a.rhs.coeffs) {
                if (coeff == 0) continue;
                std::size_t i = static_cast<std::size_t>(p.value);
                used[i] = true;
                bool le_like = a.op == CmpOp::Le || a.op == CmpOp::Lt || a.op == CmpOp::Eq;
                bool ge_like = a.op == CmpOp::Ge || a.op == CmpOp::Gt || a.op == CmpOp::Eq;
                if (le_like) {
                    if (coeff < 0) upper_ok[i] = false;
                    if (coeff > 0) lower_ok[i] = false;
                }
                if (ge_like) {
                    if (coeff > 0) upper_ok[i] = false;
                    if (coeff < 0) lower_ok[i] = false;
                }
            }
        }
    };
    for (const Guard& g : sys.invariants) visit(g);
    for (const Edge& e : sys.edges) visit(e.guard);

    cls.uses.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!used[i])
            cls.uses[i] = ParamUse::Unused;
        else if (upper_ok[i])
            cls.uses[i] = ParamUse::Upper;
        else if (lower_ok[i])
            cls.uses[i] = ParamUse::Lower;
        else
            cls.uses[i] = ParamUse::Violating;
    }
    return cls;
}

}  // namespace etop
