#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etop/rational.hpp"

namespace etop {

/// Dense integer identifier with a tag type so clock, parameter and
/// location indices cannot be mixed up.
template <class Tag>
struct Id {
    int value = -1;

    constexpr Id() = default;
    constexpr explicit Id(int v) : value(v) {}
    constexpr bool valid() const { return value >= 0; }
    friend constexpr auto operator<=>(Id, Id) = default;
};

using ClockId = Id<struct ClockTag>;
using ParamId = Id<struct ParamTag>;
using LocationId = Id<struct LocationTag>;

/// Linear expression over parameters plus a rational constant:
/// sum of coeff_i * p_i + constant. Only nonzero coefficients are stored.
struct LinExpr {
    std::map<ParamId, long long> coeffs;
    Rational constant;

    LinExpr() = default;
    // NOLINTNEXTLINE(google-explicit-constructor)
    LinExpr(Rational c) : constant(c) {}

    bool is_constant() const { return coeffs.empty(); }
    friend bool operator==(const LinExpr&, const LinExpr&) = default;
};

enum class CmpOp { Lt, Le, Eq, Ge, Gt };

const char* cmp_op_text(CmpOp op);

/// One inequality "clock op rhs".
struct AtomicConstraint {
    ClockId clock;
    CmpOp op = CmpOp::Le;
    LinExpr rhs;

    friend bool operator==(const AtomicConstraint&, const AtomicConstraint&) = default;
};

/// Conjunction of atomic constraints; an empty list is "true".
struct Guard {
    std::vector<AtomicConstraint> atoms;

    bool is_true() const { return atoms.empty(); }
    friend bool operator==(const Guard&, const Guard&) = default;
};

struct Edge {
    LocationId source;
    Guard guard;
    std::string action;            // empty when the edge has no sync label
    std::vector<ClockId> resets;   // sorted, unique
    LocationId target;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// A (parametric) timed automaton with designated initial, private and
/// final locations. `denom` is the global denominator: every constant in
/// guards and invariants has a denominator dividing it, so after
/// instantiation the system can be scaled to integer constants by `denom`.
struct TimedSystem {
    std::string name;
    std::vector<std::string> actions;    // distinct non-empty sync labels
    std::vector<std::string> locations;  // index == LocationId
    LocationId init;
    LocationId priv_loc;
    LocationId final_loc;
    std::vector<std::string> clocks;     // index == ClockId
    std::vector<std::string> params;     // index == ParamId
    std::vector<Guard> invariants;       // one per location
    std::vector<Edge> edges;
    long long denom = 1;

    std::size_t clock_count() const { return clocks.size(); }
    std::size_t location_count() const { return locations.size(); }
    bool parameter_free() const { return params.empty(); }

    const Guard& invariant(LocationId l) const { return invariants[l.value]; }
    const std::string& location_name(LocationId l) const { return locations[l.value]; }

    LocationId add_location(std::string name);
    ClockId add_clock(std::string name);
    ParamId add_param(std::string name);
    void note_action(const std::string& action);

    std::optional<LocationId> find_location(const std::string& name) const;
    std::optional<ClockId> find_clock(const std::string& name) const;
    std::optional<ParamId> find_param(const std::string& name) const;

    friend bool operator==(const TimedSystem&, const TimedSystem&) = default;
};

/// Total map from parameters to non-negative rationals.
struct ParamValuation {
    std::map<ParamId, Rational> values;

    friend bool operator==(const ParamValuation&, const ParamValuation&) = default;
};

enum class ParamUse { Lower, Upper, Unused, Violating };

struct LUClassification {
    std::vector<ParamUse> uses;  // index == ParamId

    bool is_lu() const {
        for (ParamUse u : uses)
            if (u == ParamUse::Violating) return false;
        return true;
    }
};

/// Structural validation; returns one message per violated invariant,
/// empty when the system is well-formed.
std::vector<std::string> validate(const TimedSystem& sys);

/// Substitutes every parameter per `v`; the result is parameter-free and
/// its denom absorbs the denominators introduced by `v`.
TimedSystem instantiate(const TimedSystem& sys, const ParamValuation& v);

/// Multiplies every constant by q (> 0); every run duration of the result
/// is q times a run duration of the input.
TimedSystem scale(const TimedSystem& sys, long long q);

LUClassification lu_classify(const TimedSystem& sys);

}  // namespace etop

namespace std {
template <class Tag>
struct hash<etop::Id<Tag>> {
    size_t operator()(etop::Id<Tag> id) const noexcept {
        return std::hash<int>{}(id.value);
    }
};
}  // namespace std
