#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "etop/regions.hpp"

namespace etop {

/// Ultimately periodic subset of the naturals in canonical form: minimal
/// cycle length, then minimal prefix length. Canonical forms are unique,
/// so structural equality is set equality.
class UPSet {
public:
    UPSet() : cycle_{0} {}  // the empty set

    static UPSet empty_set() { return UPSet(); }
    static UPSet all() { return from_bits({}, {1}); }
    static UPSet from_bits(std::vector<std::uint8_t> prefix, std::vector<std::uint8_t> cycle);
    /// Samples `f` on [0, stem_bound + period_bound) and canonicalizes;
    /// correct whenever f is ultimately periodic within those bounds.
    static UPSet from_function(const std::function<bool(std::uint64_t)>& f,
                               std::size_t stem_bound, std::size_t period_bound);

    bool contains(std::uint64_t k) const {
        if (k < prefix_.size()) return prefix_[k] != 0;
        return cycle_[(k - prefix_.size()) % cycle_.size()] != 0;
    }
    bool empty() const;
    std::size_t stem() const { return prefix_.size(); }
    std::size_t period() const { return cycle_.size(); }
    const std::vector<std::uint8_t>& prefix_bits() const { return prefix_; }
    const std::vector<std::uint8_t>& cycle_bits() const { return cycle_; }

    friend bool operator==(const UPSet&, const UPSet&) = default;

private:
    std::vector<std::uint8_t> prefix_;
    std::vector<std::uint8_t> cycle_;
};

UPSet up_union(const UPSet& a, const UPSet& b);
UPSet up_intersect(const UPSet& a, const UPSet& b);
UPSet up_difference(const UPSet& a, const UPSet& b);
/// a is a subset of b.
bool up_includes(const UPSet& a, const UPSet& b);
bool up_equals(const UPSet& a, const UPSet& b);
/// Least element of the symmetric difference.
std::optional<std::uint64_t> up_first_diff(const UPSet& a, const UPSet& b);
/// Least element of a \ b (the smallest witness against a being included in b).
std::optional<std::uint64_t> up_first_excess(const UPSet& a, const UPSet& b);

/// The determinized tick automaton is a lasso: subsets[j] is the
/// epsilon-closed set of region states reachable by reading tick^j, and
/// subsets[stem + period] would equal subsets[stem].
struct TickLasso {
    std::size_t stem = 0;
    std::size_t period = 1;
    std::vector<std::vector<std::uint64_t>> subsets;  // bitsets over ra.states
    std::size_t distinct_subsets = 0;

    bool any_accepting(const std::vector<std::uint32_t>& states, std::size_t step) const;
    bool any_exact(const std::vector<std::pair<std::uint32_t, int>>& states, int offset,
                   std::size_t step) const;
};

TickLasso tick_lasso(const RegionAutomaton& ra, std::size_t subset_cap);

enum class LangKind { Exact, Frac };

/// The tick-count language of the region automaton:
///   Frac:  k is in the set iff tick^k reaches a fractional-acceptance
///          region (the open interval (k, k+1) is fully realizable);
///   Exact: k is in the set iff some accepting path has j ticks and exact
///          offset o with j + o == k (duration exactly k is realizable).
UPSet unary_language(const RegionAutomaton& ra, LangKind which,
                     std::size_t subset_cap = AnalysisCaps{}.max_subsets);

/// Same, reading acceptance at an alternate absorbing final location of an
/// already-built automaton, reusing a shared lasso.
UPSet unary_language_at(const RegionAutomaton& ra, const TickLasso& lasso,
                        LocationId final_loc, LangKind which);

}  // namespace etop
