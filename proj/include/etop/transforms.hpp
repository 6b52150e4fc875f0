#pragma once

#include <vector>

#include "etop/model.hpp"

namespace etop {

/// A secret expiration bound: a non-negative rational or +infinity.
class Bound {
public:
    static Bound infinity() {
        Bound b;
        b.infinite_ = true;
        return b;
    }
    static Bound of(Rational v) {
        if (v.is_negative()) throw InvalidArgument("bound must be non-negative");
        Bound b;
        b.value_ = v;
        return b;
    }

    bool is_infinite() const { return infinite_; }
    const Rational& value() const {
        if (infinite_) throw InvalidArgument("bound is infinite");
        return value_;
    }
    std::string str() const { return infinite_ ? "inf" : value_.str(); }

    friend bool operator==(const Bound&, const Bound&) = default;

private:
    bool infinite_ = false;
    Rational value_;
};

/// Product of a system with its visited-the-private-location flag, the
/// final location split by run class and a fresh clock measuring the time
/// since the last entrance of the private location.
struct ClassifiedSystem {
    TimedSystem product;
    LocationId final_secret;
    LocationId final_expired;
    LocationId final_public;
    ClockId lag_clock;

    std::vector<LocationId> finals() const {
        return {final_secret, final_expired, final_public};
    }
};

/// A system augmented with the once-per-time-unit tick clock.
struct TickedSystem {
    TimedSystem sys;
    ClockId tick_clock;
};

/// Removes every outgoing edge of `at` (the designated final location by
/// default), so runs of the result are exactly the prefixes of input runs
/// truncated at the first visit of that location.
TimedSystem absorb_final(const TimedSystem& sys);
TimedSystem absorb_final(const TimedSystem& sys, LocationId at);

/// Splits arrival at the final location into secret (private seen within
/// `delta`), expired (private seen, but longer ago) and public (private
/// never seen). Requires a parameter-free system and, for finite delta, a
/// delta denominator dividing sys.denom.
ClassifiedSystem classify(const TimedSystem& sys, const Bound& delta);

/// Adds the tick clock: a fresh clock bounded by 1 in every invariant and
/// reset by a "tick" self-loop on every location not in `absorbing`.
/// Requires integer constants (denom == 1).
TickedSystem add_tick(const TimedSystem& sys, const std::vector<LocationId>& absorbing);
TickedSystem add_tick(const TimedSystem& sys);

/// The swap gadget: builds a system whose secret runs are exactly the
/// non-secret runs of the input (and vice versa), every duration shifted
/// by delta + 1. Requires finite delta with denominator dividing sys.denom.
TimedSystem swap_transform(const TimedSystem& sys, const Rational& delta);

/// The reverse gadget: full opacity of the result equals weak opacity of
/// the input. Same construction as swap_transform except for the three
/// edges leaving the old final location.
TimedSystem swap_transform_reverse(const TimedSystem& sys, const Rational& delta);

}  // namespace etop
