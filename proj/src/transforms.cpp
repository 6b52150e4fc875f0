#include "etop/transforms.hpp"

#include <algorithm>
#include <set>

namespace etop {

namespace {

std::string fresh_name(const std::vector<std::string>& taken, std::string base) {
    while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "_";
    return base;
}

AtomicConstraint atom(ClockId clock, CmpOp op, Rational c) {
    return AtomicConstraint{clock, op, LinExpr(c)};
}

Guard conj(Guard g, AtomicConstraint a) {
    g.atoms.push_back(std::move(a));
    return g;
}

std::vector<ClockId> with_reset(std::vector<ClockId> resets, ClockId extra) {
    if (std::find(resets.begin(), resets.end(), extra) == resets.end())
        resets.push_back(extra);
    std::sort(resets.begin(), resets.end());
    return resets;
}

void require_parameter_free(const TimedSystem& sys, const char* op) {
    if (!sys.parameter_free())
        throw InvalidArgument(std::string(op) + ": system must be parameter-free");
}

}  // namespace

TimedSystem absorb_final(const TimedSystem& sys) { return absorb_final(sys, sys.final_loc); }

TimedSystem absorb_final(const TimedSystem& sys, LocationId at) {
    require_parameter_free(sys, "absorb_final");
    TimedSystem out = sys;
    std::erase_if(out.edges, [&](const Edge& e) { return e.source == at; });
    return out;
}

ClassifiedSystem classify(const TimedSystem& sys, const Bound& delta) {
    require_parameter_free(sys, "classify");
    if (!delta.is_infinite() && sys.denom % delta.value().den() != 0)
        throw InvalidArgument(
            "classify: delta denominator " + std::to_string(delta.value().den()) +
            " does not divide system denom " + std::to_string(sys.denom) +
            "; scale the system first");

    ClassifiedSystem cs;
    TimedSystem& out = cs.product;
    out.name = sys.name + "_cls";
    out.actions = sys.actions;
    out.clocks = sys.clocks;
    out.denom = sys.denom;
    cs.lag_clock = out.add_clock(fresh_name(sys.clocks, "y"));

    // Product locations (l, flag) for every non-final l; flag 1 means the
    // private location has been visited.
    std::vector<std::array<LocationId, 2>> of(sys.location_count(),
                                              {LocationId(), LocationId()});
    for (std::size_t i = 0; i < sys.location_count(); ++i) {
        LocationId l(static_cast<int>(i));
        if (l == sys.final_loc) continue;
        of[i][0] = out.add_location(sys.locations[i] + "__pub");
        of[i][1] = out.add_location(sys.locations[i] + "__sec");
        out.invariants[of[i][0].value] = sys.invariants[i];
        out.invariants[of[i][1].value] = sys.invariants[i];
    }
    cs.final_secret = out.add_location(fresh_name(sys.locations, "final_secret"));
    cs.final_expired = out.add_location(fresh_name(sys.locations, "final_expired"));
    cs.final_public = out.add_location(fresh_name(sys.locations, "final_public"));
    // Entry into any of the three finals must still satisfy the original
    // final invariant; dwell there is irrelevant (no outgoing edges).
    for (LocationId f : cs.finals())
        out.invariants[f.value] = sys.invariants[sys.final_loc.value];

    out.init = of[sys.init.value][sys.init == sys.priv_loc ? 1 : 0];
    out.priv_loc = of[sys.priv_loc.value][1];
    out.final_loc = cs.final_secret;

    for (const Edge& e : sys.edges) {
        if (e.source == sys.final_loc) continue;  // final is absorbing
        for (int flag = 0; flag <= 1; ++flag) {
            Edge base;
            base.source = of[e.source.value][flag];
            base.guard = e.guard;
            base.action = e.action;
            base.resets = e.resets;
            if (e.target == sys.final_loc) {
                if (flag == 0) {
                    Edge pub = base;
                    pub.target = cs.final_public;
                    out.edges.push_back(std::move(pub));
                } else if (delta.is_infinite()) {
                    Edge sec = base;
                    sec.guard = conj(sec.guard, atom(cs.lag_clock, CmpOp::Ge, Rational(0)));
                    sec.target = cs.final_secret;
                    out.edges.push_back(std::move(sec));
                } else {
                    Edge sec = base;
                    sec.guard = conj(sec.guard, atom(cs.lag_clock, CmpOp::Le, delta.value()));
                    sec.target = cs.final_secret;
                    out.edges.push_back(std::move(sec));
                    Edge exp = base;
                    exp.guard = conj(exp.guard, atom(cs.lag_clock, CmpOp::Gt, delta.value()));
                    exp.target = cs.final_expired;
                    out.edges.push_back(std::move(exp));
                }
            } else if (e.target == sys.priv_loc) {
                Edge priv = base;
                priv.resets = with_reset(priv.resets, cs.lag_clock);
                priv.target = of[e.target.value][1];
                out.edges.push_back(std::move(priv));
            } else {
                Edge plain = base;
                plain.target = of[e.target.value][flag];
                out.edges.push_back(std::move(plain));
            }
        }
    }
    return cs;
}

TickedSystem add_tick(const TimedSystem& sys) {
    return add_tick(sys, {sys.final_loc});
}

TickedSystem add_tick(const TimedSystem& sys, const std::vector<LocationId>& absorbing) {
    require_parameter_free(sys, "add_tick");
    if (sys.denom != 1)
        throw InvalidArgument("add_tick: constants must be integers; scale by " +
                              std::to_string(sys.denom) + " first");
    TickedSystem ts;
    ts.sys = sys;
    ts.tick_clock = ts.sys.add_clock(fresh_name(sys.clocks, "t"));
    ts.sys.note_action("tick");

    for (std::size_t i = 0; i < ts.sys.location_count(); ++i) {
        LocationId l(static_cast<int>(i));
        ts.sys.invariants[i] = conj(ts.sys.invariants[i],
                                    atom(ts.tick_clock, CmpOp::Le, Rational(1)));
        if (std::find(absorbing.begin(), absorbing.end(), l) != absorbing.end()) continue;
        Edge loop;
        loop.source = l;
        loop.target = l;
        loop.guard = conj(Guard{}, atom(ts.tick_clock, CmpOp::Eq, Rational(1)));
        loop.action = "tick";
        loop.resets = {ts.tick_clock};
        ts.sys.edges.push_back(std::move(loop));
    }
    return ts;
}

namespace {

// Shared skeleton of the two swap gadgets: fresh clocks y (time since the
// last private entrance, initialized to delta+1 by waiting in the new
// initial location) and z (reset on every edge, forcing urgency where the
// invariant pins z == 0).
TimedSystem swap_common(const TimedSystem& sys, const Rational& delta, bool reverse) {
    require_parameter_free(sys, "swap_transform");
    if (delta.is_negative()) throw InvalidArgument("swap_transform: delta must be >= 0");
    if (sys.denom % delta.den() != 0)
        throw InvalidArgument("swap_transform: delta denominator " +
                              std::to_string(delta.den()) + " does not divide system denom " +
                              std::to_string(sys.denom) + "; scale the system first");

    TimedSystem out = absorb_final(sys);
    out.name = sys.name + (reverse ? "_swaprev" : "_swap");

    ClockId y = out.add_clock(fresh_name(out.clocks, "y"));
    ClockId z = out.add_clock(fresh_name(out.clocks, "z"));
    Rational zero(0), delta1 = delta + Rational(1);

    // Original edges: z reset everywhere, y additionally on entering the
    // old private location.
    std::vector<ClockId> all_orig;
    for (std::size_t i = 0; i < sys.clock_count(); ++i)
        all_orig.push_back(ClockId(static_cast<int>(i)));
    for (Edge& e : out.edges) {
        e.resets = with_reset(std::move(e.resets), z);
        if (e.target == sys.priv_loc) e.resets = with_reset(std::move(e.resets), y);
    }

    LocationId new_init = out.add_location(fresh_name(out.locations, "sw_init"));
    LocationId new_priv = out.add_location(fresh_name(out.locations, "sw_priv"));
    LocationId new_final = out.add_location(fresh_name(out.locations, "sw_final"));

    out.invariants[new_init.value] = conj(Guard{}, atom(y, CmpOp::Le, delta1));
    out.invariants[new_priv.value] = conj(Guard{}, atom(z, CmpOp::Eq, zero));
    out.invariants[new_final.value] = conj(Guard{}, atom(z, CmpOp::Eq, zero));
    out.invariants[sys.final_loc.value] =
        conj(out.invariants[sys.final_loc.value], atom(z, CmpOp::Eq, zero));

    Edge enter;
    enter.source = new_init;
    enter.guard = conj(Guard{}, atom(y, CmpOp::Eq, delta1));
    enter.resets = with_reset(all_orig, z);  // everything except y
    enter.target = sys.init;
    out.edges.push_back(std::move(enter));

    auto exit_edge = [&](CmpOp op, LocationId target) {
        Edge e;
        e.source = sys.final_loc;
        e.guard = conj(conj(Guard{}, atom(z, CmpOp::Eq, zero)), atom(y, op, delta));
        e.target = target;
        out.edges.push_back(std::move(e));
    };
    if (!reverse) {
        exit_edge(CmpOp::Gt, new_priv);
        exit_edge(CmpOp::Le, new_final);
    } else {
        exit_edge(CmpOp::Le, new_priv);
        exit_edge(CmpOp::Gt, new_final);
        exit_edge(CmpOp::Gt, new_priv);
    }
    Edge through;
    through.source = new_priv;
    through.guard = conj(Guard{}, atom(z, CmpOp::Eq, zero));
    through.target = new_final;
    out.edges.push_back(std::move(through));

    out.init = new_init;
    out.priv_loc = new_priv;
    out.final_loc = new_final;
    return out;
}

}  // namespace

TimedSystem swap_transform(const TimedSystem& sys, const Rational& delta) {
    return swap_common(sys, delta, false);
}

TimedSystem swap_transform_reverse(const TimedSystem& sys, const Rational& delta) {
    return swap_common(sys, delta, true);
}

}  // namespace etop
