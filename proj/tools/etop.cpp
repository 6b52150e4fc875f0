// Command-line frontend: parse a model, run one analysis, print a verdict
// (JSON or text). Exit codes: 0 the asked property holds, 1 it does not,
// 2 usage or parse error, 3 a resource cap was exceeded.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "etop/modelfmt.hpp"
#include "etop/opacity.hpp"
#include "etop/oracle.hpp"

using json = nlohmann::ordered_json;
using namespace etop;

namespace {

constexpr const char* kSchema = "etop/1";

struct CommonOpts {
    std::string model_path;
    std::vector<std::string> binds;
    std::string format = "json";
    std::size_t max_regions = AnalysisCaps{}.max_region_states;
    std::size_t max_subsets = AnalysisCaps{}.max_subsets;

    AnalysisCaps caps() const { return {max_regions, max_subsets}; }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_model = true) {
    auto* m = cmd->add_option("--model", o.model_path, "model file (.ta), or - for stdin");
    if (needs_model) m->required();
    cmd->add_option("--bind", o.binds, "parameter binding name=rational (repeatable)");
    cmd->add_option("--format", o.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--max-regions", o.max_regions, "region state cap");
    cmd->add_option("--max-subsets", o.max_subsets, "determinization subset cap");
}

TimedSystem load_model(const CommonOpts& o) {
    std::string text;
    std::string name = o.model_path;
    if (o.model_path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
        name = "<stdin>";
    } else {
        std::ifstream in(o.model_path);
        if (!in) throw InvalidArgument("cannot open model file: " + o.model_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    TimedSystem sys = parse_model(text, name);
    if (!o.binds.empty()) {
        ParamValuation v;
        for (const std::string& b : o.binds) {
            auto eq = b.find('=');
            if (eq == std::string::npos)
                throw InvalidArgument("--bind expects name=value, got: " + b);
            std::string pname = b.substr(0, eq);
            auto p = sys.find_param(pname);
            if (!p) throw InvalidArgument("unknown parameter in --bind: " + pname);
            v.values[*p] = parse_rational(b.substr(eq + 1));
        }
        sys = instantiate(sys, v);
    }
    return sys;
}

Bound parse_bound(const std::string& s) {
    if (s == "inf" || s == "infinity") return Bound::infinity();
    return Bound::of(parse_rational(s));
}

json rational_json(const Rational& r) { return r.str(); }

json bound_json(const Bound& b) { return b.str(); }

json stats_json(const Stats& s) {
    return json{{"region_states", s.region_states},
                {"subset_states", s.subset_states},
                {"wall_ms", s.wall_ms}};
}

json witness_json(const OpacityWitness& w) {
    return json{{"kind", w.is_point ? "point" : "open"},
                {"lo", rational_json(w.lo)},
                {"hi", rational_json(w.hi)},
                {"side", w.secret_side ? "secret" : "non-secret"}};
}

json interval_json(const Interval& iv) {
    json j;
    j["lo"] = rational_json(iv.lo);
    j["lo_open"] = iv.lo_open;
    j["hi"] = iv.hi ? rational_json(*iv.hi) : json(nullptr);
    j["hi_open"] = iv.hi_open;
    return j;
}

json duration_set_json(const DurationSet& d) {
    IntervalView view = ds_intervals(d);
    json j;
    j["denom"] = d.denom;
    j["intervals"] = json::array();
    for (const Interval& iv : view.intervals) j["intervals"].push_back(interval_json(iv));
    if (view.eventually_periodic) {
        j["eventually_periodic"] =
            json{{"tail_start", rational_json(view.tail_start)},
                 {"period", rational_json(view.period)}};
    } else {
        j["eventually_periodic"] = nullptr;
    }
    return j;
}

json delta_set_json(const DeltaSet& d) {
    json j;
    j["all"] = d.all;
    if (d.all) return j;
    j["points"] = json::array();
    for (long long k : d.points) j["points"].push_back(rational_json(Rational(k, d.denom)));
    j["intervals"] = json::array();
    for (long long k : d.cells)
        j["intervals"].push_back(json{{"lo", rational_json(Rational(k, d.denom))},
                                      {"hi", rational_json(Rational(k + 1, d.denom))}});
    j["includes_infinity"] = d.includes_infinity;
    return j;
}

std::string interval_text(const Interval& iv) {
    std::string s = iv.lo_open ? "(" : "[";
    s += iv.lo.str();
    s += ", ";
    s += iv.hi ? iv.hi->str() : "inf";
    s += (!iv.hi || iv.hi_open) ? ")" : "]";
    return s;
}

std::string duration_set_text(const DurationSet& d) {
    IntervalView view = ds_intervals(d);
    if (view.intervals.empty()) return "empty";
    std::string s;
    for (std::size_t i = 0; i < view.intervals.size(); ++i) {
        if (i) s += " u ";
        const Interval& iv = view.intervals[i];
        if (!iv.lo_open && iv.hi && !iv.hi_open && iv.lo == *iv.hi)
            s += "{" + iv.lo.str() + "}";
        else
            s += interval_text(iv);
    }
    if (view.eventually_periodic)
        s += " ... (repeats with period " + view.period.str() + " from " +
             view.tail_start.str() + ")";
    return s;
}

void emit(const CommonOpts& o, const json& j, const std::string& text) {
    if (o.format == "json")
        std::cout << j.dump() << "\n";
    else
        std::cout << text;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw InvalidArgument("cannot write file: " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// subcommand drivers
// ---------------------------------------------------------------------------

int run_check(const CommonOpts& o, const std::string& delta_s, const std::string& mode_s) {
    TimedSystem sys = load_model(o);
    Bound delta = parse_bound(delta_s);
    Mode mode = mode_s == "full" ? Mode::Full : Mode::Weak;
    Verdict v = decide(sys, delta, mode, o.caps());

    json j{{"schema", kSchema}, {"problem", "decision"}, {"mode", mode_text(mode)},
           {"delta", bound_json(delta)}, {"opaque", v.opaque}};
    if (v.witness) j["witness"] = witness_json(*v.witness);
    j["stats"] = stats_json(v.stats);

    std::string text = std::string(mode_text(mode)) + " " + delta.str() +
                       "-expiring ET-opacity: " + (v.opaque ? "opaque" : "not opaque") + "\n";
    if (v.witness) {
        const auto& w = *v.witness;
        text += "witness duration " +
                (w.is_point ? w.lo.str()
                            : "(" + w.lo.str() + ", " + w.hi.str() + ")") +
                " realizable only as a " + (w.secret_side ? "secret" : "non-secret") +
                " duration\n";
    }
    emit(o, j, text);
    return v.opaque ? 0 : 1;
}

int run_compute_weak(const CommonOpts& o) {
    TimedSystem sys = load_model(o);
    DeltaSet d = compute_weak_set(sys, o.caps());
    json j{{"schema", kSchema}, {"problem", "weak-computation"},
           {"delta_set", delta_set_json(d)}};
    std::string text;
    if (d.all) {
        text = "weakly opaque for every expiration date (including inf)\n";
    } else if (d.empty_set()) {
        text = "weakly opaque for no expiration date\n";
    } else {
        text = "weakly opaque exactly for:";
        for (long long k : d.points) text += " {" + Rational(k, d.denom).str() + "}";
        for (long long k : d.cells)
            text += " (" + Rational(k, d.denom).str() + ", " +
                    Rational(k + 1, d.denom).str() + ")";
        text += "\n";
    }
    emit(o, j, text);
    return d.empty_set() ? 1 : 0;
}

int run_emptiness(const CommonOpts& o, const std::string& mode_s) {
    TimedSystem sys = load_model(o);
    json j{{"schema", kSchema}, {"problem", "emptiness"}, {"mode", mode_s}};
    bool nonempty;
    std::string text;
    if (mode_s == "weak") {
        nonempty = !weak_emptiness(sys, o.caps());
        j["empty"] = !nonempty;
        text = std::string("weak opacity bound set is ") +
               (nonempty ? "non-empty" : "empty") + "\n";
    } else {
        FullEmptinessResult r = full_emptiness(sys, o.caps());
        nonempty = r.nonempty;
        j["empty"] = !r.nonempty;
        j["exactness"] =
            r.exactness == Exactness::Exact ? "exact" : "emptiness_only";
        if (r.set) j["delta_set"] = delta_set_json(*r.set);
        text = std::string("full opacity bound set is ") +
               (nonempty ? "non-empty" : "empty") + "\n";
    }
    emit(o, j, text);
    return nonempty ? 0 : 1;
}

int run_durations(const CommonOpts& o, const std::string& delta_s) {
    TimedSystem sys = load_model(o);
    Bound delta = parse_bound(delta_s);
    ClassDurationSets sets = class_duration_sets(sys, delta, o.caps());
    json j{{"schema", kSchema}, {"problem", "durations"}, {"delta", bound_json(delta)}};
    j["public"] = duration_set_json(sets.pub);
    j["secret"] = duration_set_json(sets.secret);
    j["expired"] = duration_set_json(sets.expired);
    j["stats"] = json{{"region_states", sets.stats.region_states},
                      {"subset_states", sets.stats.subset_states}};
    std::string text = "public:  " + duration_set_text(sets.pub) + "\n" +
                       "secret:  " + duration_set_text(sets.secret) + "\n" +
                       "expired: " + duration_set_text(sets.expired) + "\n";
    emit(o, j, text);
    return 0;
}

int run_transform(const CommonOpts& o, const std::string& op, const std::string& delta_s,
                  long long factor) {
    TimedSystem sys = load_model(o);
    TimedSystem out;
    if (op == "swap" || op == "swap-rev") {
        if (delta_s.empty()) throw InvalidArgument("transform: --delta required for " + op);
        Bound b = parse_bound(delta_s);
        if (b.is_infinite())
            throw InvalidArgument("transform: the swap construction needs a finite delta");
        Rational d = b.value();
        out = op == "swap" ? swap_transform(sys, d) : swap_transform_reverse(sys, d);
    } else if (op == "tick") {
        out = add_tick(sys).sys;
    } else if (op == "scale") {
        if (factor <= 0) throw InvalidArgument("transform: --factor must be positive");
        out = scale(sys, factor);
    } else {
        throw InvalidArgument("transform: unknown --op " + op);
    }
    std::cout << emit_model(out);
    return 0;
}

int run_regions(const CommonOpts& o, const std::string& delta_s, const std::string& cls,
                const std::string& dot_path) {
    TimedSystem sys = load_model(o);
    RegionAutomaton ra;
    if (!delta_s.empty()) {
        Bound delta = parse_bound(delta_s);
        long long q = lcm_ll(sys.denom, delta.is_infinite() ? 1 : delta.value().den());
        TimedSystem integral = scale(sys, q);
        Bound sd = delta.is_infinite() ? delta : Bound::of(delta.value() * Rational(q));
        ClassifiedSystem cs = classify(integral, sd);
        TickedSystem ticked = add_tick(cs.product, cs.finals());
        LocationId sel = cls == "expired"  ? cs.final_expired
                         : cls == "public" ? cs.final_public
                                           : cs.final_secret;
        std::vector<LocationId> extra;
        for (LocationId f : cs.finals())
            if (f != sel) extra.push_back(f);
        ra = region_automaton(ticked.sys, sel, ticked.tick_clock, o.caps(), extra);
    } else {
        TimedSystem integral = scale(sys, sys.denom);
        TimedSystem absorbed = absorb_final(integral);
        TickedSystem ticked = add_tick(absorbed);
        ra = region_automaton(ticked.sys, absorbed.final_loc, ticked.tick_clock, o.caps());
    }
    std::string dot = emit_dot(ra);
    if (dot_path.empty() || dot_path == "-")
        std::cout << dot;
    else
        write_file_atomic(dot_path, dot);
    json j{{"schema", kSchema}, {"problem", "regions"},
           {"states", ra.state_count()}, {"transitions", ra.transitions.size()},
           {"accept_exact", ra.accept_exact.size()}, {"accept_frac", ra.accept_frac.size()}};
    if (!dot_path.empty() && dot_path != "-")
        emit(o, j, "regions: " + std::to_string(ra.state_count()) + " states\n");
    return 0;
}

int run_oracle(const CommonOpts& o, const std::string& delta_s, long long g, long long H,
               std::uint64_t step_cap) {
    TimedSystem sys = load_model(o);
    if (g == 0) g = 2 * (static_cast<long long>(sys.clock_count()) + 2) * sys.denom;

    json j{{"schema", kSchema}, {"problem", "oracle"},
           {"granularity", g}, {"horizon", H}};
    int code = 0;
    std::string text;
    if (!delta_s.empty()) {
        Bound delta = parse_bound(delta_s);
        OracleAgreement a = oracle_agrees(sys, delta, g, H, o.caps(), step_cap);
        j["delta"] = bound_json(delta);
        j["agree"] = a.agree;
        j["inconclusive"] = a.inconclusive;
        j["mismatches"] = a.mismatches;
        text = std::string("oracle vs pipeline: ") +
               (a.agree ? "agree" : (a.inconclusive ? "inconclusive (truncated)" : "DISAGREE")) +
               "\n";
        for (const auto& m : a.mismatches) text += "  " + m + "\n";
        code = a.agree ? 0 : 1;
    } else {
        OracleResult r = oracle_explore(sys, g, H, step_cap);
        j["truncated"] = r.truncated;
        j["arrivals"] = json::array();
        for (const auto& a : r.arrivals) {
            j["arrivals"].push_back(json{{"duration", Rational(a.duration, g).str()},
                                         {"visited", a.visited},
                                         {"lag", a.visited ? Rational(a.lag, g).str() : "-"}});
        }
        text = "sampled " + std::to_string(r.arrivals.size()) + " arrivals" +
               (r.truncated ? " (truncated)" : "") + "\n";
    }
    emit(o, j, text);
    return code;
}

int run_sweep(const CommonOpts& o, const std::vector<std::string>& grid_s,
              const std::vector<std::string>& delta_s, const std::string& mode_s) {
    TimedSystem sys = load_model(o);  // binds not applied here: grid supplies them
    Mode mode = mode_s == "full" ? Mode::Full : Mode::Weak;

    std::vector<GridAxis> grid;
    for (const std::string& s : grid_s) {
        // name=lo..hi:step
        auto eq = s.find('=');
        auto dots = s.find("..");
        auto colon = s.find(':', dots == std::string::npos ? 0 : dots);
        if (eq == std::string::npos || dots == std::string::npos || colon == std::string::npos)
            throw InvalidArgument("--grid expects name=lo..hi:step, got: " + s);
        GridAxis ax;
        auto p = sys.find_param(s.substr(0, eq));
        if (!p) throw InvalidArgument("unknown parameter in --grid: " + s.substr(0, eq));
        ax.param = *p;
        ax.lo = parse_rational(s.substr(eq + 1, dots - eq - 1));
        ax.hi = parse_rational(s.substr(dots + 2, colon - dots - 2));
        ax.step = parse_rational(s.substr(colon + 1));
        grid.push_back(ax);
    }
    std::vector<Bound> deltas;
    for (const std::string& d : delta_s) deltas.push_back(parse_bound(d));

    SweepReport report = sweep(sys, grid, deltas, mode, o.caps());

    json cells = json::array();
    std::string text;
    for (const SweepCell& c : report.cells) {
        json jc;
        json val = json::object();
        std::string vtext;
        for (const auto& [p, r] : c.valuation.values) {
            val[sys.params[p.value]] = rational_json(r);
            vtext += sys.params[p.value] + "=" + r.str() + " ";
        }
        jc["valuation"] = val;
        jc["delta"] = bound_json(c.delta);
        if (c.verdict) {
            jc["opaque"] = c.verdict->opaque;
            text += vtext + "delta=" + c.delta.str() + " -> " +
                    (c.verdict->opaque ? "opaque" : "not opaque") + "\n";
        } else {
            jc["error"] = c.error;
            text += vtext + "delta=" + c.delta.str() + " -> error: " + c.error + "\n";
        }
        cells.push_back(std::move(jc));
    }
    json j{{"schema", kSchema}, {"problem", "sweep"}, {"mode", mode_text(mode)},
           {"cells", cells}};
    emit(o, j, text);
    return 0;
}

int fail(const CommonOpts& o, const std::string& kind, const std::string& msg, int code) {
    if (o.format == "json") {
        json j{{"schema", kSchema}, {"error", {{"kind", kind}, {"message", msg}}}};
        std::cout << j.dump() << "\n";
    }
    std::cerr << "error: " << msg << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"expiring execution-time opacity analyzer for timed automata"};
    app.require_subcommand(1);

    CommonOpts opts;

    std::string delta, mode = "weak", op, cls = "secret", dot_path;
    long long factor = 1, granularity = 0, horizon = 10;
    std::uint64_t step_cap = 0;
    std::vector<std::string> grid_specs, sweep_deltas;

    auto* check = app.add_subcommand("check", "decide opacity at a fixed bound");
    add_common(check, opts);
    check->add_option("--delta", delta, "expiration bound: rational or inf")->required();
    check->add_option("--mode", mode, "weak or full")
        ->check(CLI::IsMember({"weak", "full"}));

    auto* cw = app.add_subcommand("compute-weak", "compute the weak opacity bound set");
    add_common(cw, opts);

    auto* emp = app.add_subcommand("emptiness", "decide emptiness of the bound set");
    add_common(emp, opts);
    emp->add_option("--mode", mode, "weak or full")
        ->check(CLI::IsMember({"weak", "full"}));

    auto* dur = app.add_subcommand("durations", "the three class duration sets");
    add_common(dur, opts);
    dur->add_option("--delta", delta, "expiration bound: rational or inf")->required();

    auto* tr = app.add_subcommand("transform", "apply a model-to-model construction");
    add_common(tr, opts);
    tr->add_option("--op", op, "swap, swap-rev, tick or scale")->required()
        ->check(CLI::IsMember({"swap", "swap-rev", "tick", "scale"}));
    tr->add_option("--delta", delta, "bound for swap/swap-rev");
    tr->add_option("--factor", factor, "factor for scale");

    auto* reg = app.add_subcommand("regions", "build and export the region automaton");
    add_common(reg, opts);
    reg->add_option("--delta", delta, "classify at this bound first");
    reg->add_option("--class", cls, "secret, expired or public")
        ->check(CLI::IsMember({"secret", "expired", "public"}));
    reg->add_option("--dot", dot_path, "write DOT here (- for stdout)");

    auto* orc = app.add_subcommand("oracle", "discrete-time sampling oracle");
    add_common(orc, opts);
    orc->add_option("--delta", delta, "also compare classes against the pipeline");
    orc->add_option("--granularity", granularity, "grid steps per time unit");
    orc->add_option("--horizon", horizon, "explore up to this duration");
    orc->add_option("--step-cap", step_cap, "per-run transition cap");

    auto* sw = app.add_subcommand("sweep", "grid of decisions over parameters and bounds");
    add_common(sw, opts);
    sw->add_option("--grid", grid_specs, "axis name=lo..hi:step (repeatable)");
    sw->add_option("--delta", sweep_deltas, "bound (repeatable)")->required();
    sw->add_option("--mode", mode, "weak or full")
        ->check(CLI::IsMember({"weak", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (check->parsed()) return run_check(opts, delta, mode);
        if (cw->parsed()) return run_compute_weak(opts);
        if (emp->parsed()) return run_emptiness(opts, mode);
        if (dur->parsed()) return run_durations(opts, delta);
        if (tr->parsed()) return run_transform(opts, op, delta, factor);
        if (reg->parsed()) return run_regions(opts, delta, cls, dot_path);
        if (orc->parsed()) return run_oracle(opts, delta, granularity, horizon, step_cap);
        if (sw->parsed()) return run_sweep(opts, grid_specs, sweep_deltas, mode);
    } catch (const CapExceeded& e) {
        return fail(opts, "cap", e.what(), 3);
    } catch (const ParseError& e) {
        return fail(opts, "parse", e.what(), 2);
    } catch (const Error& e) {
        return fail(opts, "usage", e.what(), 2);
    } catch (const std::exception& e) {
        return fail(opts, "internal", e.what(), 2);
    }
    return 2;
}
