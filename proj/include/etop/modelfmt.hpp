#pragma once

#include <string>

#include "etop/model.hpp"
#include "etop/regions.hpp"

namespace etop {

struct SourceSpan {
    std::string file = "<input>";
    int line = 1;
    int column = 1;
    int length = 1;
};

class ParseError : public Error {
public:
    ParseError(SourceSpan span, const std::string& msg)
        : Error(span.file + ":" + std::to_string(span.line) + ":" +
                std::to_string(span.column) + ": " + msg),
          span_(std::move(span)) {}

    const SourceSpan& span() const { return span_; }

private:
    SourceSpan span_;
};

/// Parses the ".ta" text format and validates the result. Throws
/// ParseError for syntax problems (with a source span) and for any
/// diagnostics reported by validate.
TimedSystem parse_model(const std::string& text, const std::string& filename = "<input>");

/// Canonical text form; parse_model(emit_model(sys)) is structurally
/// equal to sys for every valid system. Rationals are emitted exactly,
/// never as floating point.
std::string emit_model(const TimedSystem& sys);

/// Graphviz rendering of a region automaton: tick transitions labeled,
/// epsilon transitions bare, exact-acceptance regions as double circles
/// (offset in the label) and fractional-acceptance regions as double
/// octagons.
std::string emit_dot(const RegionAutomaton& ra);

/// Parses "3", "3/2", "2.5" into an exact rational; used by frontends.
Rational parse_rational(const std::string& text);

}  // namespace etop
