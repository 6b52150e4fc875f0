#include "etop/modelfmt.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace etop {

namespace {

enum class Tok {
    Ident, Int, Decimal,
    Semi, Arrow, AndAnd, Lt, Le, EqEq, Ge, Gt,
    Plus, Minus, Star, Slash, LBrace, RBrace, Comma,
    End
};

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

class Lexer {
public:
    Lexer(const std::string& text, std::string file)
        : text_(text), file_(std::move(file)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_ws();
            Token t = next();
            bool end = t.kind == Tok::End;
            out.push_back(std::move(t));
            if (end) return out;
        }
    }

private:
    void skip_ws() {
        for (;;) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
                advance();
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            return;
        }
    }

    Token next() {
        SourceSpan span{file_, line_, col_, 1};
        if (pos_ >= text_.size()) return {Tok::End, "", span};
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string s;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                s += text_[pos_];
                advance();
            }
            span.length = static_cast<int>(s.size());
            return {Tok::Ident, std::move(s), span};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string s;
            bool decimal = false;
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                s += text_[pos_];
                advance();
            }
            if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
                std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                decimal = true;
                s += '.';
                advance();
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    s += text_[pos_];
                    advance();
                }
            }
            span.length = static_cast<int>(s.size());
            return {decimal ? Tok::Decimal : Tok::Int, std::move(s), span};
        }
        auto two = [&](char a, char b) {
            return c == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
        };
        if (two('-', '>')) { advance(); advance(); span.length = 2; return {Tok::Arrow, "->", span}; }
        if (two('&', '&')) { advance(); advance(); span.length = 2; return {Tok::AndAnd, "&&", span}; }
        if (two('<', '=')) { advance(); advance(); span.length = 2; return {Tok::Le, "<=", span}; }
        if (two('>', '=')) { advance(); advance(); span.length = 2; return {Tok::Ge, ">=", span}; }
        if (two('=', '=')) { advance(); advance(); span.length = 2; return {Tok::EqEq, "==", span}; }
        advance();
        switch (c) {
            case ';': return {Tok::Semi, ";", span};
            case '<': return {Tok::Lt, "<", span};
            case '>': return {Tok::Gt, ">", span};
            case '+': return {Tok::Plus, "+", span};
            case '-': return {Tok::Minus, "-", span};
            case '*': return {Tok::Star, "*", span};
            case '/': return {Tok::Slash, "/", span};
            case '{': return {Tok::LBrace, "{", span};
            case '}': return {Tok::RBrace, "}", span};
            case ',': return {Tok::Comma, ",", span};
            default:
                throw ParseError(span, std::string("unexpected character '") + c + "'");
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const std::vector<std::string> kKeywords = {
    "ta", "clock", "param", "loc", "edge", "init", "private",
    "final", "invariant", "when", "do", "sync"};

struct RawAtom {
    Token clock;
    CmpOp op;
    // parsed linexpr terms: (coefficient over param, or constant)
    LinExpr expr_placeholder;  // not used; terms below
    struct Term {
        Rational coeff;          // multiplier (for params) or the constant itself
        std::optional<Token> param;
    };
    std::vector<Term> terms;
};

struct RawGuard {
    std::vector<RawAtom> atoms;
};

struct RawLoc {
    Token name;
    bool init = false, priv = false, fin = false;
    std::optional<RawGuard> invariant;
    SourceSpan span;
};

struct RawEdge {
    Token from, to;
    std::optional<RawGuard> guard;
    std::vector<Token> resets;
    std::optional<Token> sync;
};

class Parser {
public:
    Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    TimedSystem parse() {
        expect_keyword("ta");
        name_ = expect(Tok::Ident, "system name").text;
        expect(Tok::Semi, "';'");
        while (!at_end()) {
            const Token& t = peek();
            if (t.kind != Tok::Ident)
                throw ParseError(t.span, "expected a declaration");
            if (t.text == "clock") decl_idlist(clocks_);
            else if (t.text == "param") decl_idlist(params_);
            else if (t.text == "loc") loc_decl();
            else if (t.text == "edge") edge_decl();
            else throw ParseError(t.span, "unknown declaration '" + t.text + "'");
        }
        return build();
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    bool at_end() const { return peek().kind == Tok::End; }
    Token take() { return toks_[pos_++]; }

    Token expect(Tok kind, const std::string& what) {
        if (peek().kind != kind)
            throw ParseError(peek().span, "expected " + what);
        return take();
    }

    void expect_keyword(const std::string& kw) {
        if (peek().kind != Tok::Ident || peek().text != kw)
            throw ParseError(peek().span, "expected '" + kw + "'");
        take();
    }

    bool peek_keyword(const std::string& kw) const {
        return peek().kind == Tok::Ident && peek().text == kw;
    }

    Token expect_name(const std::string& what) {
        Token t = expect(Tok::Ident, what);
        if (std::find(kKeywords.begin(), kKeywords.end(), t.text) != kKeywords.end())
            throw ParseError(t.span, "'" + t.text + "' is a keyword");
        return t;
    }

    void decl_idlist(std::vector<Token>& into) {
        take();  // keyword
        into.push_back(expect_name("identifier"));
        while (peek().kind == Tok::Comma) {
            take();
            into.push_back(expect_name("identifier"));
        }
        expect(Tok::Semi, "';'");
    }

    void loc_decl() {
        take();
        RawLoc l;
        l.name = expect_name("location name");
        l.span = l.name.span;
        for (;;) {
            if (peek_keyword("init")) { take(); l.init = true; }
            else if (peek_keyword("private")) { take(); l.priv = true; }
            else if (peek_keyword("final")) { take(); l.fin = true; }
            else break;
        }
        if (peek_keyword("invariant")) {
            take();
            l.invariant = guard();
        }
        expect(Tok::Semi, "';'");
        locs_.push_back(std::move(l));
    }

    void edge_decl() {
        take();
        RawEdge e;
        e.from = expect_name("source location");
        expect(Tok::Arrow, "'->'");
        e.to = expect_name("target location");
        if (peek_keyword("when")) {
            take();
            e.guard = guard();
        }
        if (peek_keyword("do")) {
            take();
            expect(Tok::LBrace, "'{'");
            if (peek().kind != Tok::RBrace) {
                e.resets.push_back(expect_name("clock name"));
                while (peek().kind == Tok::Comma) {
                    take();
                    e.resets.push_back(expect_name("clock name"));
                }
            }
            expect(Tok::RBrace, "'}'");
        }
        if (peek_keyword("sync")) {
            take();
            e.sync = expect_name("action name");
        }
        expect(Tok::Semi, "';'");
        edges_.push_back(std::move(e));
    }

    RawGuard guard() {
        RawGuard g;
        g.atoms.push_back(atom());
        while (peek().kind == Tok::AndAnd) {
            take();
            g.atoms.push_back(atom());
        }
        return g;
    }

    RawAtom atom() {
        RawAtom a;
        a.clock = expect_name("clock name");
        switch (peek().kind) {
            case Tok::Lt: a.op = CmpOp::Lt; break;
            case Tok::Le: a.op = CmpOp::Le; break;
            case Tok::EqEq: a.op = CmpOp::Eq; break;
            case Tok::Ge: a.op = CmpOp::Ge; break;
            case Tok::Gt: a.op = CmpOp::Gt; break;
            default:
                throw ParseError(peek().span, "expected a comparison operator");
        }
        take();
        bool negate = false;
        if (peek().kind == Tok::Minus) {
            take();
            negate = true;
        }
        a.terms.push_back(term(negate));
        for (;;) {
            if (peek().kind == Tok::Plus) { take(); a.terms.push_back(term(false)); }
            else if (peek().kind == Tok::Minus) { take(); a.terms.push_back(term(true)); }
            else break;
        }
        return a;
    }

    RawAtom::Term term(bool negate) {
        RawAtom::Term t;
        if (peek().kind == Tok::Ident) {
            t.coeff = Rational(1);
            t.param = expect_name("parameter name");
        } else {
            t.coeff = rational();
            if (peek().kind == Tok::Star) {
                take();
                t.param = expect_name("parameter name");
            }
        }
        if (negate) t.coeff = -t.coeff;
        return t;
    }

    Rational rational() {
        Token t = take();
        if (t.kind == Tok::Int) {
            long long num = std::stoll(t.text);
            if (peek().kind == Tok::Slash) {
                take();
                Token d = expect(Tok::Int, "denominator");
                long long den = std::stoll(d.text);
                if (den <= 0) throw ParseError(d.span, "denominator must be positive");
                return Rational(num, den);
            }
            return Rational(num);
        }
        if (t.kind == Tok::Decimal) {
            auto dot = t.text.find('.');
            std::string ip = t.text.substr(0, dot), fp = t.text.substr(dot + 1);
            long long den = 1;
            for (std::size_t i = 0; i < fp.size(); ++i) {
                if (den > INT64_MAX / 10) throw ParseError(t.span, "literal too precise");
                den *= 10;
            }
            return Rational(std::stoll(ip) * den + std::stoll(fp), den);
        }
        throw ParseError(t.span, "expected a number");
    }

    TimedSystem build() {
        TimedSystem sys;
        sys.name = name_;

        std::map<std::string, SourceSpan> names;
        auto claim = [&](const Token& t) {
            auto [it, fresh] = names.insert({t.text, t.span});
            if (!fresh) throw ParseError(t.span, "name '" + t.text + "' already declared");
        };

        for (const Token& t : clocks_) { claim(t); sys.add_clock(t.text); }
        for (const Token& t : params_) { claim(t); sys.add_param(t.text); }
        for (const RawLoc& l : locs_) { claim(l.name); sys.add_location(l.name.text); }

        int inits = 0, privs = 0, fins = 0;
        for (const RawLoc& l : locs_) {
            LocationId id = *sys.find_location(l.name.text);
            if (l.init) { ++inits; sys.init = id; }
            if (l.priv) { ++privs; sys.priv_loc = id; }
            if (l.fin) { ++fins; sys.final_loc = id; }
            if (l.invariant)
                sys.invariants[id.value] = resolve_guard(sys, *l.invariant);
        }
        SourceSpan head = toks_.empty() ? SourceSpan{} : toks_[0].span;
        if (inits != 1)
            throw ParseError(head, "exactly one location must be flagged init (found " +
                                       std::to_string(inits) + ")");
        if (privs != 1)
            throw ParseError(head, "exactly one location must be flagged private (found " +
                                       std::to_string(privs) + ")");
        if (fins != 1)
            throw ParseError(head, "exactly one location must be flagged final (found " +
                                       std::to_string(fins) + ")");

        for (const RawEdge& re : edges_) {
            Edge e;
            e.source = resolve_location(sys, re.from);
            e.target = resolve_location(sys, re.to);
            if (re.guard) e.guard = resolve_guard(sys, *re.guard);
            for (const Token& r : re.resets) {
                auto c = sys.find_clock(r.text);
                if (!c) throw ParseError(r.span, "unknown clock '" + r.text + "'");
                e.resets.push_back(*c);
            }
            std::sort(e.resets.begin(), e.resets.end());
            e.resets.erase(std::unique(e.resets.begin(), e.resets.end()), e.resets.end());
            if (re.sync) {
                e.action = re.sync->text;
                sys.note_action(e.action);
            }
            sys.edges.push_back(std::move(e));
        }

        long long denom = 1;
        for (const Guard* g : all_guards(sys))
            for (const AtomicConstraint& a : g->atoms)
                denom = lcm_ll(denom, a.rhs.constant.den());
        sys.denom = denom;

        auto diags = validate(sys);
        if (!diags.empty()) {
            std::string msg = "invalid model:";
            for (const auto& d : diags) msg += "\n  " + d;
            throw ParseError(head, msg);
        }
        return sys;
    }

    static std::vector<const Guard*> all_guards(const TimedSystem& sys) {
        std::vector<const Guard*> out;
        for (const Guard& g : sys.invariants) out.push_back(&g);
        for (const Edge& e : sys.edges) out.push_back(&e.guard);
        return out;
    }

    LocationId resolve_location(const TimedSystem& sys, const Token& t) {
        auto l = sys.find_location(t.text);
        if (!l) throw ParseError(t.span, "unknown location '" + t.text + "'");
        return *l;
    }

    Guard resolve_guard(const TimedSystem& sys, const RawGuard& rg) {
        Guard g;
        for (const RawAtom& ra : rg.atoms) {
            AtomicConstraint a;
            auto c = sys.find_clock(ra.clock.text);
            if (!c) throw ParseError(ra.clock.span, "unknown clock '" + ra.clock.text + "'");
            a.clock = *c;
            a.op = ra.op;
            for (const RawAtom::Term& t : ra.terms) {
                if (t.param) {
                    auto p = sys.find_param(t.param->text);
                    if (!p)
                        throw ParseError(t.param->span,
                                         "unknown parameter '" + t.param->text + "'");
                    if (!t.coeff.is_integer())
                        throw ParseError(t.param->span,
                                         "parameter coefficients must be integers");
                    a.rhs.coeffs[*p] += t.coeff.num();
                    if (a.rhs.coeffs[*p] == 0) a.rhs.coeffs.erase(*p);
                } else {
                    a.rhs.constant = a.rhs.constant + t.coeff;
                }
            }
            g.atoms.push_back(std::move(a));
        }
        return g;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::string name_;
    std::vector<Token> clocks_, params_;
    std::vector<RawLoc> locs_;
    std::vector<RawEdge> edges_;
};

}  // namespace

TimedSystem parse_model(const std::string& text, const std::string& filename) {
    Lexer lexer(text, filename);
    Parser parser(lexer.run());
    return parser.parse();
}

Rational parse_rational(const std::string& text) {
    Lexer lexer(text, "<rational>");
    auto toks = lexer.run();
    std::size_t i = 0;
    bool neg = false;
    if (toks[i].kind == Tok::Minus) {
        neg = true;
        ++i;
    }
    auto number = [&](std::size_t at) -> long long {
        if (toks[at].kind != Tok::Int)
            throw ParseError(toks[at].span, "expected a number");
        return std::stoll(toks[at].text);
    };
    Rational r;
    if (toks[i].kind == Tok::Decimal) {
        const std::string& s = toks[i].text;
        auto dot = s.find('.');
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        long long den = 1;
        for (std::size_t k = 0; k < fp.size(); ++k) den *= 10;
        r = Rational(std::stoll(ip) * den + std::stoll(fp), den);
        ++i;
    } else {
        long long num = number(i);
        ++i;
        if (i < toks.size() && toks[i].kind == Tok::Slash) {
            ++i;
            long long den = number(i);
            ++i;
            if (den <= 0) throw ParseError(toks[i - 1].span, "denominator must be positive");
            r = Rational(num, den);
        } else {
            r = Rational(num);
        }
    }
    if (toks[i].kind != Tok::End)
        throw ParseError(toks[i].span, "trailing characters after number");
    return neg ? -r : r;
}

namespace {

std::string linexpr_text(const TimedSystem& sys, const LinExpr& e) {
    std::string out;
    bool first = true;
    auto append = [&](bool negative, const std::string& body) {
        if (first) {
            if (negative) out += "-";
            first = false;
        } else {
            out += negative ? " - " : " + ";
        }
        out += body;
    };
    for (const auto& [p, c] : e.coeffs) {
        long long a = c < 0 ? -c : c;
        std::string body =
            (a == 1 ? "" : std::to_string(a) + "*") + sys.params[p.value];
        append(c < 0, body);
    }
    if (!e.constant.is_zero() || first) {
        Rational a = e.constant.is_negative() ? -e.constant : e.constant;
        append(e.constant.is_negative(), a.str());
    }
    return out;
}

std::string guard_text(const TimedSystem& sys, const Guard& g) {
    std::string out;
    for (std::size_t i = 0; i < g.atoms.size(); ++i) {
        if (i) out += " && ";
        const AtomicConstraint& a = g.atoms[i];
        out += sys.clocks[a.clock.value];
        out += " ";
        out += cmp_op_text(a.op);
        out += " ";
        out += linexpr_text(sys, a.rhs);
    }
    return out;
}

}  // namespace

std::string emit_model(const TimedSystem& sys) {
    std::ostringstream out;
    out << "ta " << sys.name << ";\n";
    if (!sys.clocks.empty()) {
        out << "clock ";
        for (std::size_t i = 0; i < sys.clocks.size(); ++i)
            out << (i ? ", " : "") << sys.clocks[i];
        out << ";\n";
    }
    if (!sys.params.empty()) {
        out << "param ";
        for (std::size_t i = 0; i < sys.params.size(); ++i)
            out << (i ? ", " : "") << sys.params[i];
        out << ";\n";
    }
    for (std::size_t i = 0; i < sys.location_count(); ++i) {
        LocationId id(static_cast<int>(i));
        out << "loc " << sys.locations[i];
        if (id == sys.init) out << " init";
        if (id == sys.priv_loc) out << " private";
        if (id == sys.final_loc) out << " final";
        if (!sys.invariants[i].is_true())
            out << " invariant " << guard_text(sys, sys.invariants[i]);
        out << ";\n";
    }
    for (const Edge& e : sys.edges) {
        out << "edge " << sys.locations[e.source.value] << " -> "
            << sys.locations[e.target.value];
        if (!e.guard.is_true()) out << " when " << guard_text(sys, e.guard);
        if (!e.resets.empty()) {
            out << " do { ";
            for (std::size_t i = 0; i < e.resets.size(); ++i)
                out << (i ? ", " : "") << sys.clocks[e.resets[i].value];
            out << " }";
        }
        if (!e.action.empty()) out << " sync " << e.action;
        out << ";\n";
    }
    return out.str();
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string emit_dot(const RegionAutomaton& ra) {
    std::ostringstream out;
    out << "digraph regions {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=ellipse fontsize=10];\n";

    std::vector<int> exact_offset(ra.states.size(), -1);
    std::vector<bool> frac(ra.states.size(), false);
    for (auto [s, o] : ra.accept_exact) exact_offset[s] = o;
    for (auto s : ra.accept_frac) frac[s] = true;

    if (ra.initial >= 0) {
        out << "  __init [shape=none label=\"\"];\n";
        out << "  __init -> r" << ra.initial << ";\n";
    }
    for (std::uint32_t i = 0; i < ra.states.size(); ++i) {
        std::string label = dot_escape(region_label(ra, i));
        std::string shape = "ellipse";
        if (exact_offset[i] >= 0) {
            shape = "doublecircle";
            label += "\\noffset " + std::to_string(exact_offset[i]);
        } else if (frac[i]) {
            shape = "doubleoctagon";
        }
        out << "  r" << i << " [shape=" << shape << " label=\"" << label << "\"];\n";
    }
    for (const auto& t : ra.transitions) {
        out << "  r" << t.source << " -> r" << t.target;
        if (t.tick) out << " [label=\"tick\"]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace etop
