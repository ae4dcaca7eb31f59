// ============================================================================
// tba/parser.hpp — textual model format
// ============================================================================
//
//   # comment
//   clocks: x, y
//   automaton name:
//     state ID [accepting] [invariant CONJ]
//     trans SRC -> DST [guard CONJ] [reset {x, y}] [label L | sync {l1, l2}]
//
// Conjunctions are `&&`-joined atoms `clock REL constant` with REL one of
// < <= == >= >. The first state of an automaton is its initial state. All
// automata share the clock declaration.
//
// ============================================================================

#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "tba/model.hpp"

namespace tba {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
          line(l), column(c) {}
};

namespace detail {

class LineLexer {
public:
    LineLexer(const std::string& text, int line) : s_(text), line_(line) {}

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool done() {
        skip_ws();
        return pos_ >= s_.size() || s_[pos_] == '#';
    }

    int col() const { return static_cast<int>(pos_) + 1; }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, col(), msg); }

    bool peek_char(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    void expect_char(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    bool try_char(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                s_[pos_] == '.' || s_[pos_] == '|'))
            ++pos_;
        if (start == pos_) fail("expected identifier");
        return s_.substr(start, pos_ - start);
    }

    bool try_keyword(const std::string& kw) {
        skip_ws();
        if (s_.compare(pos_, kw.size(), kw) != 0) return false;
        const std::size_t end = pos_ + kw.size();
        if (end < s_.size() &&
            (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
            return false;
        pos_ = end;
        return true;
    }

    std::string rel() {
        skip_ws();
        static const char* rels[] = {"<=", "==", ">=", "<", ">"};
        for (const char* r : rels) {
            std::string rs(r);
            if (s_.compare(pos_, rs.size(), rs) == 0) {
                pos_ += rs.size();
                return rs;
            }
        }
        fail("expected relation (< <= == >= >)");
    }

    std::int64_t natural() {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '-') fail("negative constants are not allowed");
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected constant");
        return std::stoll(s_.substr(start, pos_ - start));
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
    int line_;
};

} // namespace detail

// ── parse_model ─────────────────────────────────────────────────────────────

inline Network parse_model(const std::string& text) {
    std::vector<std::string> clocks;
    Network net;
    TBA* cur = nullptr;

    auto clock_index = [&](detail::LineLexer& lx, const std::string& name) -> int {
        for (std::size_t i = 0; i < clocks.size(); ++i)
            if (clocks[i] == name) return static_cast<int>(i) + 1;
        lx.fail("unknown clock '" + name + "'");
    };

    auto parse_conj = [&](detail::LineLexer& lx) -> Guard {
        Guard g;
        for (;;) {
            const std::string first = lx.ident();
            if (lx.try_char('-'))
                lx.fail("diagonal constraints unsupported");
            const int clock = clock_index(lx, first);
            const std::string r = lx.rel();
            const std::int64_t c = lx.natural();
            RelKind rel = RelKind::Le;
            if (r == "<") rel = RelKind::Lt;
            else if (r == "<=") rel = RelKind::Le;
            else if (r == "==") rel = RelKind::Eq;
            else if (r == ">=") rel = RelKind::Ge;
            else rel = RelKind::Gt;
            g.push_back({clock, rel, c});
            if (!lx.try_char('&')) break;
            lx.expect_char('&');
        }
        return g;
    };

    int lineno = 0;
    std::size_t at = 0;
    while (at <= text.size()) {
        const std::size_t eol = text.find('\n', at);
        std::string line = text.substr(at, eol == std::string::npos ? std::string::npos : eol - at);
        at = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++lineno;

        detail::LineLexer lx(line, lineno);
        if (lx.done()) continue;

        if (lx.try_keyword("clocks")) {
            lx.expect_char(':');
            if (!net.components.empty())
                lx.fail("clock declaration must precede automata");
            while (!lx.done()) {
                clocks.push_back(lx.ident());
                if (!lx.try_char(',')) break;
            }
        } else if (lx.try_keyword("automaton")) {
            const std::string name = lx.ident();
            lx.expect_char(':');
            TBA a;
            a.name = name;
            a.clocks = clocks;
            net.components.push_back(std::move(a));
            cur = &net.components.back();
        } else if (lx.try_keyword("state")) {
            if (!cur) lx.fail("state outside of an automaton");
            const std::string id = lx.ident();
            if (cur->state_index(id) >= 0) lx.fail("duplicate state '" + id + "'");
            cur->states.push_back(id);
            bool acc = false;
            Guard inv;
            for (;;) {
                if (lx.try_keyword("accepting")) {
                    acc = true;
                } else if (lx.try_keyword("invariant")) {
                    inv = parse_conj(lx);
                } else {
                    break;
                }
            }
            if (!lx.done()) lx.fail("trailing input after state declaration");
            cur->accepting.push_back(acc);
            cur->invariants.push_back(std::move(inv));
        } else if (lx.try_keyword("trans")) {
            if (!cur) lx.fail("trans outside of an automaton");
            Transition t;
            const std::string src = lx.ident();
            lx.expect_char('-');
            lx.expect_char('>');
            const std::string dst = lx.ident();
            t.src = cur->state_index(src);
            t.dst = cur->state_index(dst);
            if (t.src < 0) lx.fail("unknown state '" + src + "'");
            if (t.dst < 0) lx.fail("unknown state '" + dst + "'");
            for (;;) {
                if (lx.try_keyword("guard")) {
                    t.guard = parse_conj(lx);
                } else if (lx.try_keyword("reset")) {
                    lx.expect_char('{');
                    if (!lx.try_char('}')) {
                        for (;;) {
                            t.resets.push_back(clock_index(lx, lx.ident()));
                            if (!lx.try_char(',')) break;
                        }
                        lx.expect_char('}');
                    }
                } else if (lx.try_keyword("label")) {
                    t.labels.push_back(lx.ident());
                } else if (lx.try_keyword("sync")) {
                    lx.expect_char('{');
                    for (;;) {
                        t.labels.push_back(lx.ident());
                        if (!lx.try_char(',')) break;
                    }
                    lx.expect_char('}');
                } else {
                    break;
                }
            }
            if (!lx.done()) lx.fail("trailing input after transition");
            cur->transitions.push_back(std::move(t));
        } else {
            lx.fail("expected clocks:, automaton, state or trans");
        }
    }

    if (net.components.empty())
        throw ParseError(lineno, 1, "no automaton in input");
    for (TBA& c : net.components) {
        if (c.states.empty())
            throw ParseError(lineno, 1, c.name + " has no states");
        validate(c);
    }
    return net;
}

} // namespace tba
