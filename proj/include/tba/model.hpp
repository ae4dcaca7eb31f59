// ============================================================================
// tba/model.hpp — timed Büchi automata and networks
// ============================================================================

#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tba/constraint.hpp"
#include "tba/transform_graph.hpp"
#include "tba/zone.hpp"

namespace tba {

// ── Transition ──────────────────────────────────────────────────────────────
// Labels drive synchronization: an empty list is an internal move, a single
// label a handshake, several labels one multi-party synchronization (all of
// them fire at once, as on the collision-resolution edge of a bus).

struct Transition {
    int src = 0;
    int dst = 0;
    Guard guard;
    std::vector<int> resets;          // 1-based clock indices
    std::vector<std::string> labels;

    bool operator==(const Transition& o) const {
        return src == o.src && dst == o.dst && guard == o.guard && resets == o.resets &&
               labels == o.labels;
    }
};

// ── TBA ─────────────────────────────────────────────────────────────────────
// Also serves as one component of a network; clock indices point into this
// automaton's own clock list. Invariants are per-state timing constraints;
// an empty guard means true. The first state is initial.

struct TBA {
    std::string name;
    std::vector<std::string> clocks;
    std::vector<std::string> states;
    std::vector<bool> accepting;
    std::vector<Guard> invariants;
    std::vector<Transition> transitions;
    int initial = 0;

    int dim() const { return static_cast<int>(clocks.size()) + 1; }

    int state_index(const std::string& s) const {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i] == s) return static_cast<int>(i);
        return -1;
    }

    int clock_index(const std::string& c) const {
        for (std::size_t i = 0; i < clocks.size(); ++i)
            if (clocks[i] == c) return static_cast<int>(i) + 1;
        return 0;
    }

    std::set<std::string> alphabet() const {
        std::set<std::string> out;
        for (const Transition& t : transitions) out.insert(t.labels.begin(), t.labels.end());
        return out;
    }

    bool operator==(const TBA& o) const {
        return name == o.name && clocks == o.clocks && states == o.states &&
               accepting == o.accepting && invariants == o.invariants &&
               transitions == o.transitions && initial == o.initial;
    }
};

struct Network {
    std::vector<TBA> components;

    bool operator==(const Network& o) const { return components == o.components; }
};

// ── Validation ──────────────────────────────────────────────────────────────

inline void validate(const TBA& a) {
    const int ns = static_cast<int>(a.states.size());
    if (ns == 0) throw std::invalid_argument(a.name + ": automaton has no states");
    if (a.initial < 0 || a.initial >= ns) throw std::invalid_argument(a.name + ": bad initial state");
    if (a.accepting.size() != a.states.size() || a.invariants.size() != a.states.size())
        throw std::invalid_argument(a.name + ": per-state tables out of sync");
    auto check_guard = [&](const Guard& g) {
        for (const GuardAtom& at : g) {
            if (at.clock < 1 || at.clock > static_cast<int>(a.clocks.size()))
                throw std::invalid_argument(a.name + ": guard references unknown clock");
            if (at.constant < 0)
                throw std::invalid_argument(a.name + ": negative guard constant");
        }
    };
    for (const Guard& inv : a.invariants) check_guard(inv);
    for (const Transition& t : a.transitions) {
        if (t.src < 0 || t.src >= ns || t.dst < 0 || t.dst >= ns)
            throw std::invalid_argument(a.name + ": transition endpoint out of range");
        check_guard(t.guard);
        for (int r : t.resets)
            if (r < 1 || r > static_cast<int>(a.clocks.size()))
                throw std::invalid_argument(a.name + ": reset references unknown clock");
    }
}

// ── LU bounds ───────────────────────────────────────────────────────────────
// Per-clock maximal guard constants, split by polarity, over every transition
// guard and state invariant. Global for the automaton.

inline LUBounds compute_lu_bounds(const TBA& a) {
    LUBounds lu(a.dim());
    for (const Transition& t : a.transitions)
        for (const GuardAtom& atom : t.guard) lu.record(atom);
    for (const Guard& inv : a.invariants)
        for (const GuardAtom& atom : inv) lu.record(atom);
    return lu;
}

// Guard of transition t with the source-state invariant conjoined; this is
// the guard the iterability machinery must see, since the invariant holds at
// the moment the guard is checked.
inline PathStep path_step_of(const TBA& a, const Transition& t) {
    PathStep s;
    s.guard = t.guard;
    const Guard& inv = a.invariants[static_cast<std::size_t>(t.src)];
    s.guard.insert(s.guard.end(), inv.begin(), inv.end());
    s.resets = t.resets;
    return s;
}

// ── Printing ────────────────────────────────────────────────────────────────
// The textual model format, emitted with stable ordering so that
// parse(print(m)) round-trips bit-exactly.

inline std::string print_model(const Network& net) {
    std::string out;

    std::vector<std::string> clock_union;
    for (const TBA& c : net.components)
        for (const std::string& x : c.clocks)
            if (std::find(clock_union.begin(), clock_union.end(), x) == clock_union.end())
                clock_union.push_back(x);

    out += "clocks:";
    for (std::size_t i = 0; i < clock_union.size(); ++i)
        out += (i ? ", " : " ") + clock_union[i];
    out += "\n";

    for (const TBA& c : net.components) {
        out += "\nautomaton " + c.name + ":\n";
        for (std::size_t q = 0; q < c.states.size(); ++q) {
            out += "  state " + c.states[q];
            if (c.accepting[q]) out += " accepting";
            if (!c.invariants[q].empty())
                out += " invariant " + guard_str(c.invariants[q], c.clocks);
            out += "\n";
        }
        for (const Transition& t : c.transitions) {
            out += "  trans " + c.states[static_cast<std::size_t>(t.src)] + " -> " +
                   c.states[static_cast<std::size_t>(t.dst)];
            if (!t.guard.empty()) out += " guard " + guard_str(t.guard, c.clocks);
            if (!t.resets.empty()) {
                out += " reset {";
                for (std::size_t i = 0; i < t.resets.size(); ++i)
                    out += (i ? ", " : "") +
                           c.clocks[static_cast<std::size_t>(t.resets[i]) - 1];
                out += "}";
            }
            if (t.labels.size() == 1) {
                out += " label " + t.labels[0];
            } else if (t.labels.size() > 1) {
                out += " sync {";
                for (std::size_t i = 0; i < t.labels.size(); ++i)
                    out += (i ? ", " : "") + t.labels[i];
                out += "}";
            }
            out += "\n";
        }
    }
    return out;
}

inline std::string print_model(const TBA& a) { return print_model(Network{{a}}); }

} // namespace tba
