// ============================================================================
// tba/constraint.hpp — clock constraints (guards) shared by zones and models
// ============================================================================

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tba/bound.hpp"

namespace tba {

// Clocks are indexed 1..n; index 0 is the reference clock and never appears
// in a guard.

enum class RelKind : std::uint8_t { Lt, Le, Eq, Ge, Gt };

inline const char* rel_str(RelKind r) {
    switch (r) {
    case RelKind::Lt: return "<";
    case RelKind::Le: return "<=";
    case RelKind::Eq: return "==";
    case RelKind::Ge: return ">=";
    case RelKind::Gt: return ">";
    }
    return "?";
}

struct GuardAtom {
    int clock = 0;            // 1-based
    RelKind rel = RelKind::Le;
    std::int64_t constant = 0; // natural

    bool operator==(const GuardAtom& o) const {
        return clock == o.clock && rel == o.rel && constant == o.constant;
    }
};

// A guard is a conjunction of atoms. Empty guard = true.
using Guard = std::vector<GuardAtom>;

// Expands == into <= and >= so downstream code only sees four relations.
inline Guard normalize_guard(const Guard& g) {
    Guard out;
    out.reserve(g.size());
    for (const GuardAtom& a : g) {
        if (a.rel == RelKind::Eq) {
            out.push_back({a.clock, RelKind::Le, a.constant});
            out.push_back({a.clock, RelKind::Ge, a.constant});
        } else {
            out.push_back(a);
        }
    }
    return out;
}

inline bool is_upper(RelKind r) { return r == RelKind::Lt || r == RelKind::Le; }
inline bool is_lower(RelKind r) { return r == RelKind::Gt || r == RelKind::Ge; }

inline bool atom_satisfied(const GuardAtom& a, double v) {
    const double c = static_cast<double>(a.constant);
    switch (a.rel) {
    case RelKind::Lt: return v < c;
    case RelKind::Le: return v <= c;
    case RelKind::Eq: return v == c;
    case RelKind::Ge: return v >= c;
    case RelKind::Gt: return v > c;
    }
    return false;
}

// v[0] is clock x1. Valuations are over proper clocks only.
inline bool guard_satisfied(const Guard& g, const std::vector<double>& v) {
    for (const GuardAtom& a : g) {
        if (a.clock < 1 || static_cast<std::size_t>(a.clock) > v.size())
            throw std::out_of_range("guard clock out of range");
        if (!atom_satisfied(a, v[a.clock - 1])) return false;
    }
    return true;
}

inline std::string guard_str(const Guard& g, const std::vector<std::string>& names) {
    if (g.empty()) return "true";
    std::string s;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) s += " && ";
        s += names.at(static_cast<std::size_t>(g[i].clock) - 1);
        s += ' ';
        s += rel_str(g[i].rel);
        s += ' ';
        s += std::to_string(g[i].constant);
    }
    return s;
}

} // namespace tba
