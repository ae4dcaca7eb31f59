// ============================================================================
// tba/bound.hpp — difference bounds: the atom of every matrix in this library
// ============================================================================

#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace tba {

// ── Bound ───────────────────────────────────────────────────────────────────
// A comparison (strict or weak) paired with an integer constant or +∞.
// Entry (i,j) of a matrix holds a Bound b meaning  x_i − x_j  ≺  b.value.
// Infinity is always weak.

struct Bound {
    static constexpr std::int64_t kInf = INT64_MAX / 4;

    std::int64_t value = kInf;
    bool strict = false;

    static constexpr Bound inf() { return Bound{kInf, false}; }
    static constexpr Bound weak(std::int64_t v) { return Bound{v, false}; }
    static constexpr Bound strict_of(std::int64_t v) { return Bound{v, true}; }
    static constexpr Bound zero() { return Bound{0, false}; }

    constexpr bool is_inf() const { return value >= kInf; }

    constexpr bool operator==(const Bound& o) const {
        if (is_inf() && o.is_inf()) return true;
        return value == o.value && strict == o.strict;
    }
    constexpr bool operator!=(const Bound& o) const { return !(*this == o); }

    // Total order: (≺,c) < (≺',c') iff c < c', or c = c' and ≺ strict, ≺' weak.
    constexpr bool operator<(const Bound& o) const {
        if (is_inf()) return false;
        if (o.is_inf()) return true;
        if (value != o.value) return value < o.value;
        return strict && !o.strict;
    }
    constexpr bool operator<=(const Bound& o) const { return !(o < *this); }

    // Addition: values add, ∞ absorbs, result strict iff either side strict.
    constexpr Bound operator+(const Bound& o) const {
        if (is_inf() || o.is_inf()) return inf();
        return Bound{value + o.value, strict || o.strict};
    }

    // Does the real difference d satisfy  d ≺ value ?
    constexpr bool satisfied_by(double d) const {
        if (is_inf()) return true;
        return strict ? d < static_cast<double>(value) : d <= static_cast<double>(value);
    }

    std::string str() const {
        if (is_inf()) return "inf";
        return (strict ? "<" : "<=") + std::to_string(value);
    }
};

inline const Bound& min(const Bound& a, const Bound& b) { return b < a ? b : a; }

inline std::size_t hash_combine(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

inline std::size_t bound_hash(const Bound& b) {
    if (b.is_inf()) return 0x7ffffffffULL;
    return hash_combine(std::hash<std::int64_t>{}(b.value), b.strict ? 1 : 2);
}

} // namespace tba
