// ============================================================================
// tba/zone.hpp — difference bound matrices over clock valuations
// ============================================================================
//
// A zone is a convex set of clock valuations stored as an (n+1)×(n+1) matrix
// of bounds; entry (i,j) constrains x_i − x_j, with x_0 the reference clock.
// Canonical form is the all-pairs shortest-path closure; empty zones are
// normalized to a dedicated marker so equality and hashing stay cheap.
//
// All operations return fresh values; zones are safe to share across threads.
//
// ============================================================================

#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tba/bound.hpp"
#include "tba/constraint.hpp"

namespace tba {

// ── LUBounds ────────────────────────────────────────────────────────────────
// Per-clock maximal lower-guard (L) and upper-guard (U) constants; kNone where
// a clock has no guard of that polarity. Index 0 is the reference clock.

struct LUBounds {
    static constexpr std::int64_t kNone = INT64_MIN / 4;

    std::vector<std::int64_t> lower; // L
    std::vector<std::int64_t> upper; // U

    explicit LUBounds(int dim = 1)
        : lower(static_cast<std::size_t>(dim), kNone),
          upper(static_cast<std::size_t>(dim), kNone) {
        if (dim > 0) lower[0] = upper[0] = 0;
    }

    int dim() const { return static_cast<int>(lower.size()); }

    void record(const GuardAtom& atom) {
        const auto c = static_cast<std::size_t>(atom.clock);
        if (atom.rel == RelKind::Eq) {
            lower[c] = std::max(lower[c], atom.constant);
            upper[c] = std::max(upper[c], atom.constant);
        } else if (is_lower(atom.rel)) {
            lower[c] = std::max(lower[c], atom.constant);
        } else {
            upper[c] = std::max(upper[c], atom.constant);
        }
    }
};

// ── Zone ────────────────────────────────────────────────────────────────────

class Zone {
public:
    Zone() = default;

    // All valuations: x_i ≥ 0, nothing else.
    static Zone universal(int dim) {
        Zone z = raw_universal(dim);
        z.canonical_ = true;
        return z;
    }

    // The single valuation 0.
    static Zone origin(int dim) {
        Zone z = raw_universal(dim);
        for (int i = 1; i < dim; ++i) {
            z.at(i, 0) = Bound::zero();
            z.at(0, i) = Bound::zero();
            for (int j = 1; j < dim; ++j)
                if (i != j) z.at(i, j) = Bound::zero();
        }
        z.canonical_ = true;
        return z;
    }

    static Zone empty_zone(int dim) {
        Zone z;
        z.dim_ = dim;
        z.mark_empty();
        return z;
    }

    // Non-canonical builder for tests and parsers. Row/column conventions are
    // the caller's responsibility until canonicalize() runs.
    static Zone from_raw(int dim, std::vector<Bound> entries) {
        assert(static_cast<int>(entries.size()) == dim * dim);
        Zone z;
        z.dim_ = dim;
        z.m_ = std::move(entries);
        z.canonical_ = false;
        z.empty_ = false;
        return z;
    }

    int dim() const { return dim_; }
    bool is_canonical() const { return canonical_; }
    bool empty_flag() const { return empty_; }

    Bound& at(int i, int j) { return m_[static_cast<std::size_t>(i * dim_ + j)]; }
    const Bound& at(int i, int j) const { return m_[static_cast<std::size_t>(i * dim_ + j)]; }

    bool operator==(const Zone& o) const {
        if (dim_ != o.dim_) return false;
        if (empty_ || o.empty_) return empty_ && o.empty_;
        return m_ == o.m_;
    }
    bool operator!=(const Zone& o) const { return !(*this == o); }

    void mark_empty() {
        m_.assign(static_cast<std::size_t>(dim_ * dim_), Bound::zero());
        empty_ = true;
        canonical_ = true;
    }

    void set_canonical(bool c) { canonical_ = c; }

private:
    static Zone raw_universal(int dim) {
        Zone z;
        z.dim_ = dim;
        z.m_.assign(static_cast<std::size_t>(dim * dim), Bound::inf());
        for (int i = 0; i < dim; ++i) z.at(i, i) = Bound::zero();
        for (int j = 1; j < dim; ++j) z.at(0, j) = Bound::zero();
        z.canonical_ = false;
        z.empty_ = false;
        return z;
    }

    int dim_ = 0;
    std::vector<Bound> m_;
    bool canonical_ = false;
    bool empty_ = true;
};

// ── Closure ─────────────────────────────────────────────────────────────────

// Floyd–Warshall over an arbitrary square Bound matrix. Returns false if a
// negative cycle shows up on the diagonal.
inline bool close_matrix(std::vector<Bound>& m, int dim) {
    auto at = [&](int i, int j) -> Bound& {
        return m[static_cast<std::size_t>(i * dim + j)];
    };
    for (int k = 0; k < dim; ++k)
        for (int i = 0; i < dim; ++i) {
            const Bound ik = at(i, k);
            if (ik.is_inf()) continue;
            for (int j = 0; j < dim; ++j) {
                const Bound via = ik + at(k, j);
                if (via < at(i, j)) at(i, j) = via;
            }
        }
    for (int i = 0; i < dim; ++i)
        if (at(i, i) < Bound::zero()) return false;
    return true;
}

inline Zone canonicalize(Zone z) {
    if (z.is_canonical() || z.empty_flag()) {
        z.set_canonical(true);
        return z;
    }
    const int dim = z.dim();
    std::vector<Bound> m(static_cast<std::size_t>(dim * dim));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m[static_cast<std::size_t>(i * dim + j)] = z.at(i, j);
    if (!close_matrix(m, dim)) {
        z.mark_empty();
        return z;
    }
    Zone out = Zone::from_raw(dim, std::move(m));
    out.set_canonical(true);
    return out;
}

inline bool is_empty(const Zone& z) {
    if (z.empty_flag()) return true;
    if (z.is_canonical()) return false;
    return canonicalize(z).empty_flag();
}

// b ⊆ a, by pointwise comparison of canonical forms.
inline bool includes(const Zone& a, const Zone& b) {
    assert(a.dim() == b.dim());
    const Zone ca = canonicalize(a);
    const Zone cb = canonicalize(b);
    if (cb.empty_flag()) return true;
    if (ca.empty_flag()) return false;
    for (int i = 0; i < ca.dim(); ++i)
        for (int j = 0; j < ca.dim(); ++j)
            if (ca.at(i, j) < cb.at(i, j)) return false;
    return true;
}

// ── Future / past ───────────────────────────────────────────────────────────

// Future closure: drop the upper bounds. Preserves canonical form.
inline Zone up(Zone z) {
    if (z.empty_flag()) return z;
    assert(z.is_canonical());
    for (int i = 1; i < z.dim(); ++i) z.at(i, 0) = Bound::inf();
    return z;
}

// Past closure: weaken every lower bound to 0, then re-tighten.
inline Zone down(Zone z) {
    if (z.empty_flag()) return z;
    assert(z.is_canonical());
    for (int j = 1; j < z.dim(); ++j) z.at(0, j) = Bound::zero();
    z.set_canonical(false);
    return canonicalize(std::move(z));
}

// ── Guards and intersection ─────────────────────────────────────────────────

inline void tighten(Zone& z, int i, int j, const Bound& b) {
    if (b < z.at(i, j)) {
        z.at(i, j) = b;
        z.set_canonical(false);
    }
}

inline Zone intersect_guard(Zone z, const Guard& g) {
    if (z.empty_flag()) return z;
    for (const GuardAtom& a : normalize_guard(g)) {
        assert(a.clock >= 1 && a.clock < z.dim());
        if (is_upper(a.rel)) {
            tighten(z, a.clock, 0, Bound{a.constant, a.rel == RelKind::Lt});
        } else {
            tighten(z, 0, a.clock, Bound{-a.constant, a.rel == RelKind::Gt});
        }
    }
    return canonicalize(std::move(z));
}

inline Zone intersect(Zone a, const Zone& b) {
    assert(a.dim() == b.dim());
    if (a.empty_flag()) return a;
    if (b.empty_flag()) return Zone::empty_zone(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) tighten(a, i, j, b.at(i, j));
    return canonicalize(std::move(a));
}

// ── Resets ──────────────────────────────────────────────────────────────────

// x := 0 for every clock in r. Input must be canonical; stays canonical.
inline Zone reset(Zone z, std::span<const int> r) {
    if (z.empty_flag()) return z;
    assert(z.is_canonical());
    for (int x : r) {
        assert(x >= 1 && x < z.dim());
        for (int j = 0; j < z.dim(); ++j) {
            z.at(x, j) = z.at(0, j);
            z.at(j, x) = z.at(j, 0);
        }
        z.at(x, x) = Bound::zero();
        z.at(x, 0) = Bound::zero();
        z.at(0, x) = Bound::zero();
    }
    return z;
}

// Remove every constraint on the clocks in r (valuation stays nonnegative).
inline Zone free_clocks(Zone z, std::span<const int> r) {
    if (z.empty_flag()) return z;
    for (int x : r) {
        assert(x >= 1 && x < z.dim());
        for (int j = 0; j < z.dim(); ++j) {
            z.at(x, j) = Bound::inf();
            z.at(j, x) = Bound::inf();
        }
        z.at(x, x) = Bound::zero();
        z.at(0, x) = Bound::zero();
    }
    z.set_canonical(false);
    return canonicalize(std::move(z));
}

// { v : [r]v ∈ z }
inline Zone reset_pre(Zone z, std::span<const int> r) {
    if (z.empty_flag()) return z;
    for (int x : r) {
        tighten(z, x, 0, Bound::zero());
        tighten(z, 0, x, Bound::zero());
    }
    z = canonicalize(std::move(z));
    if (z.empty_flag()) return z;
    return free_clocks(std::move(z), r);
}

// { v : ∃δ ≥ 0, v+δ ⊨ g and [r](v+δ) ∈ z }
inline Zone pre(const Zone& z, const Guard& g, std::span<const int> r) {
    Zone w = reset_pre(z, r);
    if (w.empty_flag()) return w;
    w = intersect_guard(std::move(w), g);
    if (w.empty_flag()) return w;
    return down(std::move(w));
}

// ── Extrapolation ───────────────────────────────────────────────────────────

// The LU extrapolation with diagonal refinement. Entry rules, for canonical
// non-empty input (L/U compare plain values, ∞ > every constant):
//   (i,j) := ∞            if m[i][j] > L(x_i), i ≠ 0
//   (i,j) := ∞            if −m[0][i] > L(x_i), i ≠ 0
//   (i,j) := ∞            if −m[0][j] > U(x_j), i ≠ 0, j ≠ 0
//   (0,j) := (<, −U(x_j)) if −m[0][j] > U(x_j), j ≠ 0   (clamped at (≤,0))
// Result is re-canonicalized, so extrapolation is idempotent bit-for-bit.
inline Zone extrapolate_lu_plus(const Zone& zin, const LUBounds& lu) {
    if (zin.empty_flag()) return zin;
    assert(zin.is_canonical());
    const int dim = zin.dim();
    assert(lu.dim() == dim);

    auto value_of = [](const Bound& b) -> std::int64_t {
        return b.is_inf() ? Bound::kInf : b.value;
    };

    Zone z = zin;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            if (i == j) continue;
            const Bound e = zin.at(i, j);
            if (i != 0 && value_of(e) > lu.lower[static_cast<std::size_t>(i)]) {
                z.at(i, j) = Bound::inf();
            } else if (i != 0 &&
                       -value_of(zin.at(0, i)) > lu.lower[static_cast<std::size_t>(i)]) {
                z.at(i, j) = Bound::inf();
            } else if (j != 0 &&
                       -value_of(zin.at(0, j)) > lu.upper[static_cast<std::size_t>(j)]) {
                if (i != 0) {
                    z.at(i, j) = Bound::inf();
                } else {
                    const std::int64_t u = lu.upper[static_cast<std::size_t>(j)];
                    z.at(0, j) = (u < 0) ? Bound::zero() : Bound::strict_of(-u);
                }
            }
        }
    }
    z.set_canonical(false);
    return canonicalize(std::move(z));
}

// ── Valuations ──────────────────────────────────────────────────────────────

// v[0] is x_1. Exact for half-integer grids.
inline bool contains(const Zone& z, std::span<const double> v) {
    if (z.empty_flag()) return false;
    assert(static_cast<int>(v.size()) + 1 == z.dim());
    auto val = [&](int i) { return i == 0 ? 0.0 : v[static_cast<std::size_t>(i - 1)]; };
    for (int i = 0; i < z.dim(); ++i)
        for (int j = 0; j < z.dim(); ++j)
            if (!z.at(i, j).satisfied_by(val(i) - val(j))) return false;
    return true;
}

inline std::size_t zone_hash(const Zone& z) {
    if (z.empty_flag()) return 0x5a5a5a5aULL;
    std::size_t h = std::hash<int>{}(z.dim());
    for (int i = 0; i < z.dim(); ++i)
        for (int j = 0; j < z.dim(); ++j) h = hash_combine(h, bound_hash(z.at(i, j)));
    return h;
}

inline std::string to_string(const Zone& z, const std::vector<std::string>& names) {
    if (z.empty_flag()) return "false";
    std::string s;
    auto name = [&](int i) -> std::string {
        if (i == 0) return "0";
        return names.at(static_cast<std::size_t>(i - 1));
    };
    for (int i = 0; i < z.dim(); ++i)
        for (int j = 0; j < z.dim(); ++j) {
            if (i == j || z.at(i, j).is_inf()) continue;
            const Bound& b = z.at(i, j);
            if (j == 0) {
                if (b.is_inf()) continue;
                if (!s.empty()) s += " && ";
                s += name(i) + (b.strict ? " < " : " <= ") + std::to_string(b.value);
            } else if (i == 0) {
                if (b == Bound::zero()) continue; // x ≥ 0 is implicit
                if (!s.empty()) s += " && ";
                s += name(j) + (b.strict ? " > " : " >= ") + std::to_string(-b.value);
            } else {
                if (!s.empty()) s += " && ";
                s += name(i) + " - " + name(j) + (b.strict ? " < " : " <= ") +
                     std::to_string(b.value);
            }
        }
    return s.empty() ? "true" : s;
}

} // namespace tba
