// ============================================================================
// tba/transform_graph.hpp — transformation graphs for transition sequences
// ============================================================================
//
// A transformation graph relates the clock values before and after a
// transition sequence, written over "loose" valuations: the reference clock
// may drift below zero, and time elapse is encoded by decreasing it. The
// value of clock x at a column c is val(c,x) − val(c,x0); the right column
// holds the final valuation shifted back by the total elapsed time.
//
// We only ever store the short form: the shortest-path closure restricted to
// the leftmost and rightmost columns. Composition builds a three-block
// scratch matrix with the junction column shared, closes it, and projects
// back to the outer columns — which keeps memory at O(n²) per graph.
//
// ============================================================================

#pragma once

#include <cassert>
#include <span>
#include <string>
#include <vector>

#include "tba/bound.hpp"
#include "tba/constraint.hpp"
#include "tba/zone.hpp"

namespace tba {

// One step of a transition sequence: only the guard and the reset set matter
// for iterability.
struct PathStep {
    Guard guard;
    std::vector<int> resets; // 1-based clock indices

    bool resets_clock(int x) const {
        for (int r : resets)
            if (r == x) return true;
        return false;
    }
};

// ── TransGraph ──────────────────────────────────────────────────────────────
// Short transformation graph over clocks {x0..xn}: a 2(n+1)-square bound
// matrix in canonical form, or the distinguished empty graph (the absorbing
// element of composition). Entry (a,b) bounds val(a) − val(b); variables
// 0..n are the left column, n+1..2n+1 the right column.

class TransGraph {
public:
    TransGraph() = default;

    static TransGraph empty_graph(int nclocks) {
        TransGraph g;
        g.n_ = nclocks;
        g.empty_ = true;
        return g;
    }

    static TransGraph from_closed(int nclocks, std::vector<Bound> m) {
        TransGraph g;
        g.n_ = nclocks;
        g.m_ = std::move(m);
        g.empty_ = false;
        assert(static_cast<int>(g.m_.size()) == g.side() * g.side());
        return g;
    }

    int nclocks() const { return n_; }
    int side() const { return 2 * (n_ + 1); }
    bool empty() const { return empty_; }

    int left_var(int clock) const { return clock; }
    int right_var(int clock) const { return n_ + 1 + clock; }

    const Bound& at(int a, int b) const { return m_[static_cast<std::size_t>(a * side() + b)]; }

    bool operator==(const TransGraph& o) const {
        if (n_ != o.n_) return false;
        if (empty_ || o.empty_) return empty_ && o.empty_;
        return m_ == o.m_;
    }
    bool operator!=(const TransGraph& o) const { return !(*this == o); }

private:
    int n_ = 0;
    std::vector<Bound> m_;
    bool empty_ = true;
};

// ── Scratch matrices ────────────────────────────────────────────────────────

namespace detail {

class ScratchMatrix {
public:
    ScratchMatrix(int vars) : vars_(vars), m_(static_cast<std::size_t>(vars * vars), Bound::inf()) {
        for (int i = 0; i < vars; ++i) at(i, i) = Bound::zero();
    }

    Bound& at(int a, int b) { return m_[static_cast<std::size_t>(a * vars_ + b)]; }
    const Bound& at(int a, int b) const { return m_[static_cast<std::size_t>(a * vars_ + b)]; }

    // Edge a→b of weight w constrains val(b) − val(a) ≺ w.
    void add_edge(int a, int b, const Bound& w) {
        if (w < at(b, a)) at(b, a) = w;
    }

    bool close() { return close_matrix(m_, vars_); }

    int vars() const { return vars_; }

private:
    int vars_;
    std::vector<Bound> m_;
};

// The three-column graph of a single transition, before closure.
// Columns: 0 = before delay, 1 = at the guard check, 2 = after resets.
// Looseness (x ≥ x0 within every column) is part of the constraint system.
inline ScratchMatrix raw_transition_matrix(const PathStep& t, int nclocks) {
    const int cols = nclocks + 1;
    ScratchMatrix s(3 * cols);
    auto v = [&](int col, int clock) { return col * cols + clock; };

    // time elapse: x0 may only decrease, other clocks keep their loose value
    s.add_edge(v(0, 0), v(1, 0), Bound::zero());
    for (int i = 1; i <= nclocks; ++i) {
        s.add_edge(v(0, i), v(1, i), Bound::zero());
        s.add_edge(v(1, i), v(0, i), Bound::zero());
    }
    // guard, checked in the middle column
    for (const GuardAtom& a : normalize_guard(t.guard)) {
        assert(a.clock >= 1 && a.clock <= nclocks);
        if (is_upper(a.rel))
            s.add_edge(v(1, 0), v(1, a.clock), Bound{a.constant, a.rel == RelKind::Lt});
        else
            s.add_edge(v(1, a.clock), v(1, 0), Bound{-a.constant, a.rel == RelKind::Gt});
    }
    // resets: unreset clocks (and x0) carry over, reset clocks drop to x0
    for (int i = 0; i <= nclocks; ++i) {
        if (i != 0 && t.resets_clock(i)) continue;
        s.add_edge(v(1, i), v(2, i), Bound::zero());
        s.add_edge(v(2, i), v(1, i), Bound::zero());
    }
    for (int x : t.resets) {
        s.add_edge(v(1, x), v(2, x), Bound::zero());
        s.add_edge(v(2, 0), v(2, x), Bound::zero());
        s.add_edge(v(2, x), v(2, 0), Bound::zero());
    }
    // looseness: val(x) ≥ val(x0) in every column
    for (int col = 0; col < 3; ++col)
        for (int i = 1; i <= nclocks; ++i) s.add_edge(v(col, i), v(col, 0), Bound::zero());

    return s;
}

// Close a scratch matrix and keep the cols given by `keep` (variable indices).
inline TransGraph shorten(ScratchMatrix& s, int nclocks, std::span<const int> keep) {
    if (!s.close()) return TransGraph::empty_graph(nclocks);
    const int side = 2 * (nclocks + 1);
    assert(static_cast<int>(keep.size()) == side);
    std::vector<Bound> m(static_cast<std::size_t>(side * side));
    for (int a = 0; a < side; ++a)
        for (int b = 0; b < side; ++b)
            m[static_cast<std::size_t>(a * side + b)] = s.at(keep[static_cast<std::size_t>(a)],
                                                             keep[static_cast<std::size_t>(b)]);
    return TransGraph::from_closed(nclocks, std::move(m));
}

} // namespace detail

// ── Construction and composition ────────────────────────────────────────────

inline TransGraph graph_of_transition(const PathStep& t, int nclocks) {
    detail::ScratchMatrix s = detail::raw_transition_matrix(t, nclocks);
    const int cols = nclocks + 1;
    std::vector<int> keep;
    keep.reserve(static_cast<std::size_t>(2 * cols));
    for (int i = 0; i < cols; ++i) keep.push_back(i);            // column 0
    for (int i = 0; i < cols; ++i) keep.push_back(2 * cols + i); // column 2
    return detail::shorten(s, nclocks, keep);
}

// g1 · g2 = |g1 ⊙ g2|. The junction column is identified once rather than
// duplicated with zero edges; shortest paths are the same either way.
inline TransGraph compose(const TransGraph& g1, const TransGraph& g2) {
    assert(g1.nclocks() == g2.nclocks());
    const int n = g1.nclocks();
    if (g1.empty() || g2.empty()) return TransGraph::empty_graph(n);

    const int cols = n + 1;
    detail::ScratchMatrix s(3 * cols);
    auto A = [&](int i) { return i; };
    auto B = [&](int i) { return cols + i; };
    auto C = [&](int i) { return 2 * cols + i; };

    auto put = [&](int a, int b, const Bound& w) {
        if (w < s.at(a, b)) s.at(a, b) = w;
    };
    for (int i = 0; i < cols; ++i)
        for (int j = 0; j < cols; ++j) {
            put(A(i), A(j), g1.at(g1.left_var(i), g1.left_var(j)));
            put(A(i), B(j), g1.at(g1.left_var(i), g1.right_var(j)));
            put(B(i), A(j), g1.at(g1.right_var(i), g1.left_var(j)));
            put(B(i), B(j), g1.at(g1.right_var(i), g1.right_var(j)));
            put(B(i), B(j), g2.at(g2.left_var(i), g2.left_var(j)));
            put(B(i), C(j), g2.at(g2.left_var(i), g2.right_var(j)));
            put(C(i), B(j), g2.at(g2.right_var(i), g2.left_var(j)));
            put(C(i), C(j), g2.at(g2.right_var(i), g2.right_var(j)));
        }

    std::vector<int> keep;
    keep.reserve(static_cast<std::size_t>(2 * cols));
    for (int i = 0; i < cols; ++i) keep.push_back(A(i));
    for (int i = 0; i < cols; ++i) keep.push_back(C(i));
    return detail::shorten(s, n, keep);
}

inline TransGraph graph_of_sequence(std::span<const PathStep> steps, int nclocks,
                                    std::size_t* composition_counter = nullptr) {
    assert(!steps.empty());
    TransGraph g = graph_of_transition(steps[0], nclocks);
    for (std::size_t k = 1; k < steps.size(); ++k) {
        if (g.empty()) return g;
        g = compose(g, graph_of_transition(steps[k], nclocks));
        if (composition_counter) ++*composition_counter;
    }
    return g;
}

// One exact symbolic pass of σ: delay, guard, reset per step.
inline Zone post_sigma_zone(Zone z, std::span<const PathStep> steps) {
    for (const PathStep& s : steps) {
        if (z.empty_flag()) return z;
        z = reset(intersect_guard(up(std::move(z)), s.guard), s.resets);
    }
    return z;
}

// ── Projections ─────────────────────────────────────────────────────────────

inline Zone project_block(const TransGraph& g, bool right) {
    const int dim = g.nclocks() + 1;
    if (g.empty()) return Zone::empty_zone(dim);
    std::vector<Bound> m(static_cast<std::size_t>(dim * dim));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const int a = right ? g.right_var(i) : g.left_var(i);
            const int b = right ? g.right_var(j) : g.left_var(j);
            m[static_cast<std::size_t>(i * dim + j)] = g.at(a, b);
        }
    Zone z = Zone::from_raw(dim, std::move(m));
    z.set_canonical(true); // sub-block of a closed matrix is closed
    return z;
}

inline Zone left(const TransGraph& g) { return project_block(g, false); }
inline Zone right(const TransGraph& g) { return project_block(g, true); }

// Bump equality: both zone projections agree. Cross-column bounds may differ.
inline bool bump_eq(const TransGraph& g1, const TransGraph& g2) {
    if (g1.empty() || g2.empty()) return g1.empty() && g2.empty();
    return left(g1) == left(g2) && right(g1) == right(g2);
}

// ── Debug dump ──────────────────────────────────────────────────────────────

inline std::string dump(const TransGraph& g) {
    if (g.empty()) return "empty\n";
    std::string out;
    auto name = [&](int v) {
        const int cols = g.nclocks() + 1;
        const int col = v / cols, clock = v % cols;
        return "(" + std::to_string(col) + ",x" + std::to_string(clock) + ")";
    };
    for (int b = 0; b < g.side(); ++b)
        for (int a = 0; a < g.side(); ++a) {
            if (a == b || g.at(a, b).is_inf()) continue;
            // entry (a,b) bounds val(a)-val(b): edge b -> a
            out += name(b) + " -> " + name(a) + " " + g.at(a, b).str() + "\n";
        }
    return out;
}

} // namespace tba
