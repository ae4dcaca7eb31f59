// ============================================================================
// tba/omega_iter.hpp — the ω-iterability test
// ============================================================================
//
// Decides whether a transition sequence can be executed infinitely often in
// succession, and if so computes the zone of all valuations it is iterable
// from. Structure:
//
//   1. Preprocessing resolves the cheap cases: certain guard combinations on
//      unreset clocks rule iteration out immediately; if no reset clock has a
//      positive lower guard the sequence always iterates; otherwise guards on
//      unreset clocks are dropped and the core test runs on the reduced
//      sequence.
//   2. The core test squares the sequence's short transformation graph until
//      the composition goes empty, the projections stabilize, or the
//      exponent passes n² (n = clocks occurring in the tested sequence).
//      Stabilization yields the left projection as the witness zone.
//   3. For a reduced sequence the witness zone is re-expressed over the full
//      clock set with one symbolic pre-step through the original guards:
//      dropped guards are lower bounds on clocks that are never reset, so
//      once they hold in the first round they hold forever.
//
// ============================================================================

#pragma once

#include <cassert>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tba/transform_graph.hpp"
#include "tba/zone.hpp"

namespace tba {

// ── Preprocessing ───────────────────────────────────────────────────────────

enum class PreKind { NotIterable, Iterable, Reduced };

struct PreVerdict {
    PreKind kind = PreKind::Iterable;
    int reason = 0;              // 1..3: which non-iterability condition fired
    std::vector<PathStep> reduced; // only for PreKind::Reduced
};

inline const char* pre_reason_str(int reason) {
    switch (reason) {
    case 1: return "conflicting bounds on an unreset clock";
    case 2: return "forced time elapse with an upper-bounded unreset clock";
    case 3: return "forced positive elapse with a pinned unreset clock";
    }
    return "";
}

inline PreVerdict preprocess(std::span<const PathStep> steps, int nclocks) {
    assert(!steps.empty());
    std::vector<bool> is_reset(static_cast<std::size_t>(nclocks) + 1, false);
    for (const PathStep& s : steps)
        for (int r : s.resets) is_reset[static_cast<std::size_t>(r)] = true;

    struct ClockGuards {
        std::vector<Bound> uppers;               // (⊑, d)
        std::vector<std::pair<std::int64_t, bool>> lowers; // (c, strict)
    };
    std::vector<ClockGuards> guards(static_cast<std::size_t>(nclocks) + 1);
    for (const PathStep& s : steps)
        for (const GuardAtom& a : normalize_guard(s.guard)) {
            auto& g = guards[static_cast<std::size_t>(a.clock)];
            if (is_upper(a.rel))
                g.uppers.push_back(Bound{a.constant, a.rel == RelKind::Lt});
            else
                g.lowers.push_back({a.constant, a.rel == RelKind::Gt});
        }

    bool reset_positive_lower = false; // some reset clock checked ⪰ c, c > 0
    bool reset_strict_zero = false;    // some reset clock checked > 0
    for (int x = 1; x <= nclocks; ++x) {
        if (!is_reset[static_cast<std::size_t>(x)]) continue;
        for (auto [c, strict] : guards[static_cast<std::size_t>(x)].lowers) {
            if (c > 0) reset_positive_lower = true;
            if (c == 0 && strict) reset_strict_zero = true;
        }
    }

    PreVerdict v;
    for (int y = 1; y <= nclocks; ++y) {
        if (is_reset[static_cast<std::size_t>(y)]) continue;
        const auto& g = guards[static_cast<std::size_t>(y)];
        for (const Bound& ub : g.uppers)
            for (auto [c, lstrict] : g.lowers) {
                if (ub.value < c || (ub.value == c && (ub.strict || lstrict))) {
                    v.kind = PreKind::NotIterable;
                    v.reason = 1;
                    return v;
                }
            }
        if (reset_positive_lower && !g.uppers.empty()) {
            v.kind = PreKind::NotIterable;
            v.reason = 2;
            return v;
        }
        if (reset_strict_zero) {
            for (const Bound& ub : g.uppers) {
                if (ub.strict) continue;
                for (auto [c, lstrict] : g.lowers)
                    if (!lstrict && c == ub.value) {
                        v.kind = PreKind::NotIterable;
                        v.reason = 3;
                        return v;
                    }
            }
        }
    }

    if (!reset_positive_lower) {
        v.kind = PreKind::Iterable;
        return v;
    }

    v.kind = PreKind::Reduced;
    v.reduced.reserve(steps.size());
    for (const PathStep& s : steps) {
        PathStep r;
        r.resets = s.resets;
        for (const GuardAtom& a : s.guard)
            if (is_reset[static_cast<std::size_t>(a.clock)]) r.guard.push_back(a);
        v.reduced.push_back(std::move(r));
    }
    return v;
}

// ── Core test ───────────────────────────────────────────────────────────────

struct IterResult {
    bool iterable = false;
    Zone witness; // valuations the sequence is ω-iterable from; valid iff iterable
};

struct IterStats {
    std::size_t compositions = 0; // graph compositions, squarings included
    std::size_t squarings = 0;
    bool fixpoint_stabilized = false;
    int pre_kind = -1;
};

inline int active_clock_count(std::span<const PathStep> steps, int nclocks) {
    std::vector<bool> seen(static_cast<std::size_t>(nclocks) + 1, false);
    for (const PathStep& s : steps) {
        for (const GuardAtom& a : s.guard) seen[static_cast<std::size_t>(a.clock)] = true;
        for (int r : s.resets) seen[static_cast<std::size_t>(r)] = true;
    }
    int n = 0;
    for (int x = 1; x <= nclocks; ++x)
        if (seen[static_cast<std::size_t>(x)]) ++n;
    return n;
}

namespace detail {

struct FixpointOutcome {
    enum { Empty, Stable, Cutoff } kind;
    TransGraph graph; // stabilized graph (Stable) or last computed (Cutoff)
};

// Squares g until the relation empties, the projections stabilize, or the
// exponent exceeds n². Projections can only shrink, so one stable squaring
// pins the left column for all further powers.
inline FixpointOutcome square_fixpoint(TransGraph g, int n_active, IterStats* stats) {
    const std::int64_t limit = static_cast<std::int64_t>(n_active) * n_active;
    std::int64_t exponent = 1;
    for (;;) {
        TransGraph g2 = compose(g, g);
        if (stats) {
            ++stats->compositions;
            ++stats->squarings;
        }
        exponent *= 2;
        if (g2.empty()) return {FixpointOutcome::Empty, std::move(g2)};
        if (bump_eq(g2, g)) {
            if (stats) stats->fixpoint_stabilized = true;
            return {FixpointOutcome::Stable, std::move(g2)};
        }
        if (exponent > limit) return {FixpointOutcome::Cutoff, std::move(g2)};
        g = std::move(g2);
    }
}

} // namespace detail

inline IterResult omega_iterable(std::span<const PathStep> steps, int nclocks,
                                 IterStats* stats = nullptr) {
    assert(!steps.empty());
    const PreVerdict pv = preprocess(steps, nclocks);
    if (stats) *stats = IterStats{};
    if (stats) stats->pre_kind = static_cast<int>(pv.kind);

    if (pv.kind == PreKind::NotIterable) return {false, Zone::empty_zone(nclocks + 1)};

    if (pv.kind == PreKind::Iterable) {
        // The quick verdict presumes the guards can be met at all; an empty
        // relation (say x <= 0 && x > 0 on a reset clock) overrides it.
        // Otherwise the fixpoint only produces the witness zone; without
        // forced positive elapse the projections settle almost immediately.
        std::size_t comps = 0;
        TransGraph g = graph_of_sequence(steps, nclocks, &comps);
        if (stats) stats->compositions += comps;
        if (g.empty()) return {false, Zone::empty_zone(nclocks + 1)};
        auto out = detail::square_fixpoint(std::move(g), std::max(1, active_clock_count(steps, nclocks)), stats);
        if (out.kind == detail::FixpointOutcome::Empty)
            throw std::logic_error("iterable preverdict squared to empty");
        return {true, left(out.graph)};
    }

    // Reduced case: the verdict comes from the reduced sequence, considered
    // over the reset clocks only. Unreset clocks cannot stay in the graph:
    // with a forced elapse per round their final values grow without bound
    // and the right projection would never stabilize.
    std::vector<int> compact(static_cast<std::size_t>(nclocks) + 1, 0);
    int m = 0;
    for (const PathStep& s : pv.reduced)
        for (int r : s.resets)
            if (!compact[static_cast<std::size_t>(r)]) compact[static_cast<std::size_t>(r)] = ++m;

    std::vector<PathStep> core;
    core.reserve(pv.reduced.size());
    for (const PathStep& s : pv.reduced) {
        PathStep c;
        for (const GuardAtom& a : s.guard)
            c.guard.push_back({compact[static_cast<std::size_t>(a.clock)], a.rel, a.constant});
        for (int r : s.resets) c.resets.push_back(compact[static_cast<std::size_t>(r)]);
        core.push_back(std::move(c));
    }

    const int n_active = std::max(1, active_clock_count(core, m));
    std::size_t comps = 0;
    TransGraph g = graph_of_sequence(core, m, &comps);
    if (stats) stats->compositions += comps;
    if (g.empty()) return {false, Zone::empty_zone(nclocks + 1)};

    auto out = detail::square_fixpoint(std::move(g), n_active, stats);
    if (out.kind != detail::FixpointOutcome::Stable)
        return {false, Zone::empty_zone(nclocks + 1)};

    // Lift the witness back to the full clock set (unreset clocks free) and
    // re-express the dropped guards with one backwards pass through the
    // original sequence. Dropped guards are lower bounds on clocks that only
    // grow, so holding in the first round keeps them holding forever.
    const Zone wc = left(out.graph);
    Zone w = Zone::universal(nclocks + 1);
    for (int i = 1; i <= nclocks; ++i) {
        if (!compact[static_cast<std::size_t>(i)]) continue;
        for (int j = 0; j <= nclocks; ++j) {
            if (j != 0 && !compact[static_cast<std::size_t>(j)]) continue;
            tighten(w, i, j, wc.at(compact[static_cast<std::size_t>(i)],
                                   compact[static_cast<std::size_t>(j)]));
            tighten(w, j, i, wc.at(compact[static_cast<std::size_t>(j)],
                                   compact[static_cast<std::size_t>(i)]));
        }
    }
    w = canonicalize(std::move(w));
    for (auto it = steps.rbegin(); it != steps.rend(); ++it)
        w = pre(w, it->guard, it->resets);
    if (w.empty_flag()) throw std::logic_error("reduced witness vanished under re-expansion");
    return {true, std::move(w)};
}

// Is the sequence iterable from somewhere inside z?
inline bool iterable_from(std::span<const PathStep> steps, int nclocks, const Zone& z,
                          IterStats* stats = nullptr) {
    assert(!is_empty(z));
    IterResult r = omega_iterable(steps, nclocks, stats);
    if (!r.iterable) return false;
    return !intersect(r.witness, z).empty_flag();
}

} // namespace tba
