// ============================================================================
// tba/zone_graph.hpp — the abstract zone graph
// ============================================================================
//
// Nodes are (state, zone) pairs with the zone canonical, extrapolated and
// non-empty; node identity is bit-exact on the matrix. Successor computation
// is the standard delay–guard–reset step, with state invariants bounding the
// delay on both ends.
//
// ============================================================================

#pragma once

#include <optional>
#include <vector>

#include "tba/model.hpp"
#include "tba/zone.hpp"

namespace tba {

struct ZgNode {
    int state = 0;
    Zone zone;

    bool operator==(const ZgNode& o) const { return state == o.state && zone == o.zone; }
};

inline std::size_t node_hash(const ZgNode& n) {
    return hash_combine(std::hash<int>{}(n.state), zone_hash(n.zone));
}

inline ZgNode initial_node(const TBA& a, const LUBounds& lu) {
    Zone z = up(Zone::origin(a.dim()));
    z = intersect_guard(std::move(z), a.invariants[static_cast<std::size_t>(a.initial)]);
    z = extrapolate_lu_plus(z, lu);
    return {a.initial, std::move(z)};
}

inline std::optional<ZgNode> post(const TBA& a, const LUBounds& lu, const ZgNode& nd,
                                  const Transition& t) {
    Zone z = up(nd.zone);
    z = intersect_guard(std::move(z), a.invariants[static_cast<std::size_t>(t.src)]);
    z = intersect_guard(std::move(z), t.guard);
    if (z.empty_flag()) return std::nullopt;
    z = reset(std::move(z), t.resets);
    z = intersect_guard(std::move(z), a.invariants[static_cast<std::size_t>(t.dst)]);
    if (z.empty_flag()) return std::nullopt;
    z = extrapolate_lu_plus(z, lu);
    return ZgNode{t.dst, std::move(z)};
}

// All non-empty successors, in transition order.
inline std::vector<std::pair<int, ZgNode>> successors(const TBA& a, const LUBounds& lu,
                                                      const ZgNode& nd) {
    std::vector<std::pair<int, ZgNode>> out;
    for (std::size_t ti = 0; ti < a.transitions.size(); ++ti) {
        const Transition& t = a.transitions[ti];
        if (t.src != nd.state) continue;
        if (auto s = post(a, lu, nd, t)) out.emplace_back(static_cast<int>(ti), std::move(*s));
    }
    return out;
}

} // namespace tba
