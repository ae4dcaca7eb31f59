// ============================================================================
// tba/generators.hpp — benchmark models and their timed properties
// ============================================================================

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tba/model.hpp"

namespace tba {

// Scaled constant: divide by k, round up, never below 1.
inline std::int64_t scaled(std::int64_t c, int k) {
    if (k <= 1) return c;
    return std::max<std::int64_t>(1, (c + k - 1) / k);
}

namespace gen {

inline GuardAtom atom(int clock, RelKind rel, std::int64_t c) { return {clock, rel, c}; }

// ── CSMA/CD ─────────────────────────────────────────────────────────────────
// One station per sender plus the bus. Stations reset their clock on every
// move; the bus clock y tracks the propagation window. `fixed` adds the
// busy-loop on RETRY that the widely circulated model lacks; `nonzeno`
// enforces y ≥ 1 on all transitions out of BUSY.

inline TBA csma_station(int i, std::int64_t L, std::int64_t S, bool fixed) {
    TBA a;
    a.name = "st" + std::to_string(i);
    const std::string xi = "x" + std::to_string(i);
    a.clocks = {xi};
    a.states = {"WAIT", "START", "RETRY"};
    a.accepting = {false, false, false};
    a.invariants = {{}, {atom(1, RelKind::Le, L)}, {atom(1, RelKind::Lt, 2 * S)}};
    const std::string is = std::to_string(i);
    const int WAIT = 0, START = 1, RETRY = 2;
    a.transitions = {
        {WAIT, WAIT, {}, {1}, {"cd_" + is}},
        {WAIT, START, {}, {1}, {"begin_" + is}},
        {WAIT, RETRY, {}, {1}, {"busy_" + is}},
        {WAIT, RETRY, {}, {1}, {"cd_" + is}},
        {RETRY, RETRY, {}, {1}, {"cd_" + is}},
        {RETRY, START, {}, {1}, {"begin_" + is}},
        {START, RETRY, {atom(1, RelKind::Lt, S)}, {1}, {"cd_" + is}},
        {START, WAIT, {atom(1, RelKind::Eq, L)}, {1}, {"end_" + is}},
    };
    if (fixed)
        a.transitions.insert(a.transitions.begin() + 5,
                             {RETRY, RETRY, {}, {1}, {"busy_" + is}});
    return a;
}

inline TBA csma_bus(int n, std::int64_t S, bool nonzeno) {
    TBA a;
    a.name = "bus";
    a.clocks = {"y"};
    a.states = {"IDLE", "BUSY", "COLLISION"};
    a.accepting = {false, false, false};
    a.invariants = {{}, {}, {atom(1, RelKind::Lt, S)}};
    const int IDLE = 0, BUSY = 1, COLLISION = 2;
    Guard busy_extra;
    if (nonzeno) busy_extra.push_back(atom(1, RelKind::Ge, 1));
    for (int i = 1; i <= n; ++i) {
        const std::string is = std::to_string(i);
        a.transitions.push_back({IDLE, BUSY, {}, {1}, {"begin_" + is}});
        Guard gbusy = busy_extra;
        gbusy.push_back(atom(1, RelKind::Ge, S));
        // under the non-Zeno fix the busy announcement restarts y, so that
        // y >= 1 spaces out consecutive transitions from BUSY
        std::vector<int> busy_resets;
        if (nonzeno) busy_resets.push_back(1);
        a.transitions.push_back({BUSY, BUSY, gbusy, busy_resets, {"busy_" + is}});
        Guard gend = busy_extra;
        a.transitions.push_back({BUSY, IDLE, gend, {1}, {"end_" + is}});
        Guard gcoll = busy_extra;
        gcoll.push_back(atom(1, RelKind::Lt, S));
        a.transitions.push_back({BUSY, COLLISION, gcoll, {1}, {"begin_" + is}});
    }
    Transition cd;
    cd.src = COLLISION;
    cd.dst = IDLE;
    cd.guard = {atom(1, RelKind::Lt, S)};
    cd.resets = {1};
    for (int i = 1; i <= n; ++i) cd.labels.push_back("cd_" + std::to_string(i));
    a.transitions.push_back(cd);
    return a;
}

} // namespace gen

inline Network gen_csma(int n, std::int64_t L = 808, std::int64_t S = 26, bool fixed = false,
                        bool nonzeno = false, int scale = 1) {
    if (n < 1) throw std::invalid_argument("gen_csma: n >= 1 required");
    const std::int64_t Ls = scaled(L, scale), Ss = scaled(S, scale);
    Network net;
    for (int i = 1; i <= n; ++i) net.components.push_back(gen::csma_station(i, Ls, Ss, fixed));
    net.components.push_back(gen::csma_bus(n, Ss, nonzeno));
    return net;
}

// ── Fischer ─────────────────────────────────────────────────────────────────
// The shared variable is modelled as its own component: v0..vN with tests and
// writes as handshakes. Requests (including retries from WAITING) carry the
// req_i label so the property can watch them.

inline Network gen_fischer(int n, std::int64_t K = 2, int scale = 1) {
    if (n < 1) throw std::invalid_argument("gen_fischer: n >= 1 required");
    const std::int64_t Ks = scaled(K, scale);
    Network net;
    for (int i = 1; i <= n; ++i) {
        TBA a;
        const std::string is = std::to_string(i);
        a.name = "p" + is;
        a.clocks = {"x" + is};
        a.states = {"IDLE", "REQ", "WAITING", "CS"};
        a.accepting = {false, false, false, false};
        a.invariants = {{}, {gen::atom(1, RelKind::Le, Ks)}, {}, {}};
        a.transitions = {
            {0, 1, {}, {1}, {"req_" + is}},
            {1, 2, {gen::atom(1, RelKind::Le, Ks)}, {1}, {"set_" + is}},
            {2, 1, {}, {1}, {"req_" + is}},
            {2, 3, {gen::atom(1, RelKind::Gt, Ks)}, {}, {"enter_" + is}},
            {3, 0, {}, {}, {"exit_" + is}},
        };
        net.components.push_back(std::move(a));
    }
    TBA var;
    var.name = "id";
    for (int v = 0; v <= n; ++v) {
        var.states.push_back("v" + std::to_string(v));
        var.accepting.push_back(false);
        var.invariants.push_back({});
    }
    for (int i = 1; i <= n; ++i) {
        const std::string is = std::to_string(i);
        var.transitions.push_back({0, 0, {}, {}, {"req_" + is}});
        for (int v = 0; v <= n; ++v)
            var.transitions.push_back({v, i, {}, {}, {"set_" + is}});
        var.transitions.push_back({i, i, {}, {}, {"enter_" + is}});
        var.transitions.push_back({i, 0, {}, {}, {"exit_" + is}});
    }
    net.components.push_back(std::move(var));
    return net;
}

// ── Train Gate ──────────────────────────────────────────────────────────────
// Trains with the classical approach/stop/go/cross timings and a gate that
// tracks the current occupant plus the set of stopped trains (release order
// is nondeterministic).

inline Network gen_train_gate(int n, int scale = 1) {
    if (n < 1) throw std::invalid_argument("gen_train_gate: n >= 1 required");
    auto sc = [&](std::int64_t c) { return scaled(c, scale); };
    Network net;
    for (int i = 1; i <= n; ++i) {
        TBA a;
        const std::string is = std::to_string(i);
        a.name = "t" + is;
        a.clocks = {"c" + is};
        a.states = {"SAFE", "APPR", "STOP", "START", "CROSS"};
        a.accepting = {false, false, false, false, false};
        a.invariants = {{},
                        {gen::atom(1, RelKind::Le, sc(20))},
                        {},
                        {gen::atom(1, RelKind::Le, sc(15))},
                        {gen::atom(1, RelKind::Le, sc(5))}};
        a.transitions = {
            {0, 1, {}, {1}, {"approach_" + is}},
            {1, 4, {gen::atom(1, RelKind::Ge, sc(10)), gen::atom(1, RelKind::Le, sc(20))},
             {1}, {"cross_" + is}},
            {1, 2, {gen::atom(1, RelKind::Le, sc(10))}, {}, {"stop_" + is}},
            {2, 3, {}, {1}, {"go_" + is}},
            {3, 4, {gen::atom(1, RelKind::Ge, sc(7)), gen::atom(1, RelKind::Le, sc(15))},
             {1}, {"cross_" + is}},
            {4, 0, {gen::atom(1, RelKind::Ge, sc(3)), gen::atom(1, RelKind::Le, sc(5))},
             {}, {"leave_" + is}},
        };
        net.components.push_back(std::move(a));
    }

    TBA gate;
    gate.name = "gate";
    // occupant (0 = free) plus a FIFO queue of stopped trains; the head of
    // the queue is released first
    struct GState { int occ; std::vector<int> queue; };
    std::vector<GState> gstates;
    {
        std::vector<std::vector<int>> queues{{}};
        for (std::size_t k = 0; k < queues.size(); ++k) {
            std::vector<int> q = queues[k];
            if (static_cast<int>(q.size()) == n) continue;
            for (int j = 1; j <= n; ++j) {
                if (std::find(q.begin(), q.end(), j) != q.end()) continue;
                auto q2 = q;
                q2.push_back(j);
                queues.push_back(std::move(q2));
            }
        }
        for (int occ = 0; occ <= n; ++occ)
            for (const auto& q : queues) {
                if (occ != 0 && std::find(q.begin(), q.end(), occ) != q.end()) continue;
                gstates.push_back({occ, q});
            }
    }
    auto gname = [&](const GState& g) {
        std::string s = g.occ == 0 ? "FREE" : "OCC" + std::to_string(g.occ);
        if (!g.queue.empty()) {
            s += "_q";
            for (int j : g.queue) s += std::to_string(j);
        }
        return s;
    };
    auto gid = [&](int occ, const std::vector<int>& q) {
        for (std::size_t k = 0; k < gstates.size(); ++k)
            if (gstates[k].occ == occ && gstates[k].queue == q) return static_cast<int>(k);
        return -1;
    };
    for (const GState& g : gstates) {
        gate.states.push_back(gname(g));
        gate.accepting.push_back(false);
        gate.invariants.push_back({});
    }
    for (std::size_t k = 0; k < gstates.size(); ++k) {
        const auto& [occ, queue] = gstates[k];
        for (int j = 1; j <= n; ++j) {
            const std::string js = std::to_string(j);
            const bool queued = std::find(queue.begin(), queue.end(), j) != queue.end();
            if (occ == 0 && !queued)
                gate.transitions.push_back({static_cast<int>(k), gid(j, queue), {}, {},
                                            {"cross_" + js}});
            if (occ == j)
                gate.transitions.push_back({static_cast<int>(k), gid(0, queue), {}, {},
                                            {"leave_" + js}});
            if (j != occ && !queued && (occ != 0 || !queue.empty())) {
                auto q2 = queue;
                q2.push_back(j);
                gate.transitions.push_back({static_cast<int>(k), gid(occ, q2), {}, {},
                                            {"stop_" + js}});
            }
            if (occ == 0 && !queue.empty() && queue.front() == j)
                gate.transitions.push_back({static_cast<int>(k),
                                            gid(0, {queue.begin() + 1, queue.end()}), {}, {},
                                            {"go_" + js}});
        }
    }
    net.components.push_back(std::move(gate));
    return net;
}

// ── FDDI ────────────────────────────────────────────────────────────────────
// Token ring with one station per node. A station holding the token sends its
// synchronous batch for exactly SA time units, then may add an asynchronous
// phase if the token came back early (rotation timer below TTRT = 2·N·SA).

inline Network gen_fddi(int n, std::int64_t SA = 20, int scale = 1) {
    if (n < 1) throw std::invalid_argument("gen_fddi: n >= 1 required");
    const std::int64_t sa = scaled(SA, scale);
    const std::int64_t ttrt = 12 * static_cast<std::int64_t>(n) * sa;
    Network net;
    for (int i = 1; i <= n; ++i) {
        TBA a;
        const std::string is = std::to_string(i);
        a.name = "s" + is;
        a.clocks = {"x" + is, "t" + is};
        a.states = {"IDLE", "ST", "AT", "RT"};
        a.accepting = {false, false, false, false};
        a.invariants = {{},
                        {gen::atom(1, RelKind::Le, sa)},
                        {gen::atom(2, RelKind::Le, ttrt)},
                        {gen::atom(1, RelKind::Le, sa)}};
        a.transitions = {
            {0, 1, {}, {1}, {"tt_" + is}},
            {1, 3, {gen::atom(1, RelKind::Eq, sa), gen::atom(2, RelKind::Ge, ttrt)},
             {}, {"sync_" + is}},
            {1, 2, {gen::atom(1, RelKind::Eq, sa), gen::atom(2, RelKind::Lt, ttrt)},
             {}, {"async_" + is}},
            {2, 0, {gen::atom(2, RelKind::Le, ttrt)}, {2}, {"rt_" + is}},
            {3, 0, {}, {2}, {"rt_" + is}},
        };
        net.components.push_back(std::move(a));
    }
    TBA ring;
    ring.name = "ring";
    for (int i = 1; i <= n; ++i) {
        ring.states.push_back("R" + std::to_string(i));
        ring.states.push_back("H" + std::to_string(i));
        ring.accepting.insert(ring.accepting.end(), {false, false});
        ring.invariants.insert(ring.invariants.end(), {{}, {}});
    }
    for (int i = 1; i <= n; ++i) {
        const int r = 2 * (i - 1), h = 2 * (i - 1) + 1;
        const int rnext = 2 * (i % n);
        ring.transitions.push_back({r, h, {}, {}, {"tt_" + std::to_string(i)}});
        ring.transitions.push_back({h, rnext, {}, {}, {"rt_" + std::to_string(i)}});
    }
    net.components.push_back(std::move(ring));
    return net;
}

// ── Properties ──────────────────────────────────────────────────────────────

// Station 1 keeps trying to transmit quickly; completed transmissions may not
// lag too far behind one another.
inline TBA gen_property_csma(std::int64_t L = 808, std::int64_t S = 26, int scale = 1) {
    const std::int64_t Ls = scaled(L, scale), Ss = scaled(S, scale);
    TBA p;
    p.name = "prop";
    p.clocks = {"t1", "t2"};
    p.states = {"q0", "q1"};
    p.accepting = {true, false};
    p.invariants = {{gen::atom(1, RelKind::Le, 5 * Ss)}, {}};
    p.transitions = {
        {0, 0, {gen::atom(1, RelKind::Lt, 5 * Ss)}, {1}, {"begin_1"}},
        {0, 0, {gen::atom(2, RelKind::Lt, 2 * Ls)}, {2}, {"end_1"}},
        {0, 1, {gen::atom(2, RelKind::Ge, 2 * Ls)}, {}, {"end_1"}},
    };
    return p;
}

// Defect witness: after a collision, station 1 must keep completing
// transmissions with bounded gaps. Weak by construction.
inline TBA gen_property_csma_defect(std::int64_t L = 808, int scale = 1) {
    const std::int64_t Ls = scaled(L, scale);
    TBA p;
    p.name = "prop";
    p.clocks = {"t2"};
    p.states = {"s0", "s1"};
    p.accepting = {false, true};
    p.invariants = {{}, {gen::atom(1, RelKind::Le, 2 * Ls)}};
    p.transitions = {
        {0, 0, {}, {}, {"end_1"}},
        {0, 1, {}, {1}, {"cd_1"}},
        {1, 1, {gen::atom(1, RelKind::Le, 2 * Ls)}, {1}, {"end_1"}},
        {1, 1, {}, {}, {"cd_1"}},
    };
    return p;
}

// Process 1 requests frequently and enters the critical section only inside
// the window [10T, 15T), with T = K·N.
inline TBA gen_property_fischer(int n, std::int64_t K = 2, int scale = 1) {
    const std::int64_t T = scaled(K, scale) * n;
    TBA p;
    p.name = "prop";
    p.clocks = {"o1", "o2"};
    p.states = {"q0", "q1"};
    p.accepting = {true, false};
    p.invariants = {{gen::atom(1, RelKind::Le, 15 * T)}, {}};
    p.transitions = {
        {0, 0, {gen::atom(2, RelKind::Ge, 10 * T), gen::atom(2, RelKind::Lt, 15 * T)},
         {2}, {"enter_1"}},
        {0, 0, {gen::atom(1, RelKind::Le, T)}, {1}, {"req_1"}},
        {0, 1, {gen::atom(2, RelKind::Ge, 15 * T)}, {}, {"enter_1"}},
    };
    return p;
}

// Train 1 approaches frequently and is hardly ever stopped.
inline TBA gen_property_train_gate(int n, int scale = 1) {
    const std::int64_t a = scaled(30, scale) * n;
    const std::int64_t s = scaled(300, scale) * n;
    TBA p;
    p.name = "prop";
    p.clocks = {"o1", "o2"};
    p.states = {"q0", "q1", "q2", "q3"};
    p.accepting = {true, true, true, false};
    p.invariants = {{gen::atom(2, RelKind::Le, a)}, {}, {gen::atom(1, RelKind::Le, s)}, {}};
    p.transitions = {
        {0, 1, {gen::atom(2, RelKind::Le, a)}, {2}, {"approach_1"}},
        {1, 0, {}, {}, {"leave_1"}},
        {1, 2, {gen::atom(1, RelKind::Ge, s)}, {1}, {"stop_1"}},
        {1, 3, {gen::atom(1, RelKind::Lt, s)}, {}, {"stop_1"}},
        {2, 0, {}, {}, {"leave_1"}},
    };
    return p;
}

// Every station sends asynchronously in the same round, infinitely often,
// each round within U = 150·SA·N.
inline TBA gen_property_fddi(int n, std::int64_t SA = 20, int scale = 1) {
    const std::int64_t U = 150 * scaled(SA, scale) * n;
    TBA p;
    p.name = "prop";
    p.clocks = {"o1"};
    for (int j = 0; j < n; ++j) {
        p.states.push_back("q" + std::to_string(j));
        p.accepting.push_back(true);
        p.invariants.push_back({gen::atom(1, RelKind::Le, U)});
    }
    p.states.push_back("bad");
    p.accepting.push_back(false);
    p.invariants.push_back({});
    const int bad = n;
    for (int j = 2; j <= n; ++j) {
        p.transitions.push_back({0, 0, {}, {}, {"async_" + std::to_string(j)}});
        p.transitions.push_back({0, 0, {}, {}, {"sync_" + std::to_string(j)}});
    }
    for (int j = 0; j < n; ++j) {
        const std::string next = "async_" + std::to_string(j + 1);
        if (j + 1 == n)
            p.transitions.push_back({j, 0, {}, {1}, {next}});
        else
            p.transitions.push_back({j, j + 1, {}, {}, {next}});
        if (j >= 1)
            p.transitions.push_back({j, 0, {}, {}, {"sync_" + std::to_string(j + 1)}});
    }
    p.transitions.push_back({n - 1, bad, {gen::atom(1, RelKind::Ge, U)}, {}, {}});
    return p;
}

inline Network gen_model(const std::string& family, int n, bool fixed, bool nonzeno, int scale) {
    if (family == "csma") return gen_csma(n, 808, 26, fixed, nonzeno, scale);
    if (family == "fischer") return gen_fischer(n, 2, scale);
    if (family == "traingate") return gen_train_gate(n, scale);
    if (family == "fddi") return gen_fddi(n, 20, scale);
    throw std::invalid_argument("unknown family '" + family + "'");
}

inline TBA gen_property(const std::string& family, int n, int scale = 1) {
    if (family == "csma") return gen_property_csma(808, 26, scale);
    if (family == "csma_defect") return gen_property_csma_defect(808, scale);
    if (family == "fischer") return gen_property_fischer(n, 2, scale);
    if (family == "traingate") return gen_property_train_gate(n, scale);
    if (family == "fddi") return gen_property_fddi(n, 20, scale);
    throw std::invalid_argument("unknown property family '" + family + "'");
}

} // namespace tba
