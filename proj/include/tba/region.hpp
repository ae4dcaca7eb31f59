// ============================================================================
// tba/region.hpp — region-graph ground truth at desk scale
// ============================================================================
//
// Classical clock regions w.r.t. a maximum constant M: per-clock integer part
// (capped above M), zero-fraction flags, and the ordering of fractional parts.
// Time successors are computed exactly on integer-scaled representative
// valuations, so the construction is free of floating-point drift.
//
// This backs the brute-force iterability oracle used by the test and
// acceptance suites. It refuses instances whose region count exceeds a guard
// rail rather than approximating.
//
// ============================================================================

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tba/constraint.hpp"
#include "tba/transform_graph.hpp"
#include "tba/zone.hpp"

namespace tba {

struct OracleLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ── Region ──────────────────────────────────────────────────────────────────
// ip[i] ∈ [0..M] for bounded clocks, M+1 marks "above M". cls[i] is −1 when
// the fractional part is zero (or the clock is capped), otherwise the rank of
// its fractional part among the bounded clocks, 0 = smallest.

struct Region {
    std::vector<std::int8_t> ip;
    std::vector<std::int8_t> cls;

    bool operator==(const Region& o) const { return ip == o.ip && cls == o.cls; }
};

struct RegionHash {
    std::size_t operator()(const Region& r) const {
        std::size_t h = 0x243f6a8885a308d3ULL;
        for (std::size_t i = 0; i < r.ip.size(); ++i) {
            h = hash_combine(h, static_cast<std::size_t>(r.ip[i]) + 17);
            h = hash_combine(h, static_cast<std::size_t>(r.cls[i] + 1));
        }
        return h;
    }
};

namespace detail {

// Classify integer-scaled values num[i]/den.
inline Region region_of_scaled(const std::vector<std::int64_t>& num, std::int64_t den, int M) {
    const std::size_t n = num.size();
    Region r;
    r.ip.assign(n, 0);
    r.cls.assign(n, -1);
    std::vector<std::int64_t> fracs;
    for (std::size_t i = 0; i < n; ++i) {
        if (num[i] > static_cast<std::int64_t>(M) * den) {
            r.ip[i] = static_cast<std::int8_t>(M + 1);
            continue;
        }
        r.ip[i] = static_cast<std::int8_t>(num[i] / den);
        const std::int64_t f = num[i] % den;
        if (f != 0) fracs.push_back(f);
    }
    std::sort(fracs.begin(), fracs.end());
    fracs.erase(std::unique(fracs.begin(), fracs.end()), fracs.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (r.ip[i] == M + 1) continue;
        const std::int64_t f = num[i] % den;
        if (f != 0)
            r.cls[i] = static_cast<std::int8_t>(
                std::lower_bound(fracs.begin(), fracs.end(), f) - fracs.begin());
    }
    return r;
}

// Representative valuation, scaled by den = 2·(K+2) with K fraction classes.
inline void representative(const Region& r, int M, std::vector<std::int64_t>& num,
                           std::int64_t& den) {
    int K = 0;
    for (std::int8_t c : r.cls) K = std::max(K, static_cast<int>(c) + 1);
    den = 2 * (K + 2);
    num.assign(r.ip.size(), 0);
    for (std::size_t i = 0; i < r.ip.size(); ++i) {
        if (r.ip[i] == M + 1) {
            num[i] = static_cast<std::int64_t>(M) * den + den / 2;
        } else {
            num[i] = static_cast<std::int64_t>(r.ip[i]) * den;
            if (r.cls[i] >= 0) num[i] += 2 * (static_cast<std::int64_t>(r.cls[i]) + 1);
        }
    }
}

} // namespace detail

inline Region region_of(const std::vector<double>& v, int M) {
    // exact for the half-integer grids the tests use
    std::vector<std::int64_t> num(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double scaled = v[i] * 4.0;
        num[i] = static_cast<std::int64_t>(scaled);
        if (static_cast<double>(num[i]) != scaled)
            throw std::invalid_argument("region_of: valuation not on the quarter grid");
        if (num[i] < 0) throw std::invalid_argument("region_of: negative clock value");
    }
    return detail::region_of_scaled(num, 4, M);
}

// Immediate time successor; the all-capped region is its own successor.
inline Region time_successor(const Region& r, int M) {
    std::vector<std::int64_t> num;
    std::int64_t den = 0;
    detail::representative(r, M, num, den);

    bool any_bounded = false, any_zero_frac = false;
    int K = 0;
    for (std::size_t i = 0; i < r.ip.size(); ++i) {
        if (r.ip[i] == M + 1) continue;
        any_bounded = true;
        if (r.cls[i] < 0) any_zero_frac = true;
        K = std::max(K, static_cast<int>(r.cls[i]) + 1);
    }
    if (!any_bounded) return r;

    // smallest advance that changes the region
    const std::int64_t delta = any_zero_frac ? 1 : den - 2 * K;
    for (std::size_t i = 0; i < num.size(); ++i) num[i] += delta;
    return detail::region_of_scaled(num, den, M);
}

inline Region reset_region(const Region& r, std::span<const int> resets, int M) {
    std::vector<std::int64_t> num;
    std::int64_t den = 0;
    detail::representative(r, M, num, den);
    for (int x : resets) num[static_cast<std::size_t>(x - 1)] = 0;
    return detail::region_of_scaled(num, den, M);
}

inline bool region_satisfies(const Region& r, const Guard& g, int M) {
    for (const GuardAtom& a : normalize_guard(g)) {
        const std::size_t i = static_cast<std::size_t>(a.clock - 1);
        const bool capped = r.ip[i] == M + 1;
        const int ip = static_cast<int>(r.ip[i]);
        const bool frac0 = r.cls[i] < 0 && !capped;
        bool ok = false;
        switch (a.rel) {
        case RelKind::Lt: ok = !capped && ip < a.constant; break;
        case RelKind::Le: ok = !capped && (ip < a.constant || (ip == a.constant && frac0)); break;
        case RelKind::Ge: ok = capped || ip >= a.constant; break;
        case RelKind::Gt: ok = capped || ip > a.constant || (ip == a.constant && !frac0); break;
        case RelKind::Eq: ok = false; break; // normalized away
        }
        if (!ok) return false;
    }
    return true;
}

// ── Region universe ─────────────────────────────────────────────────────────

struct RegionUniverse {
    int n = 0;
    int M = 0;
    std::vector<Region> regions;
    std::unordered_map<Region, int, RegionHash> index;
    std::vector<std::vector<int>> closure; // time closure, as region ids

    int id_of(const Region& r) const {
        auto it = index.find(r);
        if (it == index.end()) throw std::logic_error("region not in universe");
        return it->second;
    }
};

namespace detail {

inline void enumerate_ordered_partitions(const std::vector<int>& elems,
                                         std::vector<std::vector<int>>& blocks,
                                         std::vector<int>& used,
                                         const std::function<void(const std::vector<std::vector<int>>&)>& emit) {
    if (used.size() == elems.size()) {
        emit(blocks);
        return;
    }
    // pick the next block: any nonempty subset of the remaining elements
    std::vector<int> remaining;
    for (int e : elems)
        if (std::find(used.begin(), used.end(), e) == used.end()) remaining.push_back(e);
    const std::size_t m = remaining.size();
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        std::vector<int> block;
        for (std::size_t b = 0; b < m; ++b)
            if (mask & (1u << b)) block.push_back(remaining[b]);
        blocks.push_back(block);
        for (int e : block) used.push_back(e);
        enumerate_ordered_partitions(elems, blocks, used, emit);
        for (std::size_t k = 0; k < block.size(); ++k) used.pop_back();
        blocks.pop_back();
    }
}

} // namespace detail

inline std::shared_ptr<const RegionUniverse> build_region_universe(int n, int M,
                                                                   std::size_t max_regions) {
    auto u = std::make_shared<RegionUniverse>();
    u->n = n;
    u->M = M;

    // enumerate per-clock (capped | ip) choices, then fraction-class orderings
    std::vector<std::int8_t> ip(static_cast<std::size_t>(n), 0);
    std::vector<std::int8_t> frac(static_cast<std::size_t>(n), 0); // 1 = positive fraction

    std::function<void(int)> rec = [&](int clock) {
        if (clock == n) {
            std::vector<int> positive;
            for (int i = 0; i < n; ++i)
                if (ip[static_cast<std::size_t>(i)] <= M && frac[static_cast<std::size_t>(i)])
                    positive.push_back(i);
            auto emit_region = [&](const std::vector<std::vector<int>>& blocks) {
                Region r;
                r.ip = ip;
                r.cls.assign(static_cast<std::size_t>(n), -1);
                for (std::size_t b = 0; b < blocks.size(); ++b)
                    for (int e : blocks[b]) r.cls[static_cast<std::size_t>(e)] = static_cast<std::int8_t>(b);
                if (u->regions.size() >= max_regions)
                    throw OracleLimitError("region universe exceeds guard rail");
                u->index.emplace(r, static_cast<int>(u->regions.size()));
                u->regions.push_back(std::move(r));
            };
            if (positive.empty()) {
                emit_region({});
            } else {
                std::vector<std::vector<int>> blocks;
                std::vector<int> used;
                detail::enumerate_ordered_partitions(positive, blocks, used, emit_region);
            }
            return;
        }
        for (int v = 0; v <= M + 1; ++v) {
            ip[static_cast<std::size_t>(clock)] = static_cast<std::int8_t>(v);
            if (v == M + 1) {
                frac[static_cast<std::size_t>(clock)] = 0;
                rec(clock + 1);
            } else {
                for (int f = 0; f <= 1; ++f) {
                    frac[static_cast<std::size_t>(clock)] = static_cast<std::int8_t>(f);
                    rec(clock + 1);
                }
            }
        }
    };
    rec(0);

    u->closure.resize(u->regions.size());
    for (std::size_t i = 0; i < u->regions.size(); ++i) {
        Region cur = u->regions[i];
        std::vector<int> chain{static_cast<int>(i)};
        for (;;) {
            Region nxt = time_successor(cur, M);
            if (nxt == cur) break;
            chain.push_back(u->id_of(nxt));
            cur = std::move(nxt);
        }
        u->closure[i] = std::move(chain);
    }
    return u;
}

inline std::shared_ptr<const RegionUniverse> region_universe(int n, int M,
                                                             std::size_t max_regions = 1000000) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const RegionUniverse>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, M);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto u = build_region_universe(n, M, max_regions);
    cache.emplace(key, u);
    return u;
}

// ── Sigma oracle ────────────────────────────────────────────────────────────
// Region-level transition relation of a transition sequence, with cycle
// analysis: a sequence is ω-iterable iff the σ-step graph has a cycle, and it
// is iterable from v iff region_of(v) can reach one.

class SigmaOracle {
public:
    SigmaOracle(std::span<const PathStep> steps, int nclocks, std::size_t max_regions = 1000000)
        : steps_(steps.begin(), steps.end()), n_(nclocks) {
        M_ = 1;
        for (const PathStep& s : steps_)
            for (const GuardAtom& a : s.guard) M_ = std::max(M_, static_cast<int>(a.constant));
        universe_ = region_universe(nclocks, M_, max_regions);
        if (universe_->regions.size() > max_regions)
            throw OracleLimitError("region universe exceeds guard rail");
        analyze();
    }

    int max_constant() const { return M_; }
    std::size_t region_count() const { return universe_->regions.size(); }

    bool omega_iterable() const { return has_cycle_; }

    bool iterable_from(const std::vector<double>& v) const {
        const Region r = region_of(v, M_);
        return alive_[static_cast<std::size_t>(universe_->id_of(r))];
    }

private:
    std::vector<int> step_image(int id, const PathStep& step) const {
        std::vector<int> out;
        for (int mid : universe_->closure[static_cast<std::size_t>(id)]) {
            if (!region_satisfies(universe_->regions[static_cast<std::size_t>(mid)], step.guard, M_))
                continue;
            Region r = reset_region(universe_->regions[static_cast<std::size_t>(mid)], step.resets, M_);
            out.push_back(universe_->id_of(r));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    void analyze() {
        const std::size_t N = universe_->regions.size();
        // σ-adjacency
        adj_.resize(N);
        for (std::size_t id = 0; id < N; ++id) {
            std::vector<int> cur{static_cast<int>(id)};
            for (const PathStep& s : steps_) {
                std::vector<int> nxt;
                for (int c : cur) {
                    std::vector<int> img = step_image(c, s);
                    nxt.insert(nxt.end(), img.begin(), img.end());
                }
                std::sort(nxt.begin(), nxt.end());
                nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
                cur = std::move(nxt);
                if (cur.empty()) break;
            }
            adj_[id] = std::move(cur);
        }

        // nodes on cycles, by iterative 3-color DFS
        std::vector<std::int8_t> color(N, 0);
        std::vector<std::int8_t> on_cycle(N, 0);
        for (std::size_t root = 0; root < N; ++root) {
            if (color[root]) continue;
            struct Frame { int node; std::size_t next; };
            std::vector<Frame> stack{{static_cast<int>(root), 0}};
            color[root] = 1;
            while (!stack.empty()) {
                Frame& f = stack.back();
                const auto& succ = adj_[static_cast<std::size_t>(f.node)];
                if (f.next < succ.size()) {
                    const int s = succ[f.next++];
                    if (color[static_cast<std::size_t>(s)] == 0) {
                        color[static_cast<std::size_t>(s)] = 1;
                        stack.push_back({s, 0});
                    } else if (color[static_cast<std::size_t>(s)] == 1) {
                        // back edge: everything from s up the stack is on a cycle
                        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                            on_cycle[static_cast<std::size_t>(it->node)] = 1;
                            if (it->node == s) break;
                        }
                    }
                } else {
                    color[static_cast<std::size_t>(f.node)] = 2;
                    stack.pop_back();
                }
            }
        }
        has_cycle_ = std::any_of(on_cycle.begin(), on_cycle.end(), [](std::int8_t b) { return b != 0; });

        // alive = can reach a cycle (backward closure over reverse edges)
        std::vector<std::vector<int>> radj(N);
        for (std::size_t a = 0; a < N; ++a)
            for (int b : adj_[a]) radj[static_cast<std::size_t>(b)].push_back(static_cast<int>(a));
        alive_.assign(N, false);
        std::vector<int> work;
        for (std::size_t i = 0; i < N; ++i)
            if (on_cycle[i]) {
                alive_[i] = true;
                work.push_back(static_cast<int>(i));
            }
        while (!work.empty()) {
            const int b = work.back();
            work.pop_back();
            for (int a : radj[static_cast<std::size_t>(b)])
                if (!alive_[static_cast<std::size_t>(a)]) {
                    alive_[static_cast<std::size_t>(a)] = true;
                    work.push_back(a);
                }
        }
    }

    std::vector<PathStep> steps_;
    int n_;
    int M_ = 1;
    std::shared_ptr<const RegionUniverse> universe_;
    std::vector<std::vector<int>> adj_;
    std::vector<bool> alive_;
    bool has_cycle_ = false;
};

inline bool oracle_omega_iterable(std::span<const PathStep> steps, int nclocks) {
    return SigmaOracle(steps, nclocks).omega_iterable();
}

inline bool oracle_iterable_from(std::span<const PathStep> steps, int nclocks,
                                 const std::vector<double>& v) {
    return SigmaOracle(steps, nclocks).iterable_from(v);
}

// Independent cross-check: iterate the exact zone post of σ from the universal
// zone; the chain is decreasing, so it either empties (not iterable) or
// reaches a non-empty fixpoint (iterable). Region count bounds the iterations.
inline bool zone_iteration_omega_iterable(std::span<const PathStep> steps, int nclocks,
                                          std::size_t max_regions = 1000000) {
    int M = 1;
    for (const PathStep& s : steps)
        for (const GuardAtom& a : s.guard) M = std::max(M, static_cast<int>(a.constant));
    const auto universe = region_universe(nclocks, M, max_regions);
    const std::size_t cap = universe->regions.size() + 2;

    Zone z = Zone::universal(nclocks + 1);
    for (std::size_t i = 0; i < cap; ++i) {
        Zone nxt = post_sigma_zone(z, steps);
        if (nxt.empty_flag()) return false;
        if (nxt == z) return true;
        z = std::move(nxt);
    }
    return true; // survived more iterations than there are regions
}

} // namespace tba
