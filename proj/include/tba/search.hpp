// ============================================================================
// tba/search.hpp — Büchi emptiness: DFS with subsumption, with and without
// the ω-iterability shortcut
// ============================================================================
//
// Depth-first search over the abstract zone graph for weak properties (every
// cycle uniformly accepting or not). Cyan holds the nodes on the current
// path, Blue the fully explored ones.
//
// On a successor (q',Z') with q' accepting:
//   * some Cyan (q',Z'') with Z'' ⊆ Z'  →  accepting cycle;
//   * otherwise, with the shortcut enabled, the stack path σ from the deepest
//     Cyan (q',Z'') to (q',Z') is tested for ω-iterability (by default:
//     iterable from within Z'); success is an accepting cycle too.
// Successors included in a Blue zone at the same state are skipped.
//
// Exploration order is a seeded shuffle with a per-node stream, so both
// algorithms follow the same order for the same seed.
//
// ============================================================================

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "tba/model.hpp"
#include "tba/omega_iter.hpp"
#include "tba/region.hpp"
#include "tba/zone_graph.hpp"

namespace tba {

enum class SearchMode { Dfss, Idfss };
enum class IterableCheck { FromZone, SequenceOnly };
enum class SearchOutcome { CycleFound, Empty };

struct SearchConfig {
    std::uint64_t seed = 0;
    SearchMode mode = SearchMode::Dfss;
    IterableCheck check = IterableCheck::FromZone;
    bool self_audit = true;
};

struct SearchStats {
    std::uint64_t visited = 0;
    std::uint64_t subsumption_skips = 0;
    std::uint64_t iterability_checks = 0;
    SearchOutcome result = SearchOutcome::Empty;
};

namespace detail {

struct SplitMix64 {
    std::uint64_t s;
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

template <typename T>
void shuffle_successors(std::vector<T>& v, std::uint64_t seed, std::size_t nhash) {
    SplitMix64 rng{seed ^ (0xd1b54a32d192ed03ULL * (nhash | 1))};
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = rng.next() % i;
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace detail

// ── check ───────────────────────────────────────────────────────────────────

inline SearchStats check(const TBA& a, const SearchConfig& cfg) {
    const LUBounds lu = compute_lu_bounds(a);
    const int nclocks = static_cast<int>(a.clocks.size());

    struct Frame {
        ZgNode node;
        int incoming = -1; // transition taken into this node
        std::vector<std::pair<int, ZgNode>> succs;
        std::size_t next = 0;
        bool expanded = false;
    };
    std::vector<Frame> stack;
    std::unordered_map<int, std::vector<std::size_t>> cyan; // state -> stack positions
    std::unordered_map<int, std::vector<Zone>> blue;

    SearchStats stats;

    auto steps_of_path = [&](std::size_t from_pos, int closing_trans) {
        std::vector<PathStep> steps;
        for (std::size_t p = from_pos + 1; p < stack.size(); ++p)
            steps.push_back(path_step_of(a, a.transitions[static_cast<std::size_t>(stack[p].incoming)]));
        steps.push_back(path_step_of(a, a.transitions[static_cast<std::size_t>(closing_trans)]));
        return steps;
    };

    // Re-derives the reported cycle by executing σ symbolically from the
    // witness zone; any empty intermediate zone would mean an unsound report.
    auto audit_cycle = [&](const std::vector<PathStep>& steps, Zone start) {
        const int n_active = std::max(1, active_clock_count(steps, nclocks));
        Zone z = std::move(start);
        for (int i = 0; i <= n_active * n_active; ++i) {
            z = post_sigma_zone(std::move(z), steps);
            if (z.empty_flag())
                throw std::logic_error("iterability shortcut reported a non-executable cycle");
        }
    };

    auto push_node = [&](ZgNode nd, int incoming) {
        cyan[nd.state].push_back(stack.size());
        Frame f;
        f.node = std::move(nd);
        f.incoming = incoming;
        stack.push_back(std::move(f));
        ++stats.visited;
    };

    push_node(initial_node(a, lu), -1);

    while (!stack.empty()) {
        Frame& f = stack.back();
        if (!f.expanded) {
            f.succs = successors(a, lu, f.node);
            detail::shuffle_successors(f.succs, cfg.seed, node_hash(f.node));
            f.expanded = true;
        }
        if (f.next >= f.succs.size()) {
            // keep only maximal zones: anything the new zone covers is dead
            // weight for the subsumption scans
            auto& zones = blue[f.node.state];
            bool covered = false;
            for (const Zone& zb : zones)
                if (includes(zb, f.node.zone)) {
                    covered = true;
                    break;
                }
            if (!covered) {
                std::erase_if(zones, [&](const Zone& zb) { return includes(f.node.zone, zb); });
                zones.push_back(f.node.zone);
            }
            auto& positions = cyan[f.node.state];
            positions.pop_back();
            stack.pop_back();
            continue;
        }

        const auto [tidx, succ] = f.succs[f.next++];
        const int q = succ.state;
        const bool accepting = a.accepting[static_cast<std::size_t>(q)];
        const auto cyan_it = cyan.find(q);
        const bool has_cyan = cyan_it != cyan.end() && !cyan_it->second.empty();

        if (!accepting && has_cyan) {
            bool exact = false;
            for (std::size_t pos : cyan_it->second)
                if (stack[pos].node.zone == succ.zone) {
                    exact = true;
                    break;
                }
            if (exact) continue;
        }

        if (accepting && has_cyan) {
            bool included = false;
            for (std::size_t pos : cyan_it->second)
                if (includes(succ.zone, stack[pos].node.zone)) {
                    included = true;
                    break;
                }
            if (included) {
                stats.result = SearchOutcome::CycleFound;
                return stats;
            }
            if (cfg.mode == SearchMode::Idfss) {
                const std::size_t pos = cyan_it->second.back(); // deepest entry
                const std::vector<PathStep> steps = steps_of_path(pos, tidx);
                ++stats.iterability_checks;
                IterResult res = omega_iterable(steps, nclocks);
                bool found = res.iterable;
                Zone start = res.witness;
                if (found && cfg.check == IterableCheck::FromZone) {
                    start = intersect(res.witness, succ.zone);
                    found = !start.empty_flag();
                }
                if (found) {
                    if (cfg.self_audit) audit_cycle(steps, start);
                    stats.result = SearchOutcome::CycleFound;
                    return stats;
                }
            }
        }

        bool subsumed = false;
        if (auto it = blue.find(q); it != blue.end()) {
            for (const Zone& zb : it->second)
                if (includes(zb, succ.zone)) {
                    subsumed = true;
                    break;
                }
        }
        if (subsumed) {
            ++stats.subsumption_skips;
            continue;
        }

        push_node(succ, tidx);
    }

    stats.result = SearchOutcome::Empty;
    return stats;
}

// ── Benchmarks ──────────────────────────────────────────────────────────────

struct BenchRow {
    std::string model;
    int n = 0;
    SearchMode mode = SearchMode::Dfss;
    std::uint64_t seed = 0;
    SearchStats stats;
};

inline const char* mode_str(SearchMode m) { return m == SearchMode::Dfss ? "dfss" : "idfss"; }
inline const char* outcome_str(SearchOutcome o) {
    return o == SearchOutcome::CycleFound ? "CycleFound" : "Empty";
}

inline std::string csv_header() {
    return "model,N,mode,seed,visited,subsumptions,iter_checks,result\n";
}

inline std::string csv_row(const BenchRow& r) {
    return r.model + "," + std::to_string(r.n) + "," + mode_str(r.mode) + "," +
           std::to_string(r.seed) + "," + std::to_string(r.stats.visited) + "," +
           std::to_string(r.stats.subsumption_skips) + "," +
           std::to_string(r.stats.iterability_checks) + "," + outcome_str(r.stats.result) + "\n";
}

// Runs both modes for every seed. Seeds may execute on worker threads; rows
// come back ordered by (mode, seed) regardless.
inline std::vector<BenchRow> run_bench(const TBA& prod, const std::string& model, int n,
                                       const std::vector<std::uint64_t>& seeds,
                                       unsigned threads = 0) {
    struct Job {
        SearchMode mode;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (SearchMode mode : {SearchMode::Dfss, SearchMode::Idfss})
        for (std::uint64_t s : seeds) jobs.push_back({mode, s});

    std::vector<BenchRow> rows(jobs.size());
    if (threads == 0) threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= jobs.size()) return;
            SearchConfig cfg;
            cfg.seed = jobs[k].seed;
            cfg.mode = jobs[k].mode;
            rows[k] = BenchRow{model, n, jobs[k].mode, jobs[k].seed, check(prod, cfg)};
        }
    };
    std::vector<std::future<void>> futs;
    for (unsigned t = 1; t < threads; ++t) futs.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& f : futs) f.get();
    return rows;
}

struct Aggregate {
    double mean_visited = 0;
    std::uint64_t min_visited = 0, max_visited = 0;
    double mean_checks = 0;
    std::uint64_t min_checks = 0, max_checks = 0;
    double median_visited = 0;
};

inline Aggregate aggregate(const std::vector<BenchRow>& rows, SearchMode mode) {
    std::vector<std::uint64_t> vis, chk;
    for (const BenchRow& r : rows)
        if (r.mode == mode) {
            vis.push_back(r.stats.visited);
            chk.push_back(r.stats.iterability_checks);
        }
    Aggregate a;
    if (vis.empty()) return a;
    std::sort(vis.begin(), vis.end());
    std::sort(chk.begin(), chk.end());
    a.min_visited = vis.front();
    a.max_visited = vis.back();
    a.min_checks = chk.front();
    a.max_checks = chk.back();
    double sv = 0, sc = 0;
    for (std::size_t i = 0; i < vis.size(); ++i) {
        sv += static_cast<double>(vis[i]);
        sc += static_cast<double>(chk[i]);
    }
    a.mean_visited = sv / static_cast<double>(vis.size());
    a.mean_checks = sc / static_cast<double>(chk.size());
    a.median_visited = (vis.size() % 2)
                           ? static_cast<double>(vis[vis.size() / 2])
                           : (static_cast<double>(vis[vis.size() / 2 - 1]) +
                              static_cast<double>(vis[vis.size() / 2])) / 2.0;
    return a;
}

} // namespace tba
