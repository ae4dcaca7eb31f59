// ============================================================================
// tba/product.hpp — synchronized product of a network and a property
// ============================================================================
//
// Components synchronize CSP-style on shared labels: every component whose
// alphabet mentions a label must move when that label fires. Transitions that
// carry several labels fuse their labels into one synchronization class, which
// is how a bus edge can pull cd_1..cd_N (and any observer of those) into a
// single step. Unlabeled transitions interleave.
//
// The product is built over the reachable state combinations only. Accepting
// states are those whose property component is accepting; property clocks are
// appended after the model clocks.
//
// ============================================================================

#pragma once

#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tba/model.hpp"

namespace tba {

// Property that accepts everything and observes nothing.
inline TBA trivial_property() {
    TBA p;
    p.name = "prop";
    p.states = {"q0"};
    p.accepting = {true};
    p.invariants = {{}};
    return p;
}

inline TBA product(const Network& net, const TBA& prop) {
    std::vector<const TBA*> comps;
    for (const TBA& c : net.components) comps.push_back(&c);
    comps.push_back(&prop);
    const std::size_t ncomp = comps.size();

    // property must observe only labels the network actually has
    {
        std::set<std::string> net_labels;
        for (const TBA& c : net.components)
            for (const std::string& l : c.alphabet()) net_labels.insert(l);
        for (const std::string& l : prop.alphabet())
            if (!net_labels.count(l))
                throw std::invalid_argument("property label '" + l + "' not present in network");
    }

    // global clock table: model clocks first (by name, in component order),
    // property clocks appended last
    std::vector<std::string> clocks;
    auto add_clock = [&](const std::string& x) {
        for (const std::string& c : clocks)
            if (c == x) return;
        clocks.push_back(x);
    };
    for (const TBA& c : net.components)
        for (const std::string& x : c.clocks) add_clock(x);
    const std::size_t model_clock_count = clocks.size();
    for (const std::string& x : prop.clocks) {
        for (const std::string& c : clocks)
            if (c == x) throw std::invalid_argument("property clock '" + x + "' clashes with model");
        clocks.push_back(x);
    }
    (void)model_clock_count;

    // per-component clock remapping
    std::vector<std::vector<int>> clock_map(ncomp);
    for (std::size_t ci = 0; ci < ncomp; ++ci) {
        clock_map[ci].assign(comps[ci]->clocks.size() + 1, 0);
        for (std::size_t x = 0; x < comps[ci]->clocks.size(); ++x) {
            for (std::size_t g = 0; g < clocks.size(); ++g)
                if (clocks[g] == comps[ci]->clocks[x]) {
                    clock_map[ci][x + 1] = static_cast<int>(g) + 1;
                    break;
                }
        }
    }
    auto remap_guard = [&](std::size_t ci, const Guard& g) {
        Guard out = g;
        for (GuardAtom& a : out) a.clock = clock_map[ci][static_cast<std::size_t>(a.clock)];
        return out;
    };

    // synchronization classes: labels co-occurring on one transition fuse
    std::map<std::string, std::string> parent;
    std::function<std::string(const std::string&)> find = [&](const std::string& l) {
        auto it = parent.find(l);
        if (it == parent.end() || it->second == l) return l;
        return it->second = find(it->second);
    };
    auto unite = [&](const std::string& a, const std::string& b) {
        std::string ra = find(a), rb = find(b);
        parent.try_emplace(ra, ra);
        parent.try_emplace(rb, rb);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    };
    for (const TBA* c : comps)
        for (const Transition& t : c->transitions)
            for (std::size_t i = 0; i < t.labels.size(); ++i) {
                parent.try_emplace(t.labels[i], t.labels[i]);
                if (i) unite(t.labels[0], t.labels[i]);
            }

    std::vector<std::string> classes; // sorted class representatives
    for (auto& [l, _] : parent)
        if (find(l) == l) classes.push_back(l);

    // participants and per-state transition lists per class
    std::vector<std::vector<std::size_t>> participants(classes.size());
    for (std::size_t k = 0; k < classes.size(); ++k)
        for (std::size_t ci = 0; ci < ncomp; ++ci) {
            for (const std::string& l : comps[ci]->alphabet())
                if (find(l) == classes[k]) {
                    participants[k].push_back(ci);
                    break;
                }
        }

    // reachable exploration over discrete states
    using Key = std::vector<int>;
    std::map<Key, int> index;
    std::deque<Key> queue;

    TBA out;
    out.name = "product";
    out.clocks = clocks;

    auto state_name = [&](const Key& s) {
        std::string n;
        for (std::size_t ci = 0; ci < ncomp; ++ci) {
            if (ci) n += '|';
            n += comps[ci]->name + '.' +
                 comps[ci]->states[static_cast<std::size_t>(s[ci])];
        }
        return n;
    };

    auto intern = [&](const Key& s) {
        auto it = index.find(s);
        if (it != index.end()) return it->second;
        const int id = static_cast<int>(out.states.size());
        index.emplace(s, id);
        out.states.push_back(state_name(s));
        out.accepting.push_back(comps.back()->accepting[static_cast<std::size_t>(s.back())]);
        Guard inv;
        for (std::size_t ci = 0; ci < ncomp; ++ci) {
            const Guard& gi = comps[ci]->invariants[static_cast<std::size_t>(s[ci])];
            Guard r = remap_guard(ci, gi);
            inv.insert(inv.end(), r.begin(), r.end());
        }
        out.invariants.push_back(std::move(inv));
        queue.push_back(s);
        return id;
    };

    Key init(ncomp);
    for (std::size_t ci = 0; ci < ncomp; ++ci) init[ci] = comps[ci]->initial;
    out.initial = intern(init);

    auto emit = [&](int src, const Key& dst, Guard guard, std::vector<int> resets,
                    std::vector<std::string> labels) {
        Transition t;
        t.src = src;
        t.dst = intern(dst);
        t.guard = std::move(guard);
        std::sort(resets.begin(), resets.end());
        resets.erase(std::unique(resets.begin(), resets.end()), resets.end());
        t.resets = std::move(resets);
        t.labels = std::move(labels);
        out.transitions.push_back(std::move(t));
    };

    while (!queue.empty()) {
        const Key s = queue.front();
        queue.pop_front();
        const int sid = index.at(s);

        // internal moves, component order
        for (std::size_t ci = 0; ci < ncomp; ++ci)
            for (const Transition& t : comps[ci]->transitions) {
                if (t.src != s[ci] || !t.labels.empty()) continue;
                Key d = s;
                d[ci] = t.dst;
                std::vector<int> resets;
                for (int r : t.resets) resets.push_back(clock_map[ci][static_cast<std::size_t>(r)]);
                emit(sid, d, remap_guard(ci, t.guard), std::move(resets), {});
            }

        // synchronized moves, class order, lexicographic over choices
        for (std::size_t k = 0; k < classes.size(); ++k) {
            std::vector<std::vector<const Transition*>> options;
            bool blocked = false;
            for (std::size_t ci : participants[k]) {
                std::vector<const Transition*> opts;
                for (const Transition& t : comps[ci]->transitions) {
                    if (t.src != s[ci] || t.labels.empty()) continue;
                    if (find(t.labels[0]) != classes[k]) continue;
                    opts.push_back(&t);
                }
                if (opts.empty()) {
                    blocked = true;
                    break;
                }
                options.push_back(std::move(opts));
            }
            if (blocked) continue;

            std::vector<std::size_t> pick(options.size(), 0);
            for (;;) {
                Key d = s;
                Guard guard;
                std::vector<int> resets;
                std::set<std::string> labels;
                for (std::size_t pi = 0; pi < options.size(); ++pi) {
                    const std::size_t ci = participants[k][pi];
                    const Transition& t = *options[pi][pick[pi]];
                    d[ci] = t.dst;
                    Guard g = remap_guard(ci, t.guard);
                    guard.insert(guard.end(), g.begin(), g.end());
                    for (int r : t.resets)
                        resets.push_back(clock_map[ci][static_cast<std::size_t>(r)]);
                    labels.insert(t.labels.begin(), t.labels.end());
                }
                emit(sid, d, std::move(guard), std::move(resets),
                     std::vector<std::string>(labels.begin(), labels.end()));

                std::size_t i = 0;
                for (; i < pick.size(); ++i) {
                    if (++pick[i] < options[i].size()) break;
                    pick[i] = 0;
                }
                if (i == pick.size()) break;
            }
        }
    }

    validate(out);
    return out;
}

} // namespace tba
