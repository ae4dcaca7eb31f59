#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tba/omega_iter.hpp"
#include "tba/region.hpp"
#include "support/grid.hpp"

using namespace tba;
using testsupport::grid_valuations;
using testsupport::random_sigma;

namespace {

PathStep step(Guard g, std::vector<int> resets = {}) {
    PathStep s;
    s.guard = std::move(g);
    s.resets = std::move(resets);
    return s;
}

int max_constant(std::span<const PathStep> steps) {
    int m = 1;
    for (const PathStep& s : steps)
        for (const GuardAtom& a : s.guard) m = std::max(m, static_cast<int>(a.constant));
    return m;
}

// A2-style zone precision: the witness matches the oracle on every
// half-integer grid point with components up to M+1.
void check_zone_against_oracle(std::span<const PathStep> steps, int n, const IterResult& res) {
    SigmaOracle oracle(steps, n);
    const double lim = static_cast<double>(max_constant(steps)) + 1.0;
    for (const auto& v : grid_valuations(n, lim)) {
        const bool in_witness = res.iterable && contains(res.witness, v);
        const bool oracle_says = oracle.iterable_from(v);
        INFO("valuation v[0]=" << v[0] << (v.size() > 1 ? " v[1]=" + std::to_string(v[1]) : ""));
        REQUIRE(in_witness == oracle_says);
    }
}

std::size_t squaring_budget(int n_active) {
    const double nn = std::max(1, n_active * n_active);
    return static_cast<std::size_t>(std::ceil(std::log2(nn))) + 1;
}

} // namespace

TEST_CASE("preprocessing") {
    SECTION("conflicting bounds on an unreset clock") {
        // y <= 1 and y >= 2, y never reset
        auto s = step({{1, RelKind::Le, 1}, {1, RelKind::Ge, 2}});
        std::vector<PathStep> sigma{s};
        PreVerdict v = preprocess(sigma, 1);
        CHECK(v.kind == PreKind::NotIterable);
        CHECK(v.reason == 1);

        // equality with strictness also conflicts
        auto s2 = step({{1, RelKind::Lt, 2}, {1, RelKind::Ge, 2}});
        std::vector<PathStep> sigma2{s2};
        CHECK(preprocess(sigma2, 1).reason == 1);
    }
    SECTION("forced elapse against an upper-bounded unreset clock") {
        // x >= 1 with x reset, y <= 100 with y unreset
        auto s = step({{1, RelKind::Ge, 1}, {2, RelKind::Le, 100}}, {1});
        std::vector<PathStep> sigma{s};
        PreVerdict v = preprocess(sigma, 2);
        CHECK(v.kind == PreKind::NotIterable);
        CHECK(v.reason == 2);
    }
    SECTION("strict zero lower bound against a pinned unreset clock") {
        auto s = step({{1, RelKind::Gt, 0}, {2, RelKind::Le, 3}, {2, RelKind::Ge, 3}}, {1});
        std::vector<PathStep> sigma{s};
        PreVerdict v = preprocess(sigma, 2);
        CHECK(v.kind == PreKind::NotIterable);
        CHECK(v.reason == 3);
    }
    SECTION("no positive lower bound on reset clocks: immediately iterable") {
        auto s = step({{1, RelKind::Le, 5}}, {1});
        std::vector<PathStep> sigma{s};
        CHECK(preprocess(sigma, 1).kind == PreKind::Iterable);
    }
    SECTION("x > 0 alone does not force the core test") {
        auto s = step({{1, RelKind::Gt, 0}}, {1});
        std::vector<PathStep> sigma{s};
        CHECK(preprocess(sigma, 1).kind == PreKind::Iterable);
    }
    SECTION("reduction drops guards on unreset clocks") {
        auto s = step({{1, RelKind::Ge, 1}, {2, RelKind::Ge, 7}}, {1});
        std::vector<PathStep> sigma{s};
        PreVerdict v = preprocess(sigma, 2);
        REQUIRE(v.kind == PreKind::Reduced);
        REQUIRE(v.reduced.size() == 1);
        CHECK(v.reduced[0].guard == Guard{{1, RelKind::Ge, 1}});
        CHECK(v.reduced[0].resets == std::vector<int>{1});
    }
}

TEST_CASE("iterability verdict examples") {
    SECTION("x == 1 loop with reset") {
        std::vector<PathStep> sigma{step({{1, RelKind::Eq, 1}}, {1})};
        IterResult r = omega_iterable(sigma, 1);
        REQUIRE(r.iterable);
        // iterable precisely from x <= 1: the first firing still needs to
        // reach the guard from below
        Zone expect = intersect_guard(Zone::universal(2), {{1, RelKind::Le, 1}});
        CHECK(r.witness == expect);
        check_zone_against_oracle(sigma, 1, r);
    }
    SECTION("starved unreset clock") {
        std::vector<PathStep> sigma{step({{1, RelKind::Ge, 1}, {2, RelKind::Le, 100}}, {1})};
        CHECK(!omega_iterable(sigma, 2).iterable);
    }
    SECTION("two-step loop through zero") {
        std::vector<PathStep> sigma{step({{1, RelKind::Ge, 1}}, {1}),
                                    step({{1, RelKind::Le, 0}}, {1})};
        IterResult r = omega_iterable(sigma, 1);
        CHECK(r.iterable == oracle_omega_iterable(sigma, 1));
        if (r.iterable) check_zone_against_oracle(sigma, 1, r);
    }
}

TEST_CASE("witness zones for reduced sequences") {
    SECTION("eliminated lower guards are not plain constant bounds") {
        // x pinned to 1 each round forces unit rounds; the y >= 3 check in
        // the first round couples y to x.
        std::vector<PathStep> sigma{
            step({{1, RelKind::Ge, 1}, {1, RelKind::Le, 1}, {2, RelKind::Ge, 3}}, {1})};
        IterResult r = omega_iterable(sigma, 2);
        REQUIRE(r.iterable);
        check_zone_against_oracle(sigma, 2, r);
        // the witness carries the difference bound y - x >= 2
        CHECK(r.witness.at(1, 2) == Bound::weak(-2));
    }
    SECTION("zero-delay prefix keeps a strict bound strict") {
        std::vector<PathStep> sigma{step({{2, RelKind::Gt, 2}, {1, RelKind::Le, 0}}),
                                    step({{1, RelKind::Ge, 1}}, {1})};
        IterResult r = omega_iterable(sigma, 2);
        REQUIRE(r.iterable);
        check_zone_against_oracle(sigma, 2, r);
        CHECK(r.witness.at(1, 0) == Bound::zero());        // x = 0
        CHECK(r.witness.at(0, 2) == Bound::strict_of(-2)); // y > 2
    }
    SECTION("free delay before the first check erases the dropped bound") {
        std::vector<PathStep> sigma{step({{1, RelKind::Ge, 1}, {2, RelKind::Ge, 7}}, {1})};
        IterResult r = omega_iterable(sigma, 2);
        REQUIRE(r.iterable);
        CHECK(r.witness == Zone::universal(3));
        check_zone_against_oracle(sigma, 2, r);
    }
}

TEST_CASE("witness zones without forced elapse") {
    SECTION("strict upper bound on an unreset clock with compulsory delay") {
        std::vector<PathStep> sigma{step({{1, RelKind::Gt, 0}, {2, RelKind::Lt, 2}}, {1})};
        IterResult r = omega_iterable(sigma, 2);
        REQUIRE(r.iterable);
        check_zone_against_oracle(sigma, 2, r);
        CHECK(r.witness.at(2, 0) == Bound::strict_of(2)); // y < 2
        CHECK(r.witness.at(1, 0).is_inf());               // x unconstrained
    }
    SECTION("window guard on an unreset clock") {
        std::vector<PathStep> sigma{
            step({{1, RelKind::Gt, 0}, {2, RelKind::Ge, 1}, {2, RelKind::Le, 2}}, {1})};
        IterResult r = omega_iterable(sigma, 2);
        REQUIRE(r.iterable);
        check_zone_against_oracle(sigma, 2, r);
        CHECK(r.witness.at(2, 0) == Bound::strict_of(2));
    }
}

TEST_CASE("iterable_from") {
    std::vector<PathStep> sigma{step({{1, RelKind::Eq, 1}}, {1})};
    SECTION("any non-empty zone intersecting the witness") {
        CHECK(iterable_from(sigma, 1, Zone::universal(2)));
        Zone z = intersect_guard(Zone::universal(2), {{1, RelKind::Le, 0}});
        CHECK(iterable_from(sigma, 1, z));
    }
    SECTION("disjoint zone") {
        Zone z = intersect_guard(Zone::universal(2), {{1, RelKind::Ge, 2}});
        CHECK(!iterable_from(sigma, 1, z));
    }
    SECTION("not iterable: false for every zone") {
        std::vector<PathStep> bad{step({{1, RelKind::Ge, 1}, {2, RelKind::Le, 2}}, {1})};
        CHECK(!iterable_from(bad, 2, Zone::universal(3)));
    }
}

TEST_CASE("randomized agreement with the region oracle") {
    std::mt19937_64 rng(31337);
    int iterable = 0, total = 0;
    for (int it = 0; it < 400; ++it) {
        const int n = 1 + static_cast<int>(rng() % 3);
        auto sigma = random_sigma(rng, n, 1 + static_cast<int>(rng() % 4));
        IterStats stats;
        IterResult r = omega_iterable(sigma, n, &stats);
        const bool oracle = oracle_omega_iterable(sigma, n);
        INFO("case " << it << " n=" << n);
        REQUIRE(r.iterable == oracle);
        ++total;
        if (r.iterable) ++iterable;

        // step bound: squarings obey the logarithmic budget
        const PreVerdict pv = preprocess(sigma, n);
        if (pv.kind == PreKind::Reduced) {
            const int na = std::max(1, active_clock_count(pv.reduced, n));
            CHECK(stats.squarings <= squaring_budget(na));
            CHECK(stats.compositions <= sigma.size() - 1 + squaring_budget(na));
        }
        if (pv.kind == PreKind::Iterable && r.iterable)
            CHECK(stats.fixpoint_stabilized); // the zone path never hits the cutoff
    }
    CHECK(iterable > 20);
    CHECK(total - iterable > 20);
}

TEST_CASE("witness precision on random iterable sequences") {
    std::mt19937_64 rng(777);
    int checked = 0;
    for (int it = 0; it < 300 && checked < 60; ++it) {
        const int n = 1 + static_cast<int>(rng() % 2);
        auto sigma = random_sigma(rng, n, 1 + static_cast<int>(rng() % 3));
        IterResult r = omega_iterable(sigma, n);
        if (!r.iterable) continue;
        check_zone_against_oracle(sigma, n, r);
        ++checked;
    }
    CHECK(checked >= 60);
}

TEST_CASE("left projections shrink monotonically under squaring") {
    std::mt19937_64 rng(55);
    for (int it = 0; it < 150; ++it) {
        const int n = 1 + static_cast<int>(rng() % 3);
        auto sigma = random_sigma(rng, n, 1 + static_cast<int>(rng() % 3));
        TransGraph g = graph_of_sequence(sigma, n);
        for (int k = 0; k < 5 && !g.empty(); ++k) {
            TransGraph g2 = compose(g, g);
            if (g2.empty()) break;
            CHECK(includes(left(g), left(g2)));
            g = std::move(g2);
        }
    }
}
