#include <catch2/catch_amalgamated.hpp>

#include "tba/generators.hpp"
#include "tba/product.hpp"
#include "tba/search.hpp"

using namespace tba;

namespace {

SearchStats run(const TBA& a, SearchMode mode, std::uint64_t seed = 0,
                IterableCheck check = IterableCheck::FromZone) {
    SearchConfig cfg;
    cfg.mode = mode;
    cfg.seed = seed;
    cfg.check = check;
    return tba::check(a, cfg);
}

// The reconstruction used throughout: a loop that drifts the clock
// difference for a hundred abstract zones before the abstraction folds.
TBA drift_loop_model() {
    TBA a;
    a.name = "drift";
    a.clocks = {"x", "y"};
    a.states = {"A", "B"};
    a.accepting = {true, false};
    a.invariants = {{}, {}};
    a.transitions = {
        {0, 0, {{1, RelKind::Eq, 1}}, {1}, {}},   // the iterable loop
        {0, 1, {{2, RelKind::Eq, 100}}, {}, {}},  // pins the y constants
    };
    return a;
}

} // namespace

TEST_CASE("no accepting state: empty, full graph visited") {
    TBA a;
    a.name = "chain";
    a.clocks = {"x"};
    a.states = {"s0", "s1", "s2"};
    a.accepting = {false, false, false};
    a.invariants = {{}, {}, {}};
    a.transitions = {
        {0, 1, {{1, RelKind::Ge, 1}}, {1}, {}},
        {1, 2, {{1, RelKind::Ge, 1}}, {1}, {}},
    };
    for (SearchMode mode : {SearchMode::Dfss, SearchMode::Idfss}) {
        SearchStats st = run(a, mode, 3);
        CHECK(st.result == SearchOutcome::Empty);
        CHECK(st.visited == 3); // one zone per state here
        CHECK(st.iterability_checks == 0);
    }
}

TEST_CASE("accepting self-loop with a stable zone") {
    TBA a;
    a.name = "loop";
    a.clocks = {"x"};
    a.states = {"s"};
    a.accepting = {true};
    a.invariants = {{}};
    a.transitions = {{0, 0, {}, {}, {}}};
    for (SearchMode mode : {SearchMode::Dfss, SearchMode::Idfss}) {
        SearchStats st = run(a, mode);
        CHECK(st.result == SearchOutcome::CycleFound);
        CHECK(st.visited == 1);
        CHECK(st.iterability_checks == 0); // zone inclusion fires first
    }
}

TEST_CASE("drift loop: subsumption search needs the long walk") {
    TBA a = drift_loop_model();
    for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
        SearchStats dfss = run(a, SearchMode::Dfss, seed);
        CHECK(dfss.result == SearchOutcome::CycleFound);
        CHECK(dfss.visited >= 100);

        SearchStats idfss = run(a, SearchMode::Idfss, seed);
        CHECK(idfss.result == SearchOutcome::CycleFound);
        CHECK(idfss.visited <= 5);
        CHECK(idfss.iterability_checks == 1);
    }
}

TEST_CASE("fixed seeds reproduce identical statistics") {
    Network net = gen_csma(2, 8, 2, true, true);
    TBA prod = product(net, gen_property_csma(8, 2));
    for (SearchMode mode : {SearchMode::Dfss, SearchMode::Idfss}) {
        SearchStats a = run(prod, mode, 42);
        SearchStats b = run(prod, mode, 42);
        CHECK(a.visited == b.visited);
        CHECK(a.subsumption_skips == b.subsumption_skips);
        CHECK(a.iterability_checks == b.iterability_checks);
        CHECK(a.result == b.result);
    }
}

TEST_CASE("both modes agree on shrunk benchmarks") {
    struct Case {
        TBA prod;
        const char* name;
    };
    std::vector<Case> cases;
    cases.push_back({product(gen_csma(2, 8, 2, true, true), gen_property_csma(8, 2)), "bus"});
    cases.push_back({product(gen_fischer(2, 2), gen_property_fischer(2, 2)), "mutex"});
    cases.push_back({product(gen_train_gate(2, 10), gen_property_train_gate(2, 10)), "gate"});
    cases.push_back({product(gen_fddi(2, 2), gen_property_fddi(2, 2)), "ring"});

    for (auto& c : cases)
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            SearchStats dfss = run(c.prod, SearchMode::Dfss, seed);
            SearchStats idfss = run(c.prod, SearchMode::Idfss, seed);
            INFO(c.name << " seed " << seed);
            CHECK(dfss.result == idfss.result);
            CHECK(dfss.iterability_checks == 0);
        }
}

TEST_CASE("sequence-only check agrees on these instances") {
    Network net = gen_csma(2, 8, 2, true, true);
    TBA prod = product(net, gen_property_csma(8, 2));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        SearchStats from_zone = run(prod, SearchMode::Idfss, seed, IterableCheck::FromZone);
        SearchStats seq_only = run(prod, SearchMode::Idfss, seed, IterableCheck::SequenceOnly);
        CHECK(from_zone.result == seq_only.result);
    }
}

TEST_CASE("missing busy loop kills post-collision transmissions") {
    // after a collision the station in RETRY has no way to wait out a busy
    // bus, so sustained transmissions are impossible
    TBA broken = product(gen_csma(2, 8, 2, false, true), gen_property_csma_defect(8));
    TBA fixed = product(gen_csma(2, 8, 2, true, true), gen_property_csma_defect(8));
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        for (SearchMode mode : {SearchMode::Dfss, SearchMode::Idfss}) {
            CHECK(run(broken, mode, seed).result == SearchOutcome::Empty);
            CHECK(run(fixed, mode, seed).result == SearchOutcome::CycleFound);
        }
    }
}

TEST_CASE("benchmark rows and CSV schema") {
    Network net = gen_csma(2, 8, 2, true, true);
    TBA prod = product(net, gen_property_csma(8, 2));
    auto rows = run_bench(prod, "bus", 2, {0, 1, 2}, 2);
    REQUIRE(rows.size() == 6);

    CHECK(csv_header() == "model,N,mode,seed,visited,subsumptions,iter_checks,result\n");
    // rows come back ordered by (mode, seed) and match single-shot runs
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SearchMode mode = i < 3 ? SearchMode::Dfss : SearchMode::Idfss;
        const std::uint64_t seed = i % 3;
        CHECK(rows[i].mode == mode);
        CHECK(rows[i].seed == seed);
        SearchStats st = run(prod, mode, seed);
        CHECK(rows[i].stats.visited == st.visited);
        CHECK(rows[i].stats.result == st.result);
    }
    const std::string line = csv_row(rows[0]);
    CHECK(line.find("bus,2,dfss,0,") == 0);

    Aggregate agg = aggregate(rows, SearchMode::Dfss);
    CHECK(agg.min_visited <= agg.mean_visited);
    CHECK(agg.mean_visited <= agg.max_visited);
}
