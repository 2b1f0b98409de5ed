#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <es/chain_sequential.hpp>
#include <es/generators.hpp>
#include <es/graph.hpp>

#include <algorithm>
#include <map>
#include <vector>

using namespace es;

namespace {

std::vector<payload_t> canonical_multiset(const EdgeList& g) {
    std::vector<payload_t> v;
    v.reserve(g.edges.size());
    for (const auto e : g.edges)
        v.push_back(to_payload(e));
    std::sort(v.begin(), v.end());
    return v;
}

// Slot-by-slot undirected view of the edge array. Reversal restores each
// slot's undirected edge; the stored orientation of the second slot may flip
// (no orientation rule can avoid that for g=1 switches).
std::vector<payload_t> slotwise(const std::vector<Edge>& edges) {
    std::vector<payload_t> v;
    v.reserve(edges.size());
    for (const auto e : edges)
        v.push_back(to_payload(e));
    return v;
}

bool simple_with_degrees(const EdgeList& g, const DegreeSequence& d) {
    SequentialEdgeSet seen;
    for (const auto e : g.edges)
        if (is_loop(e) || !seen.insert(to_payload(e)))
            return false;
    return degree_sequence_of(g) == d;
}

EdgeList path4() {
    // Path 0-1-2-3: switches between its two edges {0,1},{2,3}... use the
    // disjoint pair graph instead where outcomes are easy to enumerate.
    EdgeList g;
    g.num_nodes = 4;
    g.edges = {Edge{0, 1}, Edge{2, 3}};
    return g;
}

GlobalSwitch make_random_global(RandomStream& rng, std::uint64_t m) {
    GlobalSwitch gs;
    gs.perm.resize(m);
    for (std::size_t p = 0; p < m; ++p)
        gs.perm[p] = std::uint32_t(p);
    shuffle(std::span<std::uint32_t>(gs.perm), rng);
    gs.ell = m < 2 ? 0 : uniform_index(rng, m / 2 + 1);
    gs.dirs.resize(gs.ell);
    for (auto& d : gs.dirs)
        d = random_bit(rng) ? 1 : 0;
    return gs;
}

} // namespace

TEST_CASE("apply_switch frozen examples") {
    SUBCASE("matching graph, g=1") {
        ChainState state(path4());
        CHECK(state.apply_switch({0, 1, true}) == SwitchOutcome::Accepted);
        CHECK(state.graph().edges[0] == Edge{0, 3});
        CHECK(state.graph().edges[1] == Edge{1, 2});
        CHECK(state.has_edge(Edge{0, 3}));
        CHECK(state.has_edge(Edge{1, 2}));
        CHECK(!state.has_edge(Edge{0, 1}));
    }
    SUBCASE("matching graph, g=0") {
        ChainState state(path4());
        CHECK(state.apply_switch({0, 1, false}) == SwitchOutcome::Accepted);
        CHECK(state.graph().edges[0] == Edge{0, 2});
        CHECK(state.graph().edges[1] == Edge{1, 3});
    }
    SUBCASE("triangle rejects everything") {
        ChainState state(havel_hakimi({2, 2, 2}));
        for (std::uint64_t i = 0; i < 3; ++i)
            for (std::uint64_t j = 0; j < 3; ++j)
                for (int g = 0; g < 2; ++g) {
                    if (i == j)
                        continue;
                    CHECK(state.apply_switch({i, j, g != 0}) != SwitchOutcome::Accepted);
                }
        CHECK(state.counters().accepted == 0);
        CHECK(canonical_multiset(state.graph()) == canonical_multiset(havel_hakimi({2, 2, 2})));
    }
    SUBCASE("loop rejection") {
        // Edges {0,1}, {1,2} share node 1: g=1 gives (0,2),(1,1) -> loop.
        EdgeList g;
        g.num_nodes = 3;
        g.edges = {Edge{0, 1}, Edge{1, 2}};
        ChainState state(g);
        CHECK(state.apply_switch({0, 1, true}) == SwitchOutcome::RejectedLoop);
        CHECK(state.graph().edges[0] == Edge{0, 1});
        CHECK(state.graph().edges[1] == Edge{1, 2});
    }
}

TEST_CASE("accepted switch reversed by re-applying (i, j, 0)") {
    // Obs. 1 in executable form: after an accepted switch, the same indices
    // with direction 0 restore the previous edge array exactly.
    RandomStream rng(6021);
    int accepted = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const node_t n = 6 + node_t(uniform_index(rng, 24));
        auto g = gen_gnp(n, 0.25, rng);
        if (g.num_edges() < 2)
            continue;
        ChainState state(std::move(g));
        const auto before = slotwise(state.graph().edges);
        const auto m = state.num_edges();
        SwitchDescriptor s;
        s.i = uniform_index(rng, m);
        do {
            s.j = uniform_index(rng, m);
        } while (s.j == s.i);
        s.g = random_bit(rng);
        const auto out = state.apply_switch(s);
        if (out == SwitchOutcome::Accepted) {
            ++accepted;
            REQUIRE(state.apply_switch({s.i, s.j, false}) == SwitchOutcome::Accepted);
        }
        CHECK(slotwise(state.graph().edges) == before);
    }
    CHECK(accepted > 1000); // the property must actually get exercised
}

TEST_CASE("es superstep accounting") {
    CHECK(es_superstep_switches(2) == 1);
    CHECK(es_superstep_switches(7) == 4);
    CHECK(es_superstep_switches(100) == 50);

    RandomStream rng(13);
    auto g = gen_gnp(20, 0.3, rng);
    const auto m = g.num_edges();
    const auto d = degree_sequence_of(g);
    ChainState state(std::move(g));
    RandomEsSource source{RandomStream(99)};
    const auto records = run_es_supersteps(state, 5, source);
    REQUIRE(records.size() == 5);
    const auto& c = state.counters();
    CHECK(c.supersteps == 5);
    CHECK(c.accepted + c.rejected_loop + c.rejected_existing == 5 * es_superstep_switches(m));
    CHECK(simple_with_degrees(state.graph(), d));
}

TEST_CASE("global switch frozen examples") {
    SUBCASE("ell = 0 is a pure shuffle") {
        RandomStream rng(3);
        auto g = gen_gnp(10, 0.5, rng);
        const auto before = canonical_multiset(g);
        ChainState state(std::move(g));
        auto gs = make_random_global(rng, state.num_edges());
        gs.ell = 0;
        gs.dirs.clear();
        apply_global_switch(state, gs);
        CHECK(canonical_multiset(state.graph()) == before);
    }
    SUBCASE("m=2 identity permutation, ell=1, g=1") {
        ChainState state(path4());
        GlobalSwitch gs;
        gs.perm = {0, 1};
        gs.ell = 1;
        gs.dirs = {1};
        apply_global_switch(state, gs);
        CHECK(canonical_multiset(state.graph()) ==
              std::vector<payload_t>{to_payload(Edge{0, 3}), to_payload(Edge{1, 2})});
    }
}

TEST_CASE("run_global_es preserves degrees and simplicity") {
    RandomStream rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = gen_gnp(30, 0.2, rng);
        const auto d = degree_sequence_of(g);
        ChainState state(std::move(g));
        RandomGlobalSource source(RandomStream(1000 + trial), 0.01);
        const auto records = run_global_es(state, 10, source);
        CHECK(records.size() == 10);
        CHECK(state.counters().supersteps == 10);
        CHECK(simple_with_degrees(state.graph(), d));
    }
}

TEST_CASE("inverse global switch round-trips") {
    RandomStream rng(424242);
    for (int trial = 0; trial < 1000; ++trial) {
        const node_t n = 5 + node_t(uniform_index(rng, 40));
        auto g = gen_gnp(n, 0.3, rng);
        if (g.num_edges() < 2)
            continue;
        const auto original = canonical_multiset(g);
        ChainState state(std::move(g));
        const auto gs = make_random_global(rng, state.num_edges());
        std::vector<SwitchOutcome> outcomes;
        apply_global_switch(state, gs, &outcomes);
        const auto inverse = inverse_global_switch(gs, outcomes);
        std::vector<SwitchOutcome> inv_outcomes;
        apply_global_switch(state, inverse, &inv_outcomes);
        REQUIRE(canonical_multiset(state.graph()) == original);
        // The inverse re-runs rejected switches; they must reject again.
        for (std::uint64_t k = 0; k < gs.ell; ++k) {
            const auto fwd = outcomes[gs.ell - 1 - k];
            if (fwd != SwitchOutcome::Accepted)
                CHECK(inv_outcomes[k] != SwitchOutcome::Accepted);
            else
                CHECK(inv_outcomes[k] == SwitchOutcome::Accepted);
        }
    }
}

TEST_CASE("rejected switches leave array and set bit-identical") {
    RandomStream rng(909);
    auto g = gen_gnp(12, 0.8, rng); // dense: many rejections
    ChainState state(std::move(g));
    const auto m = state.num_edges();
    int rejected = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const auto before = state.graph().edges;
        SwitchDescriptor s;
        s.i = uniform_index(rng, m);
        do {
            s.j = uniform_index(rng, m);
        } while (s.j == s.i);
        s.g = random_bit(rng);
        if (state.apply_switch(s) != SwitchOutcome::Accepted) {
            ++rejected;
            CHECK(state.graph().edges == before);
        }
    }
    CHECK(rejected > 500);
}
