#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <es/stats.hpp>
#include <es/verify.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <vector>

using namespace es;

namespace {

// All non-increasing degree sequences of length n with entries <= max_deg.
void all_sequences(std::size_t n, node_t max_deg, DegreeSequence& cur,
                   std::vector<DegreeSequence>& out) {
    if (cur.size() == n) {
        out.push_back(cur);
        return;
    }
    const node_t hi = cur.empty() ? max_deg : cur.back();
    for (node_t d = 0; d <= hi; ++d) {
        cur.push_back(d);
        all_sequences(n, max_deg, cur, out);
        cur.pop_back();
    }
}

} // namespace

TEST_CASE("enumerate_graphs frozen counts") {
    CHECK(enumerate_graphs({2, 2, 2}).size() == 1);
    CHECK(enumerate_graphs({1, 1, 1, 1}).size() == 3);
    CHECK(enumerate_graphs({2, 2, 2, 2, 2}).size() == 12);
    CHECK(enumerate_graphs({3, 1}).empty());
    CHECK_THROWS_AS(enumerate_graphs(DegreeSequence(9, 2)), TooLarge);
}

TEST_CASE("exact transition counts: triangle self-loop") {
    const auto tri = havel_hakimi({2, 2, 2});
    const auto counts = exact_es_transition_counts(tri);
    REQUIRE(counts.size() == 1);
    CHECK(counts.begin()->first == graph_key(tri));
    CHECK(counts.begin()->second == 12); // 3*2 ordered pairs * 2 directions
}

TEST_CASE("exact transition counts: perfect matching neighbors") {
    const auto space = enumerate_graphs({1, 1, 1, 1});
    REQUIRE(space.size() == 3);
    const auto g = graph_from_key(space[0], 4);
    const auto counts = exact_es_transition_counts(g);
    std::uint64_t total = 0;
    std::vector<std::uint64_t> outgoing;
    for (const auto& [key, c] : counts) {
        total += c;
        if (key != space[0])
            outgoing.push_back(c);
    }
    CHECK(total == 4); // 2*m*(m-1) ordered descriptors with m = 2
    REQUIRE(outgoing.size() == 2);
    CHECK(outgoing[0] == outgoing[1]);
    CHECK(outgoing[0] > 0);
}

TEST_CASE("transition symmetry and irreducibility, n <= 5") {
    std::vector<DegreeSequence> seqs;
    DegreeSequence cur;
    for (std::size_t n = 2; n <= 5; ++n) {
        seqs.clear();
        all_sequences(n, node_t(std::min<std::size_t>(4, n - 1)), cur, seqs);
        for (const auto& d : seqs) {
            const auto space = enumerate_graphs(d);
            if (space.empty())
                continue;
            std::map<GraphKey, std::map<GraphKey, std::uint64_t>> all_counts;
            for (const auto& key : space)
                all_counts[key] =
                    exact_es_transition_counts(graph_from_key(key, node_t(d.size())));
            // Symmetry: counts(A->B) == counts(B->A).
            for (const auto& a : space)
                for (const auto& b : space) {
                    const auto it_ab = all_counts[a].find(b);
                    const auto it_ba = all_counts[b].find(a);
                    const std::uint64_t ab = it_ab == all_counts[a].end() ? 0 : it_ab->second;
                    const std::uint64_t ba = it_ba == all_counts[b].end() ? 0 : it_ba->second;
                    CHECK(ab == ba);
                }
            // Irreducibility: the transition graph is strongly connected
            // (with symmetric counts, reachability from one state suffices).
            std::set<GraphKey> seen;
            std::queue<GraphKey> frontier;
            frontier.push(space.front());
            seen.insert(space.front());
            while (!frontier.empty()) {
                const auto key = frontier.front();
                frontier.pop();
                for (const auto& [next, c] : all_counts[key]) {
                    if (c > 0 && seen.insert(next).second)
                        frontier.push(next);
                }
            }
            CHECK_MESSAGE(seen.size() == space.size(), "degree sequence size n=", d.size());
        }
    }
}

TEST_CASE("chi-square machinery") {
    // CDF/quantile consistency.
    for (const double df : {1.0, 5.0, 11.0}) {
        for (const double p : {0.1, 0.5, 0.95, 0.999}) {
            const double q = chi_square_quantile(p, df);
            CHECK(chi_square_cdf(q, df) == doctest::Approx(p).epsilon(1e-9));
        }
    }
    // Known value: chi^2_{0.999}(11) ~ 31.264.
    CHECK(chi_square_quantile(0.999, 11.0) == doctest::Approx(31.2641).epsilon(1e-4));
}

TEST_CASE("chi_square_uniformity frozen examples") {
    SUBCASE("perfectly uniform counts") {
        Histogram h;
        h.counts.assign(12, 100);
        h.total = 1200;
        const auto r = chi_square_uniformity(h, 12);
        CHECK(r.statistic == doctest::Approx(0.0));
        CHECK(r.dof == 11);
        CHECK(r.pass);
    }
    SUBCASE("all mass on one state") {
        Histogram h;
        h.counts.assign(12, 0);
        h.counts[0] = 1200;
        h.total = 1200;
        const auto r = chi_square_uniformity(h, 12);
        const double expected = 11.0 * 100.0 + (1200.0 - 100.0) * (1200.0 - 100.0) / 100.0;
        CHECK(r.statistic == doctest::Approx(expected));
        CHECK(!r.pass);
    }
}

TEST_CASE("chi_square_uniformity calibration on true uniform draws") {
    RandomStream rng(161803);
    const std::size_t states = 12;
    const std::uint64_t draws = 600;
    int passes = 0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
        Histogram h;
        h.counts.assign(states, 0);
        for (std::uint64_t i = 0; i < draws; ++i)
            ++h.counts[uniform_index(rng, states)];
        h.total = draws;
        passes += chi_square_uniformity(h, states).pass ? 1 : 0;
    }
    CHECK(passes >= 990); // alpha = 0.001 -> expected ~999/1000
}

TEST_CASE("sample_distribution basics") {
    SUBCASE("zero samples") {
        const auto h = sample_distribution(SampleAlgo::Es, {1, 1, 1, 1}, 5, 0, 1);
        CHECK(h.total == 0);
    }
    SUBCASE("single-state space stays concentrated") {
        const auto h = sample_distribution(SampleAlgo::GlobalEs, {2, 2, 2}, 5, 50, 2);
        REQUIRE(h.counts.size() == 1);
        CHECK(h.counts[0] == 50);
    }
    SUBCASE("matching space gets hit everywhere") {
        const auto h = sample_distribution(SampleAlgo::Es, {1, 1, 1, 1}, 10, 600, 3);
        REQUIRE(h.counts.size() == 3);
        for (const auto c : h.counts)
            CHECK(c > 100);
    }
    SUBCASE("steady-global-es histogram is identical across thread counts") {
        const auto h1 =
            sample_distribution(SampleAlgo::SteadyGlobalEs, {2, 2, 2, 2, 2}, 8, 400, 5, 1);
        const auto h4 =
            sample_distribution(SampleAlgo::SteadyGlobalEs, {2, 2, 2, 2, 2}, 8, 400, 5, 4);
        CHECK(h1.counts == h4.counts);
    }
}
