#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <es/generators.hpp>
#include <es/mixing.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

using namespace es;

namespace {

// Post-hoc oracle: transition counts of the k-thinned series of a stored
// binary series (entries are the states after supersteps 1..K).
TransitionCounts thin_posthoc(const std::vector<std::uint8_t>& series, std::uint32_t k) {
    TransitionCounts c;
    std::vector<std::uint8_t> thinned;
    for (std::size_t t = k; t <= series.size(); t += k)
        thinned.push_back(series[t - 1]);
    for (std::size_t i = 1; i < thinned.size(); ++i) {
        if (thinned[i - 1] == 0)
            thinned[i] ? ++c.n01 : ++c.n00;
        else
            thinned[i] ? ++c.n11 : ++c.n10;
    }
    return c;
}

ThinCounter stream_series(const std::vector<std::uint8_t>& series, std::uint32_t k) {
    ThinCounter tc;
    for (std::size_t t = 1; t <= series.size(); ++t)
        if (t % k == 0)
            tc.observe(series[t - 1] != 0);
    return tc;
}

} // namespace

TEST_CASE("g2 frozen examples") {
    CHECK(g2_statistic({100, 0, 0, 0}) == 0.0); // constant-0 series
    CHECK(g2_statistic({0, 0, 0, 100}) == 0.0); // constant-1 series
    CHECK(g2_statistic({25, 25, 25, 25}) == doctest::Approx(0.0)); // independence

    // Alternating series of length 100: counts (0, 50, 49, 0), N = 99.
    const TransitionCounts alt{0, 50, 49, 0};
    long double expected = 0.0L;
    const long double N = 99.0L, r0 = 50.0L, r1 = 49.0L, c0 = 49.0L, c1 = 50.0L;
    expected += 50.0L * std::log((50.0L * N) / (r0 * c1));
    expected += 49.0L * std::log((49.0L * N) / (r1 * c0));
    expected *= 2.0L;
    CHECK(g2_statistic(alt) == doctest::Approx(double(expected)).epsilon(1e-12));
    CHECK(g2_statistic(alt) > std::log(99.0));
}

TEST_CASE("g2 is invariant under relabeling 0 and 1") {
    RandomStream rng(88);
    for (int trial = 0; trial < 200; ++trial) {
        TransitionCounts c{uniform_index(rng, 50) + 1, uniform_index(rng, 50) + 1,
                           uniform_index(rng, 50) + 1, uniform_index(rng, 50) + 1};
        const TransitionCounts flipped{c.n11, c.n10, c.n01, c.n00};
        CHECK(g2_statistic(c) == doctest::Approx(g2_statistic(flipped)).epsilon(1e-12));
    }
}

TEST_CASE("BIC classification") {
    CHECK(classify({100, 0, 0, 0}) == MixVerdict::Independent);
    CHECK(classify({0, 50, 49, 0}) == MixVerdict::NonIndependent);
    CHECK(classify({25, 25, 25, 25}) == MixVerdict::Independent);
    CHECK(classify({3, 2, 1, 1}) == MixVerdict::InsufficientData); // N = 7 < 8
}

TEST_CASE("streaming counters match post-hoc thinning") {
    RandomStream rng(1212);
    const auto schedule = default_schedule();
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::uint8_t> series(500);
        for (auto& b : series)
            b = random_bit(rng) ? 1 : 0;
        for (const auto k : schedule) {
            const auto streamed = stream_series(series, k);
            const auto oracle = thin_posthoc(series, k);
            CHECK(streamed.counts.n00 == oracle.n00);
            CHECK(streamed.counts.n01 == oracle.n01);
            CHECK(streamed.counts.n10 == oracle.n10);
            CHECK(streamed.counts.n11 == oracle.n11);
            // Conservation: sum of counts = observations - 1.
            CHECK(streamed.counts.total() + 1 == streamed.observations);
        }
    }
}

TEST_CASE("stub series frozen examples") {
    const std::uint32_t K = 100;
    SUBCASE("frozen chain, edge present") {
        std::vector<std::uint8_t> series(K, 1);
        for (const auto k : default_schedule()) {
            const auto tc = stream_series(series, k);
            CHECK(tc.counts.n11 == K / k - 1);
            CHECK(tc.counts.n00 + tc.counts.n01 + tc.counts.n10 == 0);
        }
    }
    SUBCASE("alternating chain at k=1") {
        for (int first = 0; first < 2; ++first) {
            std::vector<std::uint8_t> series(K);
            for (std::uint32_t t = 0; t < K; ++t)
                series[t] = std::uint8_t((t + first) % 2);
            const auto tc = stream_series(series, 1);
            CHECK(tc.counts.n00 == 0);
            CHECK(tc.counts.n11 == 0);
            const auto n01 = tc.counts.n01, n10 = tc.counts.n10;
            CHECK(n01 + n10 == K - 1);
            CHECK((n01 == 50 || n01 == 49));
            CHECK((n10 == 50 || n10 == 49));
        }
    }
}

TEST_CASE("track_run: zero supersteps give zero counters") {
    RandomStream rng(4);
    const auto g = gen_gnp(12, 0.4, rng);
    const auto counters =
        track_run(g, MixAlgo::Es, 0, default_schedule(), g.edges, 123);
    for (std::size_t e = 0; e < counters.num_edges(); ++e)
        for (std::size_t ki = 0; ki < counters.schedule().size(); ++ki) {
            CHECK(counters.counter(e, ki).counts.total() == 0);
            CHECK(counters.counter(e, ki).observations == 0);
        }
}

TEST_CASE("track_run conservation on real chains") {
    RandomStream rng(41);
    const auto g = gen_gnp(20, 0.3, rng);
    const std::uint64_t K = 64;
    for (const auto algo : {MixAlgo::Es, MixAlgo::GlobalEs}) {
        const auto counters = track_run(g, algo, K, default_schedule(), g.edges, 99);
        for (std::size_t e = 0; e < counters.num_edges(); ++e)
            for (std::size_t ki = 0; ki < counters.schedule().size(); ++ki) {
                const auto& tc = counters.counter(e, ki);
                CHECK(tc.observations == K / counters.schedule()[ki]);
                if (tc.observations > 0)
                    CHECK(tc.counts.total() + 1 == tc.observations);
            }
    }
}

TEST_CASE("analyze_mixing report and CSV shape") {
    RandomStream rng(51);
    const auto g = gen_gnp(24, 0.3, rng);
    const ThinningSchedule schedule = {1, 2, 4};
    const auto report = analyze_mixing(g, MixAlgo::GlobalEs, 40, schedule, 3, 7);
    REQUIRE(report.mean_fraction.size() == schedule.size());
    REQUIRE(report.stddev.size() == schedule.size());
    CHECK(report.runs == 3);
    CHECK(report.edges_tracked == g.num_edges());
    for (std::size_t ki = 0; ki < schedule.size(); ++ki) {
        CHECK(report.mean_fraction[ki] >= 0.0);
        CHECK(report.mean_fraction[ki] <= 1.0);
        CHECK(report.stddev[ki] >= 0.0);
    }
    std::ostringstream csv;
    write_mixing_csv(csv, report);
    const auto text = csv.str();
    CHECK(text.find("k,mean_fraction_non_independent,stddev,runs,edges_tracked,"
                    "edges_insufficient") == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + std::ptrdiff_t(schedule.size()));
}

TEST_CASE("constant chains are fully independent at every k") {
    // A graph where no switch is ever accepted (triangle): the existence
    // series of each edge is constant, so the non-independent fraction is 0.
    const auto g = havel_hakimi({2, 2, 2});
    const ThinningSchedule schedule = {1, 2, 4};
    const auto counters = track_run(g, MixAlgo::Es, 200, schedule, g.edges, 5);
    for (std::size_t ki = 0; ki < schedule.size(); ++ki) {
        const auto fr = non_independent_fraction(counters, ki);
        CHECK(fr.fraction == 0.0);
        CHECK(fr.insufficient == 0);
    }
}
