#pragma once

#include <es/chain_sequential.hpp>
#include <es/graph.hpp>
#include <es/random.hpp>
#include <es/switch_source.hpp>

#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace es {

// Thinning values k, in units of supersteps.
using ThinningSchedule = std::vector<std::uint32_t>;

inline ThinningSchedule default_schedule() { return {1, 2, 3, 4, 6, 8, 12, 16, 24, 32}; }

struct TransitionCounts {
    std::uint64_t n00 = 0, n01 = 0, n10 = 0, n11 = 0;

    std::uint64_t total() const { return n00 + n01 + n10 + n11; }
};

// G² = 2 Σ n_ab ln(n_ab / E_ab), E_ab = row_a·col_b/N; zero cells contribute 0.
inline double g2_statistic(const TransitionCounts& c) {
    const double N = static_cast<double>(c.total());
    if (N < 1)
        throw std::invalid_argument("g2_statistic: no transitions");
    const double row[2] = {double(c.n00 + c.n01), double(c.n10 + c.n11)};
    const double col[2] = {double(c.n00 + c.n10), double(c.n01 + c.n11)};
    const double n[2][2] = {{double(c.n00), double(c.n01)}, {double(c.n10), double(c.n11)}};
    double g2 = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            if (n[a][b] > 0)
                g2 += n[a][b] * std::log(n[a][b] * N / (row[a] * col[b]));
    return std::max(0.0, 2.0 * g2);
}

enum class MixVerdict { Independent, NonIndependent, InsufficientData };

constexpr std::uint64_t kMinTransitions = 8;

// BIC model selection between the independence model (1 parameter) and the
// first-order binary Markov model (2 parameters): Markov wins iff G² > ln N.
inline MixVerdict classify(const TransitionCounts& c) {
    const auto N = c.total();
    if (N < kMinTransitions)
        return MixVerdict::InsufficientData;
    return g2_statistic(c) <= std::log(double(N)) ? MixVerdict::Independent
                                                  : MixVerdict::NonIndependent;
}

// Streaming per-(edge, k) counter: feeds the k-thinned existence series into
// 2×2 transition counts without storing the series.
struct ThinCounter {
    TransitionCounts counts;
    std::uint64_t observations = 0;
    std::uint8_t last = 0;

    void observe(bool bit) {
        if (observations > 0) {
            if (last == 0)
                bit ? ++counts.n01 : ++counts.n00;
            else
                bit ? ++counts.n11 : ++counts.n10;
        }
        last = bit ? 1 : 0;
        ++observations;
    }
};

class EdgeTimeSeriesCounters {
public:
    EdgeTimeSeriesCounters(std::span<const Edge> tracked, ThinningSchedule schedule)
        : schedule_(std::move(schedule)), payloads_(tracked.size()),
          counters_(tracked.size() * schedule_.size()) {
        for (std::size_t i = 0; i < tracked.size(); ++i)
            payloads_[i] = to_payload(tracked[i]);
    }

    const ThinningSchedule& schedule() const { return schedule_; }
    std::size_t num_edges() const { return payloads_.size(); }

    // Call once after each superstep t = 1, 2, ...; the k-thinned series
    // retains the states after supersteps k, 2k, 3k, ...
    void observe_superstep(std::uint64_t t, const SequentialEdgeSet& edges) {
        for (std::size_t ki = 0; ki < schedule_.size(); ++ki) {
            if (t % schedule_[ki] != 0)
                continue;
            for (std::size_t e = 0; e < payloads_.size(); ++e)
                cell(e, ki).observe(edges.contains(payloads_[e]));
        }
    }

    const ThinCounter& counter(std::size_t edge_idx, std::size_t k_idx) const {
        return counters_[edge_idx * schedule_.size() + k_idx];
    }

private:
    ThinningSchedule schedule_;
    std::vector<std::uint64_t> payloads_;
    std::vector<ThinCounter> counters_;

    ThinCounter& cell(std::size_t e, std::size_t ki) { return counters_[e * schedule_.size() + ki]; }
};

enum class MixAlgo { Es, GlobalEs };

// Runs the selected sequential chain for K supersteps from g0, folding the
// tracked edges' existence series into streaming counters.
inline EdgeTimeSeriesCounters track_run(const EdgeList& g0, MixAlgo algo, std::uint64_t supersteps,
                                        const ThinningSchedule& schedule,
                                        std::span<const Edge> tracked, std::uint64_t seed,
                                        double p_lazy = 0.01) {
    EdgeTimeSeriesCounters counters(tracked, schedule);
    ChainState state(g0);
    if (algo == MixAlgo::Es) {
        RandomEsSource source{RandomStream(seed)};
        for (std::uint64_t t = 1; t <= supersteps; ++t) {
            run_es_supersteps(state, 1, source);
            counters.observe_superstep(t, state.edge_set());
        }
    } else {
        RandomGlobalSource source(RandomStream(seed), p_lazy);
        for (std::uint64_t t = 1; t <= supersteps; ++t) {
            run_global_es(state, 1, source);
            counters.observe_superstep(t, state.edge_set());
        }
    }
    return counters;
}

struct FractionResult {
    double fraction = 0.0; // non-independent share of edges with enough data
    std::size_t tracked = 0;
    std::size_t insufficient = 0;
};

inline FractionResult non_independent_fraction(const EdgeTimeSeriesCounters& c,
                                               std::size_t k_idx) {
    FractionResult r;
    r.tracked = c.num_edges();
    std::size_t non_indep = 0, usable = 0;
    for (std::size_t e = 0; e < c.num_edges(); ++e) {
        switch (classify(c.counter(e, k_idx).counts)) {
        case MixVerdict::InsufficientData: ++r.insufficient; break;
        case MixVerdict::NonIndependent: ++non_indep; ++usable; break;
        case MixVerdict::Independent: ++usable; break;
        }
    }
    r.fraction = usable > 0 ? double(non_indep) / double(usable) : 0.0;
    return r;
}

struct MixingReport {
    ThinningSchedule schedule;
    std::vector<double> mean_fraction;
    std::vector<double> stddev;
    std::vector<std::size_t> insufficient; // summed over runs
    std::size_t runs = 0;
    std::size_t edges_tracked = 0;
};

namespace detail {

inline void fold_fractions(MixingReport& report, const std::vector<std::vector<double>>& samples) {
    const auto K = report.schedule.size();
    report.mean_fraction.assign(K, 0.0);
    report.stddev.assign(K, 0.0);
    for (std::size_t ki = 0; ki < K; ++ki) {
        double mean = 0.0;
        for (const auto& run : samples)
            mean += run[ki];
        mean /= samples.size();
        double var = 0.0;
        for (const auto& run : samples)
            var += (run[ki] - mean) * (run[ki] - mean);
        report.mean_fraction[ki] = mean;
        report.stddev[ki] = samples.size() > 1 ? std::sqrt(var / (samples.size() - 1)) : 0.0;
    }
}

} // namespace detail

// Repeated tracked runs of one algorithm; the tracked set defaults to g0's
// own edges (the paper's choice for bounding memory).
inline MixingReport analyze_mixing(const EdgeList& g0, MixAlgo algo, std::uint64_t supersteps,
                                   const ThinningSchedule& schedule, std::size_t runs,
                                   std::uint64_t seed, double p_lazy = 0.01) {
    MixingReport report;
    report.schedule = schedule;
    report.runs = runs;
    report.edges_tracked = g0.edges.size();
    report.insufficient.assign(schedule.size(), 0);
    std::vector<std::vector<double>> samples;
    for (std::size_t r = 0; r < runs; ++r) {
        const auto run_seed = mix64(seed + 0x9e3779b97f4a7c15ull * (r + 1));
        auto counters = track_run(g0, algo, supersteps, schedule, g0.edges, run_seed, p_lazy);
        auto& fracs = samples.emplace_back(schedule.size());
        for (std::size_t ki = 0; ki < schedule.size(); ++ki) {
            const auto fr = non_independent_fraction(counters, ki);
            fracs[ki] = fr.fraction;
            report.insufficient[ki] += fr.insufficient;
        }
    }
    if (!samples.empty())
        detail::fold_fractions(report, samples);
    else {
        report.mean_fraction.assign(schedule.size(), 0.0);
        report.stddev.assign(schedule.size(), 0.0);
    }
    return report;
}

struct ChainComparison {
    MixingReport es;
    MixingReport global_es;
};

// Paired ES-MC / G-ES-MC runs from the same initial graph with matched
// superstep counts (one ES superstep = ⌈m/2⌉ switch attempts).
inline ChainComparison compare_chains(const EdgeList& g0, std::uint64_t supersteps,
                                      const ThinningSchedule& schedule, std::size_t runs,
                                      std::uint64_t seed, double p_lazy = 0.01) {
    ChainComparison cmp;
    cmp.es = analyze_mixing(g0, MixAlgo::Es, supersteps, schedule, runs, seed, p_lazy);
    cmp.global_es = analyze_mixing(g0, MixAlgo::GlobalEs, supersteps, schedule, runs,
                                   mix64(seed ^ 0xd1b54a32d192ed03ull), p_lazy);
    return cmp;
}

inline void write_mixing_csv(std::ostream& out, const MixingReport& report) {
    out << "k,mean_fraction_non_independent,stddev,runs,edges_tracked,edges_insufficient\n";
    for (std::size_t ki = 0; ki < report.schedule.size(); ++ki)
        out << report.schedule[ki] << ',' << report.mean_fraction[ki] << ',' << report.stddev[ki]
            << ',' << report.runs << ',' << report.edges_tracked << ','
            << report.insufficient[ki] << '\n';
}

} // namespace es
