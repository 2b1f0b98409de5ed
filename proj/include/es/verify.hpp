#pragma once

#include <es/chain_sequential.hpp>
#include <es/eager_es.hpp>
#include <es/graph.hpp>
#include <es/stats.hpp>
#include <es/steady_global_es.hpp>
#include <es/switch_source.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace es {

struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Canonical representative of a labeled simple graph: the sorted list of
// canonical edge payloads. No isomorphism reduction — uniformity in Thm. 1
// is over labeled graphs.
using GraphKey = std::vector<std::uint64_t>;

inline GraphKey graph_key(const EdgeList& g) {
    GraphKey key;
    key.reserve(g.edges.size());
    for (const Edge e : g.edges)
        key.push_back(to_payload(e));
    std::sort(key.begin(), key.end());
    return key;
}

// All labeled simple graphs realizing d, by filtering all 2^C(n,2) subsets.
inline std::vector<GraphKey> enumerate_graphs(const DegreeSequence& d) {
    const std::size_t n = d.size();
    const std::size_t pairs = n * (n - 1) / 2;
    if (n > 8 || pairs > 28)
        throw TooLarge("enumerate_graphs: degree sequence too large");

    std::vector<Edge> all_pairs;
    all_pairs.reserve(pairs);
    for (node_t u = 0; u < n; ++u)
        for (node_t v = u + 1; v < n; ++v)
            all_pairs.push_back(Edge{u, v});

    std::vector<GraphKey> space;
    std::vector<node_t> degs(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
        std::fill(degs.begin(), degs.end(), 0);
        for (std::size_t b = 0; b < pairs; ++b) {
            if (mask >> b & 1) {
                ++degs[all_pairs[b].u];
                ++degs[all_pairs[b].v];
            }
        }
        if (!std::equal(degs.begin(), degs.end(), d.begin(), d.end()))
            continue;
        GraphKey key;
        for (std::size_t b = 0; b < pairs; ++b)
            if (mask >> b & 1)
                key.push_back(to_payload(all_pairs[b]));
        space.push_back(std::move(key));
    }
    std::sort(space.begin(), space.end());
    return space;
}

inline EdgeList graph_from_key(const GraphKey& key, node_t num_nodes) {
    EdgeList g;
    g.num_nodes = num_nodes;
    g.edges.reserve(key.size());
    for (const auto p : key)
        g.edges.push_back(from_payload(p));
    return g;
}

// Exact ES-MC transition counts from one state: every ordered descriptor
// (i, j, g) with i ≠ j, g ∈ {0,1} is applied once; rejected descriptors
// count toward the self-loop.
inline std::map<GraphKey, std::uint64_t> exact_es_transition_counts(const EdgeList& graph) {
    std::map<GraphKey, std::uint64_t> counts;
    const auto m = graph.num_edges();
    for (std::uint64_t i = 0; i < m; ++i) {
        for (std::uint64_t j = 0; j < m; ++j) {
            if (i == j)
                continue;
            for (int g = 0; g < 2; ++g) {
                ChainState state(graph);
                state.apply_switch(SwitchDescriptor{i, j, g != 0});
                ++counts[graph_key(state.graph())];
            }
        }
    }
    return counts;
}

enum class SampleAlgo { Es, GlobalEs, EagerEs, SteadyGlobalEs };

inline SampleAlgo parse_sample_algo(const std::string& name) {
    if (name == "es")
        return SampleAlgo::Es;
    if (name == "global-es")
        return SampleAlgo::GlobalEs;
    if (name == "eager-es")
        return SampleAlgo::EagerEs;
    if (name == "steady-global-es")
        return SampleAlgo::SteadyGlobalEs;
    throw std::invalid_argument("unknown algorithm: " + name);
}

struct Histogram {
    std::vector<std::uint64_t> counts; // aligned with the StateSpace order
    std::uint64_t total = 0;
};

// N independent chain runs from the Havel-Hakimi realization of d, each for
// the given superstep count; histogram over enumerated states.
inline Histogram sample_distribution(SampleAlgo algo, const DegreeSequence& d,
                                     std::uint64_t supersteps, std::uint64_t num_samples,
                                     std::uint64_t seed, unsigned threads = 1,
                                     double p_lazy = 0.01) {
    const auto space = enumerate_graphs(d);
    const EdgeList start = havel_hakimi(d);
    const auto m = start.num_edges();

    Histogram hist;
    hist.counts.assign(space.size(), 0);

    EagerEs eager(threads);
    SteadyGlobalEs steady(threads);

    for (std::uint64_t s = 0; s < num_samples; ++s) {
        EdgeList g = start;
        auto stream = RandomStream::substream(seed, s);
        switch (algo) {
        case SampleAlgo::Es: {
            ChainState state(g);
            RandomEsSource source{std::move(stream)};
            run_es_supersteps(state, supersteps, source);
            g = state.graph();
            break;
        }
        case SampleAlgo::GlobalEs: {
            ChainState state(g);
            RandomGlobalSource source(std::move(stream), p_lazy);
            run_global_es(state, supersteps, source);
            g = state.graph();
            break;
        }
        case SampleAlgo::EagerEs: {
            // ES-MC superstep accounting: ⌈m/2⌉ attempts per superstep.
            eager.run(g, supersteps * es_superstep_switches(m), stream.next());
            break;
        }
        case SampleAlgo::SteadyGlobalEs: {
            steady.run(g, supersteps, p_lazy, stream.next());
            break;
        }
        }
        const auto key = graph_key(g);
        const auto it = std::lower_bound(space.begin(), space.end(), key);
        if (it == space.end() || *it != key)
            throw UnknownState("sample_distribution: sampled graph outside G(d)");
        ++hist.counts[std::size_t(it - space.begin())];
        ++hist.total;
    }
    return hist;
}

struct UniformityResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double critical_value = 0.0;
    bool pass = false;
};

// Pearson chi-square against the uniform distribution over the state space.
inline UniformityResult chi_square_uniformity(const Histogram& hist, std::size_t num_states,
                                              double alpha = 0.001) {
    if (hist.counts.size() != num_states)
        throw std::invalid_argument("chi_square_uniformity: histogram/space mismatch");
    UniformityResult r;
    r.dof = num_states - 1;
    const double expected = double(hist.total) / double(num_states);
    for (const auto c : hist.counts) {
        const double diff = double(c) - expected;
        r.statistic += diff * diff / expected;
    }
    r.critical_value = chi_square_quantile(1.0 - alpha, double(r.dof));
    r.pass = r.statistic < r.critical_value;
    return r;
}

} // namespace es
