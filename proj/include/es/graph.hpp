#pragma once

#include <es/edge.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

namespace es {

using DegreeSequence = std::vector<node_t>;

struct NotGraphical : std::runtime_error {
    NotGraphical() : std::runtime_error("degree sequence is not graphical") {}
};

// Indexed edge list; the chains address edges by their array position.
struct EdgeList {
    std::vector<Edge> edges;
    node_t num_nodes = 0;

    std::size_t num_edges() const { return edges.size(); }
};

inline DegreeSequence degree_sequence_of(const EdgeList& g) {
    DegreeSequence degrees(g.num_nodes, 0);
    for (const auto e : g.edges) {
        ++degrees[e.u];
        ++degrees[e.v];
    }
    return degrees;
}

// Erdős–Gallai test on the descending sort of d.
inline bool is_graphical(const DegreeSequence& d) {
    const std::size_t n = d.size();
    std::vector<std::uint64_t> s(d.begin(), d.end());
    std::sort(s.begin(), s.end(), std::greater<>());

    if (!s.empty() && s.front() >= n)
        return false;

    std::uint64_t total = std::accumulate(s.begin(), s.end(), std::uint64_t(0));
    if (total % 2 != 0)
        return false;

    // prefix[k] = d_1 + ... + d_k (1-based)
    std::vector<std::uint64_t> prefix(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + s[i];

    for (std::size_t k = 1; k <= n; ++k) {
        // first index j > k with s[j-1] < k (degrees are sorted descending)
        auto it = std::upper_bound(s.begin() + k, s.end(), k, [](std::uint64_t x, std::uint64_t y) { return x > y; });
        const std::size_t cut = it - s.begin();
        std::uint64_t rhs = std::uint64_t(k) * (k - 1);
        rhs += std::uint64_t(k) * (cut - k);
        rhs += total - prefix[cut];
        if (prefix[k] > rhs)
            return false;
    }
    return true;
}

// Deterministic Havel-Hakimi: repeatedly satisfy the node of highest residual
// degree, ties broken by lowest node id; connect it to the next-highest
// residual degrees, again lowest id first.
inline EdgeList havel_hakimi(const DegreeSequence& d) {
    const std::size_t n = d.size();
    EdgeList g;
    g.num_nodes = static_cast<node_t>(n);

    using Entry = std::pair<node_t, node_t>; // (residual degree, id)
    auto cmp = [](Entry a, Entry b) {
        if (a.first != b.first) return a.first < b.first; // max-heap on degree
        return a.second > b.second;                       // then min id
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] >= n)
            throw NotGraphical();
        if (d[i] > 0)
            heap.emplace(d[i], static_cast<node_t>(i));
        total += d[i];
    }
    g.edges.reserve(total / 2);

    std::vector<Entry> taken;
    while (!heap.empty()) {
        auto [deg, v] = heap.top();
        heap.pop();
        if (deg == 0)
            break;
        if (heap.size() < deg)
            throw NotGraphical();
        taken.clear();
        for (node_t k = 0; k < deg; ++k) {
            auto [dw, w] = heap.top();
            heap.pop();
            if (dw == 0)
                throw NotGraphical();
            g.edges.push_back({std::min(v, w), std::max(v, w)});
            if (dw > 1)
                taken.emplace_back(dw - 1, w);
        }
        for (auto e : taken)
            heap.push(e);
    }
    return g;
}

} // namespace es
