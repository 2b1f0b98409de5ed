#pragma once

#include <es/graph.hpp>
#include <es/random.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace es {

struct RetriesExhausted : std::runtime_error {
    RetriesExhausted() : std::runtime_error("no graphical degree sequence found within retry limit") {}
};

// G(n, p): every one of the C(n,2) node pairs independently with probability
// p, visited with geometric skips so the cost is O(n + m).
inline EdgeList gen_gnp(node_t n, double p, RandomStream& rng) {
    assert(p >= 0.0 && p <= 1.0);
    if (n > kMaxNode + 1)
        throw std::invalid_argument("node count exceeds 2^28");

    EdgeList g;
    g.num_nodes = n;
    if (n < 2 || p <= 0.0)
        return g;

    if (p >= 1.0) {
        g.edges.reserve(std::size_t(n) * (n - 1) / 2);
        for (node_t u = 0; u < n; ++u)
            for (node_t v = u + 1; v < n; ++v)
                g.edges.push_back({u, v});
        return g;
    }

    const double log1mp = std::log1p(-p);
    node_t u = 0, v = 0; // v == u means "before first pair of row u"
    for (;;) {
        // geometric(p) skip; u = uniform in (0,1]
        const double r = std::ldexp(double(rng.next() >> 11) + 1.0, -53);
        auto skip = static_cast<std::uint64_t>(std::floor(std::log(r) / log1mp));
        for (;;) {
            const std::uint64_t row_left = n - 1 - v;
            if (skip < row_left) {
                v += static_cast<node_t>(skip) + 1;
                break;
            }
            skip -= row_left;
            ++u;
            if (u >= n - 1)
                return g;
            v = u;
        }
        g.edges.push_back({u, v});
    }
}

// n i.i.d. draws with P[X=k] proportional to k^-gamma on [1..Delta],
// Delta = floor(n^(1/(gamma-1))), via inverse CDF on the precomputed
// normalized sums. The degree sum is fixed to even parity by bumping a
// uniformly random node below Delta; non-graphical samples are redrawn.
inline DegreeSequence sample_pld_degrees(node_t n, double gamma, RandomStream& rng,
                                         unsigned retry_limit = 100) {
    assert(gamma > 1.0 && n >= 1);
    const auto delta = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::floor(std::pow(double(n), 1.0 / (gamma - 1.0)))));

    std::vector<double> cdf(delta);
    double acc = 0.0;
    for (std::uint64_t k = 1; k <= delta; ++k) {
        acc += std::pow(double(k), -gamma);
        cdf[k - 1] = acc;
    }
    for (auto& x : cdf)
        x /= acc;
    cdf.back() = 1.0;

    for (unsigned attempt = 0; attempt < retry_limit; ++attempt) {
        DegreeSequence d(n);
        std::uint64_t sum = 0;
        for (node_t i = 0; i < n; ++i) {
            const double u = std::ldexp(double(rng.next() >> 11), -53);
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            d[i] = static_cast<node_t>(it - cdf.begin() + 1);
            sum += d[i];
        }
        if (sum % 2 != 0) {
            for (unsigned tries = 0; tries < 64 * std::uint64_t(n); ++tries) {
                const auto i = uniform_index(rng, n);
                if (d[i] < delta) {
                    ++d[i];
                    ++sum;
                    break;
                }
            }
            if (sum % 2 != 0)
                continue; // all nodes at Delta; redraw
        }
        if (is_graphical(d))
            return d;
    }
    throw RetriesExhausted();
}

} // namespace es
