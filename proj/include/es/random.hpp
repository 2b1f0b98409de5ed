#pragma once

#include <es/edge.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <thread>
#include <vector>

namespace es {

// Seedable 64-bit pseudo-random stream. Sub-streams derived from a master
// seed are independent for statistical purposes (seeds are mixed through
// splitmix64).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed), seed_(seed) {}

    std::uint64_t next() { return gen_(); }
    std::uint64_t seed() const { return seed_; }

    static RandomStream substream(std::uint64_t master, std::uint64_t index) {
        return RandomStream(mix64(master + 0x9e3779b97f4a7c15ull * (index + 1)));
    }

    RandomStream substream(std::uint64_t index) {
        return substream(next(), index);
    }

private:
    std::mt19937_64 gen_;
    std::uint64_t seed_;
};

// Unbiased integer in [0, bound) via Lemire's multiply-with-rejection.
inline std::uint64_t uniform_index(RandomStream& s, std::uint64_t bound) {
    assert(bound >= 1);
    std::uint64_t x = s.next();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (lo < threshold) {
            x = s.next();
            m = static_cast<__uint128_t>(x) * bound;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

inline bool random_bit(RandomStream& s) {
    return uniform_index(s, 2) != 0;
}

// Bernoulli(p) by comparing one 64-bit draw against p * 2^64. Exact for any
// p that is a multiple of 2^-64, which covers every double of interest here.
inline bool bernoulli(RandomStream& s, double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    const auto threshold = static_cast<std::uint64_t>(std::ldexp(p, 64));
    return s.next() < threshold;
}

// Plain sum of Bernoulli trials. The chains draw ell ~ Binom(m/2, .) once per
// global switch next to an O(m) shuffle, so the linear cost is immaterial.
inline std::uint64_t binomial(RandomStream& s, std::uint64_t trials, double p) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < trials; ++i)
        hits += bernoulli(s, p);
    return hits;
}

template <typename T>
void shuffle(std::span<T> a, RandomStream& s) {
    for (std::size_t i = a.size(); i > 1; --i) {
        const auto j = uniform_index(s, i);
        std::swap(a[i - 1], a[j]);
    }
}

namespace detail {

// Fixed decomposition of blocked randomized algorithms. Using constants
// (instead of the worker count) makes every result a pure function of the
// seed, so chains produce identical output for any thread count > 1.
constexpr std::size_t kBlockedChunks = 256;
constexpr std::size_t kBlockedBuckets = 256;

// Runs fn(chunk_id) for all chunks, on up to `threads` OS threads. The
// assignment of chunks to threads never influences results.
template <typename F>
void for_each_chunk(std::size_t chunks, unsigned threads, F&& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned t = std::min<std::size_t>({threads, hw, chunks});
    if (t <= 1) {
        for (std::size_t c = 0; c < chunks; ++c)
            fn(c);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (unsigned w = 0; w < t; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < chunks; c += t)
                fn(c);
        });
    }
    for (auto& th : pool)
        th.join();
}

inline std::pair<std::size_t, std::size_t> chunk_range(std::size_t n, std::size_t chunks, std::size_t c) {
    return {n * c / chunks, n * (c + 1) / chunks};
}

} // namespace detail

// Uniform permutation with a scatter-gather decomposition: every element is
// assigned an independent uniform bucket, elements are stably scattered into
// buckets, and each bucket is Fisher-Yates shuffled. Exactly uniform for any
// bucket count.
//
// decomposition == 1 runs plain Fisher-Yates on the caller's stream.
// decomposition > 1 selects the blocked algorithm; its output depends on the
// seed only (never on `exec_threads` or on the particular value > 1).
template <typename T>
void parallel_shuffle(std::span<T> a, RandomStream& s, unsigned decomposition,
                      unsigned exec_threads = 0) {
    if (decomposition <= 1) {
        shuffle(a, s);
        return;
    }
    if (exec_threads == 0) exec_threads = decomposition;

    const std::size_t n = a.size();
    const std::uint64_t base = s.next();
    if (n <= 1) return;

    using namespace detail;
    std::vector<std::uint8_t> labels(n);
    std::vector<std::size_t> counts(kBlockedChunks * kBlockedBuckets, 0);

    const unsigned t = n < 4096 ? 1 : exec_threads;

    for_each_chunk(kBlockedChunks, t, [&](std::size_t c) {
        auto stream = RandomStream::substream(base, c);
        auto [lo, hi] = chunk_range(n, kBlockedChunks, c);
        auto* cnt = &counts[c * kBlockedBuckets];
        for (std::size_t i = lo; i < hi; ++i) {
            const auto b = static_cast<std::uint8_t>(uniform_index(stream, kBlockedBuckets));
            labels[i] = b;
            ++cnt[b];
        }
    });

    // Bucket-major, chunk-minor offsets keep the scatter stable.
    std::vector<std::size_t> offsets(kBlockedChunks * kBlockedBuckets);
    std::vector<std::size_t> bucket_start(kBlockedBuckets + 1, 0);
    {
        std::size_t acc = 0;
        for (std::size_t b = 0; b < kBlockedBuckets; ++b) {
            bucket_start[b] = acc;
            for (std::size_t c = 0; c < kBlockedChunks; ++c) {
                offsets[c * kBlockedBuckets + b] = acc;
                acc += counts[c * kBlockedBuckets + b];
            }
        }
        bucket_start[kBlockedBuckets] = acc;
    }

    std::vector<T> tmp(n);
    for_each_chunk(kBlockedChunks, t, [&](std::size_t c) {
        auto [lo, hi] = chunk_range(n, kBlockedChunks, c);
        auto* cursor = &offsets[c * kBlockedBuckets];
        for (std::size_t i = lo; i < hi; ++i)
            tmp[cursor[labels[i]]++] = a[i];
    });

    for_each_chunk(kBlockedBuckets, t, [&](std::size_t b) {
        auto stream = RandomStream::substream(base ^ 0x5851f42d4c957f2dull, b);
        shuffle(std::span<T>(tmp.data() + bucket_start[b], bucket_start[b + 1] - bucket_start[b]),
                stream);
    });

    std::copy(tmp.begin(), tmp.end(), a.begin());
}

// Exact Binomial(trials, p) drawn as a sum over fixed chunks of trials, each
// chunk on its own sub-stream. Result is a pure function of the stream state.
inline std::uint64_t blocked_binomial(RandomStream& s, std::uint64_t trials, double p,
                                      unsigned exec_threads = 1) {
    using namespace detail;
    const std::uint64_t base = s.next();
    std::vector<std::uint64_t> partial(kBlockedChunks, 0);
    const unsigned t = trials < 1u << 16 ? 1 : exec_threads;
    for_each_chunk(kBlockedChunks, t, [&](std::size_t c) {
        auto stream = RandomStream::substream(base, c);
        auto [lo, hi] = chunk_range(trials, kBlockedChunks, c);
        partial[c] = binomial(stream, hi - lo, p);
    });
    std::uint64_t sum = 0;
    for (auto x : partial)
        sum += x;
    return sum;
}

// Independent unbiased bits, chunked like blocked_binomial.
inline void blocked_random_bits(RandomStream& s, std::size_t count, std::vector<std::uint8_t>& out,
                                unsigned exec_threads = 1) {
    using namespace detail;
    const std::uint64_t base = s.next();
    out.resize(count);
    const unsigned t = count < 1u << 16 ? 1 : exec_threads;
    for_each_chunk(kBlockedChunks, t, [&](std::size_t c) {
        auto stream = RandomStream::substream(base, c);
        auto [lo, hi] = chunk_range(count, kBlockedChunks, c);
        for (std::size_t i = lo; i < hi; ++i)
            out[i] = random_bit(stream);
    });
}

} // namespace es
