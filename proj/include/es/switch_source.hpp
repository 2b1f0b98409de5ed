#pragma once

#include <es/random.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace es {

// One edge switch: two distinct edge-array indices (0-based) and a
// direction bit.
struct SwitchDescriptor {
    std::uint64_t i = 0;
    std::uint64_t j = 0;
    bool g = false;

    friend bool operator==(const SwitchDescriptor&, const SwitchDescriptor&) = default;
};

// One global switch: a permutation applied to the edge array
// (new_edges[p] = old_edges[perm[p]]), the number ell of executed switches,
// and one fresh direction bit per switch. Switch k (0-based) acts on array
// slots 2k and 2k+1.
struct GlobalSwitch {
    std::vector<std::uint32_t> perm;
    std::uint64_t ell = 0;
    std::vector<std::uint8_t> dirs;
};

// Randomness seam for ES-MC: where the chain gets its (i, j, g) draws from.
// Recording and replaying makes chain runs reproducible bit-for-bit.
class EsSwitchSource {
public:
    virtual ~EsSwitchSource() = default;
    virtual SwitchDescriptor next(std::uint64_t num_edges) = 0;
};

class RandomEsSource final : public EsSwitchSource {
public:
    explicit RandomEsSource(RandomStream stream) : stream_(stream) {}

    SwitchDescriptor next(std::uint64_t m) override {
        SwitchDescriptor s;
        s.i = uniform_index(stream_, m);
        do {
            s.j = uniform_index(stream_, m);
        } while (s.j == s.i);
        s.g = random_bit(stream_);
        return s;
    }

private:
    RandomStream stream_;
};

class RecordingEsSource final : public EsSwitchSource {
public:
    explicit RecordingEsSource(EsSwitchSource& inner) : inner_(inner) {}

    SwitchDescriptor next(std::uint64_t m) override {
        auto s = inner_.next(m);
        recorded_.push_back(s);
        return s;
    }

    const std::vector<SwitchDescriptor>& recorded() const { return recorded_; }

private:
    EsSwitchSource& inner_;
    std::vector<SwitchDescriptor> recorded_;
};

class ReplayEsSource final : public EsSwitchSource {
public:
    explicit ReplayEsSource(std::span<const SwitchDescriptor> switches) : switches_(switches) {}

    SwitchDescriptor next(std::uint64_t) override { return switches_[pos_++]; }

private:
    std::span<const SwitchDescriptor> switches_;
    std::size_t pos_ = 0;
};

// Randomness seam for G-ES-MC.
class GlobalSwitchSource {
public:
    virtual ~GlobalSwitchSource() = default;
    virtual void next(std::uint64_t num_edges, GlobalSwitch& out) = 0;
};

// Draws (perm, ell, dirs) from a stream. With decomposition > 1 the blocked
// algorithms are used, so the sequence is identical for every worker count;
// decomposition == 1 matches the plain sequential draws.
class RandomGlobalSource final : public GlobalSwitchSource {
public:
    RandomGlobalSource(RandomStream stream, double p_lazy, unsigned decomposition = 1,
                       unsigned exec_threads = 1)
        : stream_(stream), p_lazy_(p_lazy), decomposition_(decomposition), exec_threads_(exec_threads) {}

    void next(std::uint64_t m, GlobalSwitch& out) override {
        out.perm.resize(m);
        for (std::uint64_t p = 0; p < m; ++p)
            out.perm[p] = static_cast<std::uint32_t>(p);
        if (decomposition_ <= 1) {
            shuffle(std::span<std::uint32_t>(out.perm), stream_);
            out.ell = binomial(stream_, m / 2, 1.0 - p_lazy_);
            out.dirs.resize(out.ell);
            for (auto& d : out.dirs)
                d = random_bit(stream_);
        } else {
            parallel_shuffle(std::span<std::uint32_t>(out.perm), stream_, decomposition_, exec_threads_);
            out.ell = blocked_binomial(stream_, m / 2, 1.0 - p_lazy_, exec_threads_);
            blocked_random_bits(stream_, out.ell, out.dirs, exec_threads_);
        }
    }

private:
    RandomStream stream_;
    double p_lazy_;
    unsigned decomposition_;
    unsigned exec_threads_;
};

class RecordingGlobalSource final : public GlobalSwitchSource {
public:
    explicit RecordingGlobalSource(GlobalSwitchSource& inner) : inner_(inner) {}

    void next(std::uint64_t m, GlobalSwitch& out) override {
        inner_.next(m, out);
        recorded_.push_back(out);
    }

    const std::vector<GlobalSwitch>& recorded() const { return recorded_; }

private:
    GlobalSwitchSource& inner_;
    std::vector<GlobalSwitch> recorded_;
};

class ReplayGlobalSource final : public GlobalSwitchSource {
public:
    explicit ReplayGlobalSource(std::span<const GlobalSwitch> switches) : switches_(switches) {}

    void next(std::uint64_t, GlobalSwitch& out) override { out = switches_[pos_++]; }

private:
    std::span<const GlobalSwitch> switches_;
    std::size_t pos_ = 0;
};

} // namespace es
