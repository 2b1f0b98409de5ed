#pragma once

#include <es/edge.hpp>

#include <cstddef>
#include <vector>

namespace es {

// Single-owner open-addressing set over edge payloads. Linear probing,
// power-of-two capacity, load factor capped at 1/2, backward-shift deletion
// (no tombstones), so probe chains stay short under the insert/erase churn
// of edge switching.
class SequentialEdgeSet {
public:
    explicit SequentialEdgeSet(std::size_t expected = 0) { init_capacity(expected); }

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return buckets_.size(); }

    bool contains(payload_t p) const {
        std::size_t i = home(p);
        while (buckets_[i] != kEmpty) {
            if (buckets_[i] == p)
                return true;
            i = (i + 1) & mask_;
        }
        return false;
    }

    bool insert(payload_t p) {
        if ((size_ + 1) * 2 > buckets_.size())
            grow();
        std::size_t i = home(p);
        while (buckets_[i] != kEmpty) {
            if (buckets_[i] == p)
                return false;
            i = (i + 1) & mask_;
        }
        buckets_[i] = p;
        ++size_;
        return true;
    }

    bool erase(payload_t p) {
        std::size_t i = home(p);
        while (buckets_[i] != kEmpty) {
            if (buckets_[i] == p) {
                backward_shift(i);
                --size_;
                return true;
            }
            i = (i + 1) & mask_;
        }
        return false;
    }

    void clear() {
        std::fill(buckets_.begin(), buckets_.end(), kEmpty);
        size_ = 0;
    }

private:
    static constexpr payload_t kEmpty = 0; // payload of edge (0,0), a loop

    std::vector<payload_t> buckets_;
    std::size_t mask_ = 0;
    std::size_t size_ = 0;

    std::size_t home(payload_t p) const { return EdgeHash{}(p)&mask_; }

    void init_capacity(std::size_t expected) {
        std::size_t cap = 16;
        while (cap < 4 * expected)
            cap *= 2;
        buckets_.assign(cap, kEmpty);
        mask_ = cap - 1;
        size_ = 0;
    }

    void grow() {
        std::vector<payload_t> old = std::move(buckets_);
        buckets_.assign(old.size() * 2, kEmpty);
        mask_ = buckets_.size() - 1;
        for (auto p : old) {
            if (p == kEmpty)
                continue;
            std::size_t i = home(p);
            while (buckets_[i] != kEmpty)
                i = (i + 1) & mask_;
            buckets_[i] = p;
        }
    }

    // Close the gap at position i by shifting back any element whose home
    // bucket does not lie inside the (cyclic) gap-free interval.
    void backward_shift(std::size_t gap) {
        std::size_t i = (gap + 1) & mask_;
        while (buckets_[i] != kEmpty) {
            const std::size_t h = home(buckets_[i]);
            // move if h is cyclically outside (gap, i]
            const bool between = ((i - h) & mask_) < ((i - gap) & mask_);
            if (!between) {
                buckets_[gap] = buckets_[i];
                gap = i;
            }
            i = (i + 1) & mask_;
        }
        buckets_[gap] = kEmpty;
    }
};

} // namespace es
