#pragma once

#include <es/edge.hpp>

#include <atomic>
#include <cassert>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

namespace es {

enum class DepOp : std::uint8_t { Erase = 0, Insert = 1 };

enum class DepStatus : std::uint8_t { Undecided = 0, Legal = 1, Illegal = 2 };

// Concurrent open-addressing multimap of the dependency tuples of one global
// switch: (edge, switch index, op). Statuses are not stored per tuple; all
// four tuples of switch k share the single atomic status in the per-switch
// status array, so every status transition is one monotone write.
//
// Cells are claimed with a compare-and-swap on the key word and never move
// afterwards. All stores happen before the announce barrier, all lookups
// after it; only statuses change during the decision rounds.
class DependencyTable {
public:
    static constexpr std::uint32_t kInfinity = std::numeric_limits<std::uint32_t>::max();

    explicit DependencyTable(std::size_t max_tuples = 0) { reserve(max_tuples); }

    void reserve(std::size_t max_tuples) {
        std::size_t cap = 16;
        while (cap < 2 * max_tuples)
            cap *= 2;
        if (cap > capacity_) {
            cells_ = std::make_unique<Cell[]>(cap);
            capacity_ = cap;
            mask_ = cap - 1;
            for (std::size_t i = 0; i < cap; ++i)
                cells_[i].key.store(0, std::memory_order_relaxed);
        }
    }

    std::size_t capacity() const { return capacity_; }

    // Zero-fills the key range [lo, hi); split the capacity over workers.
    void clear_range(std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            cells_[i].key.store(0, std::memory_order_relaxed);
    }

    void store(payload_t edge, DepOp op, std::uint32_t index) {
        const auto key = make_key(edge, op);
        std::size_t i = home(edge);
        for (std::size_t probes = 0; probes <= mask_; ++probes) {
            std::uint64_t expected = 0;
            if (cells_[i].key.load(std::memory_order_relaxed) == 0 &&
                cells_[i].key.compare_exchange_strong(expected, key, std::memory_order_release,
                                                      std::memory_order_relaxed))
            {
                cells_[i].index = index;
                return;
            }
            i = (i + 1) & mask_;
        }
        assert(false && "dependency table full");
    }

    struct EraseTuple {
        bool found = false;
        std::uint32_t index = 0;
    };

    // The unique erase tuple of an edge (a global switch erases an edge at
    // most once).
    EraseTuple find_erase(payload_t edge) const {
        EraseTuple r;
        const auto key = make_key(edge, DepOp::Erase);
        std::size_t i = home(edge);
        for (std::size_t probes = 0; probes <= mask_; ++probes) {
            const auto k = cells_[i].key.load(std::memory_order_acquire);
            if (k == 0)
                return r;
            if (k == key) {
                r.found = true;
                r.index = cells_[i].index;
                return r;
            }
            i = (i + 1) & mask_;
        }
        return r;
    }

    struct InsertTuple {
        bool found = false;
        std::uint32_t index = 0;
        DepStatus status = DepStatus::Undecided;
    };

    // The lowest-index insert tuple of this edge before `self`, skipping
    // tuples whose switch is already illegal (statuses are monotone, so a
    // skipped tuple stays irrelevant).
    InsertTuple find_first_insert(payload_t edge, std::uint32_t self,
                                  const std::atomic<DepStatus>* statuses) const {
        InsertTuple best;
        const auto key = make_key(edge, DepOp::Insert);
        std::size_t i = home(edge);
        for (std::size_t probes = 0; probes <= mask_; ++probes) {
            const auto k = cells_[i].key.load(std::memory_order_acquire);
            if (k == 0)
                break;
            if (k == key) {
                const auto idx = cells_[i].index;
                if (idx < self && (!best.found || idx < best.index)) {
                    const auto st = statuses[idx].load(std::memory_order_acquire);
                    if (st != DepStatus::Illegal) {
                        best.found = true;
                        best.index = idx;
                        best.status = st;
                    }
                }
            }
            i = (i + 1) & mask_;
        }
        return best;
    }

private:
    struct Cell {
        std::atomic<std::uint64_t> key{0}; // payload | op << 56; 0 = empty
        std::uint32_t index = 0;           // switch index or kInfinity
    };

    static std::uint64_t make_key(payload_t edge, DepOp op) {
        return edge | (std::uint64_t(static_cast<std::uint8_t>(op)) << 56);
    }

    std::unique_ptr<Cell[]> cells_;
    std::size_t capacity_ = 0;
    std::size_t mask_ = 0;

    std::size_t home(payload_t p) const { return EdgeHash{}(p)&mask_; }
};

} // namespace es
