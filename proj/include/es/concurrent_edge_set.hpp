#pragma once

#include <es/edge.hpp>

#include <atomic>
#include <cassert>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>

namespace es {

constexpr unsigned kMaxThreads = 254;

// Lockable concurrent edge set. Each bucket is one 64-bit word:
// 8 lock bits (0 = free, k > 0 = held by thread k-1) over a 56-bit payload.
// Every mutation is a single compare-and-swap of the full word, and an edge
// never moves between buckets before it is erased.
//
// Payload sentinels are the two loops that can never be real edges:
// all-zeros marks an empty bucket and all-ones a tombstone. Empty buckets
// never reappear (released placeholders become tombstones), which keeps
// probe chains stable under concurrent inserts.
class ConcurrentEdgeSet {
public:
    struct Ticket {
        payload_t payload = 0;
        std::size_t bucket = 0;
        bool was_present = false;
        bool finalized = false;
        std::uint8_t owner = 0;
        bool valid = false;
    };

    enum class Acquire { Acquired, Busy, Absent };

    explicit ConcurrentEdgeSet(std::size_t expected_edges) { allocate(expected_edges); }

    std::size_t capacity() const { return capacity_; }
    std::size_t live() const { return live_.load(std::memory_order_relaxed); }
    std::size_t tombstones() const { return tombstones_.load(std::memory_order_relaxed); }

    // Quiescent-only existence query (ignores lock bits).
    bool contains(payload_t p) const {
        std::size_t i = home(p);
        for (std::size_t probes = 0; probes <= mask_; ++probes) {
            const auto word = cells_[i].load(std::memory_order_acquire);
            const auto pay = word & kPayloadMask;
            if (pay == kEmpty)
                return false;
            if (pay == p)
                return true;
            i = (i + 1) & mask_;
        }
        return false;
    }

    // Locks the bucket of e if present, or installs a locked placeholder if
    // absent. Busy when another thread holds the bucket.
    Acquire lock_or_insert(payload_t p, unsigned tid, Ticket& out) {
        return acquire(p, tid, /*insert_if_absent=*/true, out);
    }

    // Locks only an existing edge; Absent if it is not in the set.
    Acquire lock_existing(payload_t p, unsigned tid, Ticket& out) {
        return acquire(p, tid, /*insert_if_absent=*/false, out);
    }

    // Turns a placeholder into a real edge (still locked until release).
    // Returns false if the edge already existed, the rejection signal of the
    // eager switching loop.
    bool finalize_insert(Ticket& t) {
        assert(t.valid);
        if (t.was_present)
            return false;
        t.finalized = true;
        live_.fetch_add(1, std::memory_order_relaxed);
        return true;
    }

    // Removes the locked edge; the ticket is consumed.
    void erase_locked(Ticket& t) {
        assert(t.valid && (t.was_present || t.finalized));
        cells_[t.bucket].store(lock_word(0) | kTombstone, std::memory_order_release);
        live_.fetch_sub(1, std::memory_order_relaxed);
        tombstones_.fetch_add(1, std::memory_order_relaxed);
        t.valid = false;
    }

    // Drops the lock. A placeholder that was never finalized reverts to a
    // tombstone, so the probe chain never shrinks.
    void release(Ticket& t) {
        assert(t.valid);
        if (t.was_present || t.finalized) {
            cells_[t.bucket].store(t.payload, std::memory_order_release);
        } else {
            cells_[t.bucket].store(kTombstone, std::memory_order_release);
            tombstones_.fetch_add(1, std::memory_order_relaxed);
        }
        t.valid = false;
    }

    bool needs_rebuild() const { return 4 * tombstones() > capacity_; }

    // Quiescent-only: repopulate from the authoritative edge array. All
    // tickets must have been released.
    void rebuild_from(std::span<const Edge> edges) {
        allocate(edges.size());
        for (const auto e : edges)
            insert_unlocked(to_payload(e));
    }

    // Quiescent-only unsynchronized insert (used for construction).
    bool insert_unlocked(payload_t p) {
        std::size_t i = home(p);
        for (std::size_t probes = 0; probes <= mask_; ++probes) {
            const auto pay = cells_[i].load(std::memory_order_relaxed) & kPayloadMask;
            if (pay == p)
                return false;
            if (pay == kEmpty) {
                cells_[i].store(p, std::memory_order_relaxed);
                live_.fetch_add(1, std::memory_order_relaxed);
                return true;
            }
            i = (i + 1) & mask_;
        }
        throw std::runtime_error("concurrent edge set full");
    }

private:
    static constexpr payload_t kPayloadMask = (payload_t(1) << 56) - 1;
    static constexpr payload_t kEmpty = 0;
    static constexpr payload_t kTombstone = kPayloadMask;

    std::unique_ptr<std::atomic<std::uint64_t>[]> cells_;
    std::size_t capacity_ = 0;
    std::size_t mask_ = 0;
    std::atomic<std::size_t> live_{0};
    std::atomic<std::size_t> tombstones_{0};

    static std::uint64_t lock_word(unsigned tid_plus_one) {
        return std::uint64_t(tid_plus_one) << 56;
    }

    std::size_t home(payload_t p) const { return EdgeHash{}(p)&mask_; }

    void allocate(std::size_t expected) {
        std::size_t cap = 16;
        while (cap < 4 * expected)
            cap *= 2;
        cells_ = std::make_unique<std::atomic<std::uint64_t>[]>(cap);
        for (std::size_t i = 0; i < cap; ++i)
            cells_[i].store(kEmpty, std::memory_order_relaxed);
        capacity_ = cap;
        mask_ = cap - 1;
        live_.store(0, std::memory_order_relaxed);
        tombstones_.store(0, std::memory_order_relaxed);
    }

    Acquire acquire(payload_t p, unsigned tid, bool insert_if_absent, Ticket& out) {
        assert(tid < kMaxThreads);
        assert(p != kEmpty && p != kTombstone);
        const auto locked = lock_word(tid + 1) | p;

        std::size_t i = home(p);
        for (std::size_t probes = 0; probes <= mask_; ++probes) {
            auto word = cells_[i].load(std::memory_order_acquire);
            for (;;) {
                const auto pay = word & kPayloadMask;
                if (pay == p) {
                    if ((word >> 56) != 0)
                        return Acquire::Busy;
                    if (cells_[i].compare_exchange_weak(word, locked, std::memory_order_acq_rel,
                                                        std::memory_order_acquire))
                    {
                        out = Ticket{p, i, /*was_present=*/true, false, std::uint8_t(tid), true};
                        return Acquire::Acquired;
                    }
                    continue; // re-examine the freshly read word
                }
                if (pay == kEmpty) {
                    if (!insert_if_absent)
                        return Acquire::Absent;
                    if (cells_[i].compare_exchange_weak(word, locked, std::memory_order_acq_rel,
                                                        std::memory_order_acquire))
                    {
                        out = Ticket{p, i, /*was_present=*/false, false, std::uint8_t(tid), true};
                        return Acquire::Acquired;
                    }
                    continue;
                }
                break; // tombstone or other edge: keep probing
            }
            i = (i + 1) & mask_;
        }
        throw std::runtime_error("concurrent edge set full");
    }
};

} // namespace es
