#pragma once

#include <es/chain_sequential.hpp>
#include <es/concurrent_edge_set.hpp>
#include <es/graph.hpp>
#include <es/switch_source.hpp>
#include <es/thread_team.hpp>

#include <atomic>
#include <span>
#include <thread>
#include <vector>

namespace es {

// EagerES: scheduler-dependent parallel ES-MC. Every worker performs
// switches independently, synchronizing only through per-edge bucket locks.
// With more than one worker this is NOT a faithful ES-MC implementation
// (the transition probabilities pick up a scheduler-dependent bias); it
// exists as a parallel performance baseline.
class EagerEs {
public:
    explicit EagerEs(unsigned threads) : team_(std::min(threads, kMaxThreads)) {}

    unsigned threads() const { return team_.size(); }

    // num_switches attempts split across the workers, drawn from per-worker
    // sub-streams of seed.
    ChainCounters run(EdgeList& graph, std::uint64_t num_switches, std::uint64_t seed) {
        if (graph.num_edges() < 2 || num_switches == 0)
            return {};
        Context ctx(graph);

        std::vector<RandomStream> streams;
        streams.reserve(team_.size());
        for (unsigned t = 0; t < team_.size(); ++t)
            streams.push_back(RandomStream::substream(seed, t));

        std::vector<ChainCounters> local(team_.size());
        const auto m = ctx.slots.size();

        // Batches bound tombstone growth between quiescent rebuild points.
        const std::uint64_t batch_size = std::max<std::uint64_t>(1, ctx.set.capacity() / 16);
        std::uint64_t done = 0;
        while (done < num_switches) {
            const auto batch = std::min(batch_size, num_switches - done);
            team_.run([&](unsigned tid) {
                auto& stream = streams[tid];
                const auto lo = batch * tid / team_.size();
                const auto hi = batch * (tid + 1) / team_.size();
                for (std::uint64_t k = lo; k < hi; ++k) {
                    SwitchDescriptor s;
                    s.i = uniform_index(stream, m);
                    do {
                        s.j = uniform_index(stream, m);
                    } while (s.j == s.i);
                    s.g = random_bit(stream);
                    attempt(ctx, s, tid, stream, local[tid]);
                }
            });
            done += batch;
            if (ctx.set.needs_rebuild())
                ctx.rebuild();
        }

        ctx.store_back(graph);
        ChainCounters total;
        for (const auto& c : local) {
            total.accepted += c.accepted;
            total.rejected_loop += c.rejected_loop;
            total.rejected_existing += c.rejected_existing;
        }
        return total;
    }

    // Single-threaded execution of an injected descriptor sequence; with one
    // worker EagerES coincides with sequential ES-MC, which the tests check
    // against this entry point.
    ChainCounters run_injected(EdgeList& graph, std::span<const SwitchDescriptor> switches) {
        Context ctx(graph);
        ChainCounters counters;
        RandomStream backoff_stream(0);
        for (const auto& s : switches) {
            attempt(ctx, s, 0, backoff_stream, counters);
            if (ctx.set.needs_rebuild())
                ctx.rebuild();
        }
        ctx.store_back(graph);
        return counters;
    }

private:
    struct Context {
        std::vector<std::atomic<std::uint64_t>> slots; // directed edges, u<<32|v
        ConcurrentEdgeSet set;

        explicit Context(const EdgeList& graph) : slots(graph.num_edges()), set(graph.num_edges()) {
            for (std::size_t i = 0; i < graph.num_edges(); ++i)
                slots[i].store(pack(graph.edges[i]), std::memory_order_relaxed);
            for (const auto e : graph.edges)
                set.insert_unlocked(to_payload(e));
        }

        static std::uint64_t pack(Edge e) { return (std::uint64_t(e.u) << 32) | e.v; }
        static Edge unpack(std::uint64_t w) { return {node_t(w >> 32), node_t(w & 0xffffffffu)}; }

        void rebuild() {
            std::vector<Edge> edges;
            edges.reserve(slots.size());
            for (auto& s : slots)
                edges.push_back(unpack(s.load(std::memory_order_relaxed)));
            set.rebuild_from(edges);
        }

        void store_back(EdgeList& graph) {
            for (std::size_t i = 0; i < slots.size(); ++i)
                graph.edges[i] = unpack(slots[i].load(std::memory_order_relaxed));
        }
    };

    ThreadTeam team_;

    static void backoff(RandomStream& stream, unsigned& spins) {
        if (spins < 1024) {
            const auto n = uniform_index(stream, spins + 1);
            for (std::uint64_t k = 0; k < n; ++k)
                std::atomic_signal_fence(std::memory_order_seq_cst);
            spins *= 2;
        } else {
            std::this_thread::yield();
        }
    }

    // One switch attempt following the eager protocol: lock both source
    // edges (release everything and restart on any conflict), reject loops
    // and self-recreating switches, insert-and-lock the targets, then either
    // commit the rewiring or reject. The same indices are retried until the
    // switch is decided.
    static void attempt(Context& ctx, const SwitchDescriptor& s, unsigned tid,
                        RandomStream& stream, ChainCounters& counters) {
        auto& set = ctx.set;
        unsigned spins = 4;
        for (;;) {
            const auto w1 = ctx.slots[s.i].load(std::memory_order_acquire);
            const Edge e1 = Context::unpack(w1);
            ConcurrentEdgeSet::Ticket t1;
            if (set.lock_existing(to_payload(e1), tid, t1) != ConcurrentEdgeSet::Acquire::Acquired) {
                backoff(stream, spins);
                continue;
            }
            // The slot may have moved on between the read and the lock.
            if (ctx.slots[s.i].load(std::memory_order_acquire) != w1) {
                set.release(t1);
                continue;
            }

            const auto w2 = ctx.slots[s.j].load(std::memory_order_acquire);
            const Edge e2 = Context::unpack(w2);
            ConcurrentEdgeSet::Ticket t2;
            if (set.lock_existing(to_payload(e2), tid, t2) != ConcurrentEdgeSet::Acquire::Acquired) {
                set.release(t1);
                backoff(stream, spins);
                continue;
            }
            if (ctx.slots[s.j].load(std::memory_order_acquire) != w2) {
                set.release(t2);
                set.release(t1);
                continue;
            }

            const auto [e3, e4] = tau(e1, e2, s.g);
            if (is_loop(e3) || is_loop(e4)) {
                set.release(t2);
                set.release(t1);
                ++counters.rejected_loop;
                return;
            }
            const auto c1 = to_payload(e1), c2 = to_payload(e2);
            const auto c3 = to_payload(e3), c4 = to_payload(e4);
            // A target matching one of our own locked sources necessarily
            // recreates the sources; locking it would self-deadlock.
            if (c3 == c1 || c3 == c2 || c4 == c1 || c4 == c2) {
                set.release(t2);
                set.release(t1);
                ++counters.rejected_existing;
                return;
            }

            ConcurrentEdgeSet::Ticket t3;
            if (set.lock_or_insert(c3, tid, t3) != ConcurrentEdgeSet::Acquire::Acquired) {
                set.release(t2);
                set.release(t1);
                backoff(stream, spins);
                continue;
            }
            ConcurrentEdgeSet::Ticket t4;
            if (set.lock_or_insert(c4, tid, t4) != ConcurrentEdgeSet::Acquire::Acquired) {
                set.release(t3);
                set.release(t2);
                set.release(t1);
                backoff(stream, spins);
                continue;
            }

            if (t3.was_present || t4.was_present) {
                set.release(t4);
                set.release(t3);
                set.release(t2);
                set.release(t1);
                ++counters.rejected_existing;
                return;
            }

            set.finalize_insert(t3);
            set.finalize_insert(t4);
            ctx.slots[s.i].store(Context::pack(e3), std::memory_order_release);
            ctx.slots[s.j].store(Context::pack(e4), std::memory_order_release);
            set.erase_locked(t1);
            set.erase_locked(t2);
            set.release(t3);
            set.release(t4);
            ++counters.accepted;
            return;
        }
    }
};

} // namespace es
