#pragma once

#include <es/chain_sequential.hpp>
#include <es/dependency_table.hpp>
#include <es/graph.hpp>
#include <es/switch_source.hpp>
#include <es/thread_team.hpp>

#include <atomic>
#include <barrier>
#include <cassert>
#include <memory>
#include <span>
#include <vector>

namespace es {

struct SteadyRunStats {
    ChainCounters counters;
    std::vector<std::uint32_t> rounds_per_superstep;

    double mean_rounds() const {
        if (rounds_per_superstep.empty())
            return 0.0;
        double s = 0;
        for (auto r : rounds_per_superstep)
            s += r;
        return s / rounds_per_superstep.size();
    }

    std::uint32_t max_rounds() const {
        std::uint32_t m = 0;
        for (auto r : rounds_per_superstep)
            m = std::max(m, r);
        return m;
    }
};

// SteadyGlobalES: faithful parallel G-ES-MC. Each global switch announces
// its erase/insert dependency tuples, then processes the switches in rounds;
// a switch is decided once every earlier switch it depends on is decided.
// The outcome is a pure function of (graph, perm, ell, dirs) — identical for
// every worker count — because statuses only ever move from undecided to
// their in-order sequential value.
class SteadyGlobalEs {
public:
    explicit SteadyGlobalEs(unsigned threads)
        : team_(std::min(threads, kMaxThreads)), local_delayed_(team_.size()),
          local_counters_(team_.size()) {}

    unsigned threads() const { return team_.size(); }

    // Executes one global switch on the full team; returns the round count.
    std::uint32_t apply(EdgeList& graph, const GlobalSwitch& gs) {
        SteadyRunStats stats;
        auto source = ReplayGlobalSource(std::span(&gs, 1));
        run_supersteps(graph, 1, source, team_.size(), stats);
        return stats.rounds_per_superstep.front();
    }

    SteadyRunStats run_injected(EdgeList& graph, std::span<const GlobalSwitch> switches) {
        SteadyRunStats stats;
        auto source = ReplayGlobalSource(switches);
        run_supersteps(graph, switches.size(), source, team_.size(), stats);
        return stats;
    }

    // Seeded run. The randomness decomposition is chosen by graph size, never
    // by thread count, so the result depends on the seed only.
    SteadyRunStats run(EdgeList& graph, std::uint64_t supersteps, double p_lazy,
                       std::uint64_t seed) {
        SteadyRunStats stats;
        const bool small = graph.num_edges() < 4096;
        RandomGlobalSource source(RandomStream(seed), p_lazy,
                                  /*decomposition=*/small ? 1 : 2, team_.size());
        // Tiny graphs: run the identical decomposition on the leader alone
        // instead of synchronizing the whole team every superstep.
        const unsigned participants = small ? 1 : team_.size();
        run_supersteps(graph, supersteps, source, participants, stats);
        return stats;
    }

private:
    ThreadTeam team_;
    DependencyTable table_;
    std::unique_ptr<std::atomic<DepStatus>[]> statuses_;
    std::size_t status_capacity_ = 0;
    std::vector<std::uint32_t> undecided_;
    std::vector<std::vector<std::uint32_t>> local_delayed_;
    std::vector<ChainCounters> local_counters_;
    std::vector<Edge> scratch_;

    void ensure_status_capacity(std::size_t n) {
        if (status_capacity_ < n) {
            statuses_ = std::make_unique<std::atomic<DepStatus>[]>(n);
            status_capacity_ = n;
        }
    }

    void run_supersteps(EdgeList& graph, std::uint64_t supersteps, GlobalSwitchSource& source,
                        unsigned participants, SteadyRunStats& stats) {
        const auto m = graph.num_edges();
        table_.reserve(2 * m);
        ensure_status_capacity(m / 2 + 1);
        scratch_.resize(m);
        stats.rounds_per_superstep.reserve(supersteps);
        for (auto& c : local_counters_)
            c = {};

        const unsigned E = std::max(1u, std::min(participants, team_.size()));
        GlobalSwitch gs;
        std::barrier<> bar(E);
        std::atomic<std::uint32_t> rounds{0};

        team_.run([&](unsigned tid) {
            if (tid >= E)
                return;
            for (std::uint64_t step = 0; step < supersteps; ++step) {
                if (tid == 0)
                    source.next(m, gs);
                bar.arrive_and_wait();
                global_switch(graph, gs, tid, E, bar, rounds);
                if (tid == 0) {
                    stats.rounds_per_superstep.push_back(rounds.load(std::memory_order_relaxed));
                    ++stats.counters.supersteps;
                }
                bar.arrive_and_wait();
            }
        });

        for (const auto& c : local_counters_) {
            stats.counters.accepted += c.accepted;
            stats.counters.rejected_loop += c.rejected_loop;
            stats.counters.rejected_existing += c.rejected_existing;
        }
    }

    static std::pair<std::size_t, std::size_t> share(std::size_t n, unsigned tid, unsigned e) {
        return {n * tid / e, n * std::size_t(tid + 1) / e};
    }

    void global_switch(EdgeList& graph, const GlobalSwitch& gs, unsigned tid, unsigned E,
                       std::barrier<>& bar, std::atomic<std::uint32_t>& rounds) {
        auto& edges = graph.edges;
        const std::size_t m = edges.size();
        const auto ell = gs.ell;
        auto* statuses = statuses_.get();

        // Apply the permutation (gather into scratch, then swap).
        {
            auto [lo, hi] = share(m, tid, E);
            for (std::size_t p = lo; p < hi; ++p)
                scratch_[p] = edges[gs.perm[p]];
        }
        bar.arrive_and_wait();
        if (tid == 0) {
            edges.swap(scratch_);
            scratch_.resize(m);
            undecided_.clear();
            rounds.store(0, std::memory_order_relaxed);
        }
        bar.arrive_and_wait();

        // Reset table and statuses.
        {
            auto [lo, hi] = share(table_.capacity(), tid, E);
            table_.clear_range(lo, hi);
            auto [slo, shi] = share(ell, tid, E);
            for (std::size_t k = slo; k < shi; ++k)
                statuses[k].store(DepStatus::Undecided, std::memory_order_relaxed);
        }
        bar.arrive_and_wait();

        // Announce: erase tuples for both sources and insert tuples for both
        // targets of every switch, plus infinity-erase tuples for edges the
        // global switch leaves alone.
        {
            auto [lo, hi] = share(ell, tid, E);
            for (std::size_t k = lo; k < hi; ++k) {
                const Edge e1 = edges[2 * k], e2 = edges[2 * k + 1];
                const auto [e3, e4] = tau(e1, e2, gs.dirs[k] != 0);
                const auto idx = static_cast<std::uint32_t>(k);
                table_.store(to_payload(e1), DepOp::Erase, idx);
                table_.store(to_payload(e2), DepOp::Erase, idx);
                table_.store(to_payload(e3), DepOp::Insert, idx);
                table_.store(to_payload(e4), DepOp::Insert, idx);
            }
            auto [ulo, uhi] = share(m - 2 * ell, tid, E);
            for (std::size_t p = 2 * ell + ulo; p < 2 * ell + uhi; ++p)
                table_.store(to_payload(edges[p]), DepOp::Erase, DependencyTable::kInfinity);
        }
        if (tid == 0) {
            undecided_.resize(ell);
            for (std::uint32_t k = 0; k < ell; ++k)
                undecided_[k] = k;
        }
        bar.arrive_and_wait();

        // Decision rounds.
        while (!undecided_.empty()) {
            auto& delayed = local_delayed_[tid];
            delayed.clear();
            auto [lo, hi] = share(undecided_.size(), tid, E);
            for (std::size_t q = lo; q < hi; ++q)
                decide(edges, gs, undecided_[q], statuses, delayed, local_counters_[tid]);
            bar.arrive_and_wait();
            if (tid == 0) {
                const auto before = undecided_.size();
                undecided_.clear();
                for (unsigned t = 0; t < E; ++t)
                    undecided_.insert(undecided_.end(), local_delayed_[t].begin(),
                                      local_delayed_[t].end());
                assert(undecided_.size() < before);
                (void)before;
                rounds.fetch_add(1, std::memory_order_relaxed);
            }
            bar.arrive_and_wait();
        }
        if (ell == 0 && tid == 0)
            rounds.store(1, std::memory_order_relaxed); // an empty switch still costs a round
        bar.arrive_and_wait();
    }

    void decide(std::vector<Edge>& edges, const GlobalSwitch& gs, std::uint32_t k,
                std::atomic<DepStatus>* statuses, std::vector<std::uint32_t>& delayed,
                ChainCounters& counters) {
        const Edge e1 = edges[2 * k], e2 = edges[2 * k + 1];
        const auto [e3, e4] = tau(e1, e2, gs.dirs[k] != 0);

        if (is_loop(e3) || is_loop(e4)) {
            statuses[k].store(DepStatus::Illegal, std::memory_order_release);
            ++counters.rejected_loop;
            return;
        }

        bool illegal = false;
        bool delay = false;
        for (const Edge target : {e3, e4}) {
            const auto pb = to_payload(target);
            const auto er = table_.find_erase(pb);
            if (er.found && er.index != k) {
                if (er.index > k) { // includes the infinity tuples
                    illegal = true;
                    break;
                }
                const auto sj = statuses[er.index].load(std::memory_order_acquire);
                if (sj == DepStatus::Illegal) {
                    illegal = true;
                    break;
                }
                if (sj == DepStatus::Undecided)
                    delay = true;
            }
            const auto ins = table_.find_first_insert(pb, k, statuses);
            if (ins.found) {
                if (ins.status == DepStatus::Legal) {
                    illegal = true;
                    break;
                }
                delay = true; // undecided earlier inserter
            }
        }

        if (illegal) {
            statuses[k].store(DepStatus::Illegal, std::memory_order_release);
            ++counters.rejected_existing;
            return;
        }
        if (delay) {
            delayed.push_back(k);
            return;
        }
        edges[2 * k] = e3;
        edges[2 * k + 1] = e4;
        statuses[k].store(DepStatus::Legal, std::memory_order_release);
        ++counters.accepted;
    }
};

} // namespace es
