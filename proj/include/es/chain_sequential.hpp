#pragma once

#include <es/graph.hpp>
#include <es/sequential_edge_set.hpp>
#include <es/switch_source.hpp>

#include <cstdint>
#include <vector>

namespace es {

enum class SwitchOutcome : std::uint8_t {
    Accepted,
    RejectedLoop,
    RejectedExisting,
};

struct ChainCounters {
    std::uint64_t accepted = 0;
    std::uint64_t rejected_loop = 0;
    std::uint64_t rejected_existing = 0;
    std::uint64_t supersteps = 0;
};

struct SuperstepRecord {
    std::uint64_t superstep = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected_loop = 0;
    std::uint64_t rejected_existing = 0;
};

// Sequential chain state: the position-addressable edge array plus a hash-set
// mirror of the same edge multiset. Edges keep the orientation the last
// switch produced; membership tests always go through the canonical payload.
class ChainState {
public:
    explicit ChainState(EdgeList graph)
        : graph_(std::move(graph)), set_(graph_.num_edges()) {
        for (const auto e : graph_.edges)
            set_.insert(to_payload(e));
    }

    const EdgeList& graph() const { return graph_; }
    EdgeList& graph() { return graph_; }
    const SequentialEdgeSet& edge_set() const { return set_; }
    std::uint64_t num_edges() const { return graph_.num_edges(); }
    ChainCounters& counters() { return counters_; }
    const ChainCounters& counters() const { return counters_; }

    bool has_edge(Edge e) const { return set_.contains(to_payload(e)); }

    // One edge switch per the rewiring rule; rejections leave the state
    // untouched. A switch whose targets coincide with its sources counts as
    // rejected-existing (the graph is unchanged either way).
    SwitchOutcome apply_switch(const SwitchDescriptor& s) {
        Edge& slot_i = graph_.edges[s.i];
        Edge& slot_j = graph_.edges[s.j];
        const auto [e3, e4] = tau(slot_i, slot_j, s.g);

        SwitchOutcome out;
        if (is_loop(e3) || is_loop(e4)) {
            out = SwitchOutcome::RejectedLoop;
            ++counters_.rejected_loop;
        } else if (set_.contains(to_payload(e3)) || set_.contains(to_payload(e4))) {
            out = SwitchOutcome::RejectedExisting;
            ++counters_.rejected_existing;
        } else {
            set_.erase(to_payload(slot_i));
            set_.erase(to_payload(slot_j));
            set_.insert(to_payload(e3));
            set_.insert(to_payload(e4));
            slot_i = e3;
            slot_j = e4;
            out = SwitchOutcome::Accepted;
            ++counters_.accepted;
        }
        return out;
    }

    // Rearranges the edge array: edges[p] <- old edges[perm[p]].
    void permute_edges(const std::vector<std::uint32_t>& perm) {
        scratch_.resize(graph_.edges.size());
        for (std::size_t p = 0; p < perm.size(); ++p)
            scratch_[p] = graph_.edges[perm[p]];
        graph_.edges.swap(scratch_);
    }

private:
    EdgeList graph_;
    SequentialEdgeSet set_;
    ChainCounters counters_;
    std::vector<Edge> scratch_;
};

inline std::uint64_t es_superstep_switches(std::uint64_t m) { return (m + 1) / 2; }

// ES-MC: num_switches single switches drawn from the source.
inline void run_es(ChainState& state, std::uint64_t num_switches, EsSwitchSource& source) {
    const auto m = state.num_edges();
    if (m < 2)
        return;
    for (std::uint64_t k = 0; k < num_switches; ++k)
        state.apply_switch(source.next(m));
}

// ES-MC in superstep units (one superstep = ceil(m/2) switch attempts).
inline std::vector<SuperstepRecord> run_es_supersteps(ChainState& state, std::uint64_t supersteps,
                                                      EsSwitchSource& source) {
    std::vector<SuperstepRecord> records;
    records.reserve(supersteps);
    const auto per_step = es_superstep_switches(state.num_edges());
    for (std::uint64_t t = 0; t < supersteps; ++t) {
        const auto before = state.counters();
        run_es(state, per_step, source);
        const auto& after = state.counters();
        records.push_back({t + 1, after.accepted - before.accepted,
                           after.rejected_loop - before.rejected_loop,
                           after.rejected_existing - before.rejected_existing});
        ++state.counters().supersteps;
    }
    return records;
}

// Executes one global switch in index order; optionally records per-switch
// outcomes (needed to build the inverse).
inline void apply_global_switch(ChainState& state, const GlobalSwitch& gs,
                                std::vector<SwitchOutcome>* outcomes = nullptr) {
    state.permute_edges(gs.perm);
    if (outcomes) {
        outcomes->clear();
        outcomes->reserve(gs.ell);
    }
    for (std::uint64_t k = 0; k < gs.ell; ++k) {
        const auto out = state.apply_switch({2 * k, 2 * k + 1, gs.dirs[k] != 0});
        if (outcomes)
            outcomes->push_back(out);
    }
    ++state.counters().supersteps;
}

// G-ES-MC: one global switch per superstep.
inline std::vector<SuperstepRecord> run_global_es(ChainState& state, std::uint64_t supersteps,
                                                  GlobalSwitchSource& source) {
    std::vector<SuperstepRecord> records;
    records.reserve(supersteps);
    GlobalSwitch gs;
    for (std::uint64_t t = 0; t < supersteps; ++t) {
        source.next(state.num_edges(), gs);
        const auto before = state.counters();
        apply_global_switch(state, gs);
        const auto& after = state.counters();
        records.push_back({t + 1, after.accepted - before.accepted,
                           after.rejected_loop - before.rejected_loop,
                           after.rejected_existing - before.rejected_existing});
    }
    return records;
}

// The inverse of an executed global switch: inverse switches in reverse
// order; a pair keeps its slot order unless the forward switch was accepted
// with g = 1, in which case the two slots swap. Accepted switches reverse
// with direction 0; rejected ones re-run with their original direction (and
// reject again).
inline GlobalSwitch inverse_global_switch(const GlobalSwitch& gs,
                                          const std::vector<SwitchOutcome>& outcomes) {
    GlobalSwitch inv;
    inv.ell = gs.ell;
    const std::size_t m = gs.perm.size();
    inv.perm.resize(m);
    inv.dirs.resize(gs.ell);
    for (std::uint64_t k = 0; k < gs.ell; ++k) {
        const std::uint64_t r = gs.ell - 1 - k;
        const bool accepted = outcomes[k] == SwitchOutcome::Accepted;
        const bool swap_pair = accepted && gs.dirs[k] != 0;
        inv.perm[2 * r] = static_cast<std::uint32_t>(swap_pair ? 2 * k + 1 : 2 * k);
        inv.perm[2 * r + 1] = static_cast<std::uint32_t>(swap_pair ? 2 * k : 2 * k + 1);
        inv.dirs[r] = accepted ? 0 : gs.dirs[k];
    }
    for (std::size_t p = 2 * gs.ell; p < m; ++p)
        inv.perm[p] = static_cast<std::uint32_t>(p);
    return inv;
}

} // namespace es
