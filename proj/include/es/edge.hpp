#pragma once

#include <cassert>
#include <cstdint>
#include <utility>

namespace es {

using node_t = std::uint32_t;
using payload_t = std::uint64_t;

// Node ids must fit into 28 bits so that a canonical edge packs into 56 bits
// (leaving one byte per bucket for locking).
constexpr unsigned kNodeBits = 28;
constexpr node_t kMaxNode = (node_t(1) << kNodeBits) - 1;

// A directed representation of an undirected edge. The orientation carries
// meaning inside the switching chains: tau produces oriented pairs and the
// edge array keeps them as produced, which is what makes a switch reversible
// by re-applying it with direction bit 0.
struct Edge {
    node_t u = 0;
    node_t v = 0;

    friend bool operator==(Edge a, Edge b) { return a.u == b.u && a.v == b.v; }
    friend bool operator!=(Edge a, Edge b) { return !(a == b); }
};

constexpr bool is_loop(Edge e) { return e.u == e.v; }

constexpr Edge canonicalize(Edge e) {
    return e.u <= e.v ? e : Edge{e.v, e.u};
}

constexpr Edge canonicalize(node_t u, node_t v) {
    return canonicalize(Edge{u, v});
}

// Packs a canonical edge into the low 56 bits of a word.
constexpr payload_t to_payload(Edge e) {
    const Edge c = canonicalize(e);
    return (payload_t(c.u) << kNodeBits) | payload_t(c.v);
}

constexpr Edge from_payload(payload_t p) {
    return Edge{node_t(p >> kNodeBits), node_t(p & kMaxNode)};
}

// The rewiring function: exchanges endpoints of two directed edges.
constexpr std::pair<Edge, Edge> tau(Edge e1, Edge e2, bool g) {
    if (!g)
        return {Edge{e1.u, e2.u}, Edge{e1.v, e2.v}};
    return {Edge{e1.u, e2.v}, Edge{e1.v, e2.u}};
}

// 64-bit multiply-xorshift finalizer (splitmix64). Used both as the bucket
// hash and to derive sub-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

struct EdgeHash {
    std::uint64_t operator()(payload_t p) const { return mix64(p); }
};

} // namespace es
