#pragma once

#include <es/graph.hpp>
#include <es/sequential_edge_set.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace es {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text edge list: one "u v" pair per line, 0-based decimal ids, '#' comments.
// An optional "# nodes N" comment pins the node count; otherwise it is
// 1 + max id. With sanitize, loops are dropped and duplicate (undirected)
// edges are removed; without it, they raise IoError.
inline EdgeList read_edge_list(const std::string& path, bool sanitize = false) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);

    EdgeList g;
    node_t max_id = 0;
    bool have_header_nodes = false;
    std::uint64_t header_nodes = 0;
    bool any_edge = false;

    SequentialEdgeSet seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos)
            continue;
        if (line[pos] == '#') {
            std::istringstream hs(line.substr(pos + 1));
            std::string word;
            if (hs >> word && word == "nodes" && (hs >> header_nodes))
                have_header_nodes = true;
            continue;
        }
        std::uint64_t a = 0, b = 0;
        std::istringstream ls(line);
        if (!(ls >> a >> b))
            throw IoError(path + ":" + std::to_string(lineno) + ": expected two node ids");
        if (a > kMaxNode || b > kMaxNode)
            throw IoError(path + ":" + std::to_string(lineno) + ": node id exceeds 2^28 - 1");
        const Edge e = canonicalize(static_cast<node_t>(a), static_cast<node_t>(b));
        any_edge = true;
        max_id = std::max({max_id, e.u, e.v});
        if (is_loop(e)) {
            if (sanitize)
                continue;
            throw IoError(path + ":" + std::to_string(lineno) + ": loop edge");
        }
        if (!seen.insert(to_payload(e))) {
            if (sanitize)
                continue;
            throw IoError(path + ":" + std::to_string(lineno) + ": duplicate edge");
        }
        g.edges.push_back(e);
    }

    if (have_header_nodes) {
        if (header_nodes > kMaxNode + 1)
            throw IoError(path + ": header node count exceeds 2^28");
        if (any_edge && header_nodes < std::uint64_t(max_id) + 1)
            throw IoError(path + ": header node count smaller than max node id + 1");
        g.num_nodes = static_cast<node_t>(header_nodes);
    } else {
        g.num_nodes = any_edge ? max_id + 1 : 0;
    }
    return g;
}

inline void write_edge_list(const std::string& path, const EdgeList& g, bool sort_output = false) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << "# nodes " << g.num_nodes << "\n";

    auto emit = [&](Edge e) {
        const Edge c = canonicalize(e);
        out << c.u << " " << c.v << "\n";
    };
    if (sort_output) {
        std::vector<payload_t> payloads;
        payloads.reserve(g.edges.size());
        for (auto e : g.edges)
            payloads.push_back(to_payload(e));
        std::sort(payloads.begin(), payloads.end());
        for (auto p : payloads)
            emit(from_payload(p));
    } else {
        for (auto e : g.edges)
            emit(e);
    }
    if (!out)
        throw IoError("write failed: " + path);
}

} // namespace es
