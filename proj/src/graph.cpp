#include "nbx/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <queue>

namespace nbx {

Graph Graph::from_edges(NodeId n, std::span<const std::pair<NodeId, NodeId>> edges) {
    Graph g(n);
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n) throw std::out_of_range("edge endpoint out of range");
        if (u == v) continue;
        g.adj_[static_cast<std::size_t>(u)].push_back(v);
        g.adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& nbrs : g.adj_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        g.m_ += static_cast<std::int64_t>(nbrs.size());
    }
    g.m_ /= 2;
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    const auto& nbrs = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

void Graph::detach_node(NodeId u) {
    check_node(u);
    auto& nbrs = adj_[static_cast<std::size_t>(u)];
    for (NodeId v : nbrs) {
        auto& back = adj_[static_cast<std::size_t>(v)];
        back.erase(std::lower_bound(back.begin(), back.end(), u));
    }
    m_ -= static_cast<std::int64_t>(nbrs.size());
    nbrs.clear();
    nbrs.shrink_to_fit();
}

bool Graph::is_consistent() const {
    std::int64_t half_edges = 0;
    for (NodeId u = 0; u < num_nodes(); ++u) {
        const auto& nbrs = adj_[static_cast<std::size_t>(u)];
        if (!std::is_sorted(nbrs.begin(), nbrs.end())) return false;
        if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end()) return false;
        for (NodeId v : nbrs) {
            if (v < 0 || v >= num_nodes() || v == u) return false;
            if (!has_edge(v, u)) return false;
        }
        half_edges += static_cast<std::int64_t>(nbrs.size());
    }
    return half_edges == 2 * m_;
}

DirectedEdgeIndex::DirectedEdgeIndex(const Graph& g) {
    const NodeId n = g.num_nodes();
    std::vector<std::pair<NodeId, NodeId>> undirected;
    undirected.reserve(static_cast<std::size_t>(g.num_edges()));
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v : g.neighbors(u))
            if (u < v) undirected.emplace_back(u, v);
    // neighbors() is sorted per node, so this is already (min,max) lexicographic
    const std::size_t m = undirected.size();
    source_.resize(2 * m);
    target_.resize(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
        auto [u, v] = undirected[k];
        source_[2 * k] = u;
        target_[2 * k] = v;
        source_[2 * k + 1] = v;
        target_[2 * k + 1] = u;
    }

    in_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    out_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t e = 0; e < 2 * m; ++e) {
        ++in_offsets_[static_cast<std::size_t>(target_[e]) + 1];
        ++out_offsets_[static_cast<std::size_t>(source_[e]) + 1];
    }
    for (NodeId v = 0; v < n; ++v) {
        in_offsets_[static_cast<std::size_t>(v) + 1] += in_offsets_[static_cast<std::size_t>(v)];
        out_offsets_[static_cast<std::size_t>(v) + 1] += out_offsets_[static_cast<std::size_t>(v)];
    }
    in_edges_.resize(2 * m);
    out_edges_.resize(2 * m);
    auto in_pos = in_offsets_;
    auto out_pos = out_offsets_;
    for (std::size_t e = 0; e < 2 * m; ++e) {
        in_edges_[static_cast<std::size_t>(in_pos[static_cast<std::size_t>(target_[e])]++)] =
            static_cast<EdgeId>(e);
        out_edges_[static_cast<std::size_t>(out_pos[static_cast<std::size_t>(source_[e])]++)] =
            static_cast<EdgeId>(e);
    }
    // sort each out bucket by target so index_of can binary search
    for (NodeId v = 0; v < n; ++v) {
        auto b = out_edges_.begin() + out_offsets_[static_cast<std::size_t>(v)];
        auto e = out_edges_.begin() + out_offsets_[static_cast<std::size_t>(v) + 1];
        std::sort(b, e, [this](EdgeId a, EdgeId b2) { return target_[static_cast<std::size_t>(a)] < target_[static_cast<std::size_t>(b2)]; });
    }
}

EdgeId DirectedEdgeIndex::index_of(NodeId src, NodeId dst) const {
    auto b = out_edges_.begin() + out_offsets_[static_cast<std::size_t>(src)];
    auto e = out_edges_.begin() + out_offsets_[static_cast<std::size_t>(src) + 1];
    auto it = std::lower_bound(b, e, dst, [this](EdgeId a, NodeId t) { return target_[static_cast<std::size_t>(a)] < t; });
    if (it == e || target_[static_cast<std::size_t>(*it)] != dst)
        throw std::out_of_range("directed edge not present");
    return *it;
}

LoadedGraph load_edge_list(std::istream& in) {
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::string line;
    std::size_t line_no = 0;
    std::size_t parsed = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;

        const char* begin = line.data() + pos;
        const char* end = line.data() + line.size();
        std::int64_t ids[2];
        for (int k = 0; k < 2; ++k) {
            while (begin != end && (*begin == ' ' || *begin == '\t' || *begin == '\r')) ++begin;
            auto [next, ec] = std::from_chars(begin, end, ids[k]);
            if (ec != std::errc{} || next == begin)
                throw ParseError(line_no, "expected two integer node ids");
            if (ids[k] < 0) throw ParseError(line_no, "node ids must be non-negative");
            begin = next;
        }
        while (begin != end && (*begin == ' ' || *begin == '\t' || *begin == '\r')) ++begin;
        if (begin != end) throw ParseError(line_no, "trailing tokens after edge");
        raw.emplace_back(ids[0], ids[1]);
        ++parsed;
    }
    if (raw.empty()) throw EmptyGraphError("edge list contains no edges");

    std::map<std::int64_t, NodeId> relabel;
    for (auto [a, b] : raw) {
        relabel.emplace(a, 0);
        relabel.emplace(b, 0);
    }
    LoadSummary summary;
    summary.lines_parsed = parsed;
    summary.original_ids.reserve(relabel.size());
    NodeId next_id = 0;
    for (auto& [orig, dense] : relabel) {
        dense = next_id++;
        summary.original_ids.push_back(orig);
    }

    const NodeId n = next_id;
    Graph g(n);
    std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(n));
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(raw.size());
    for (auto [a, b] : raw) {
        NodeId u = relabel[a], v = relabel[b];
        if (u == v) {
            ++summary.self_loops_dropped;
            continue;
        }
        edges.emplace_back(u, v);
    }
    // count duplicates (either direction) before simplification
    {
        std::vector<std::pair<NodeId, NodeId>> canon;
        canon.reserve(edges.size());
        for (auto [u, v] : edges) canon.emplace_back(std::min(u, v), std::max(u, v));
        std::sort(canon.begin(), canon.end());
        summary.duplicate_edges_dropped =
            canon.size() - static_cast<std::size_t>(std::unique(canon.begin(), canon.end()) - canon.begin());
    }
    return {Graph::from_edges(n, edges), std::move(summary)};
}

ComponentResult largest_connected_component(const Graph& g) {
    const NodeId n = g.num_nodes();
    if (n == 0) throw EmptyGraphError("graph has no nodes");
    std::vector<NodeId> component(static_cast<std::size_t>(n), -1);
    NodeId num_components = 0;
    std::vector<std::int64_t> sizes;
    std::vector<NodeId> min_member;
    std::vector<NodeId> queue;
    for (NodeId s = 0; s < n; ++s) {
        if (component[static_cast<std::size_t>(s)] != -1) continue;
        queue.assign(1, s);
        component[static_cast<std::size_t>(s)] = num_components;
        std::int64_t size = 0;
        while (!queue.empty()) {
            NodeId u = queue.back();
            queue.pop_back();
            ++size;
            for (NodeId v : g.neighbors(u)) {
                if (component[static_cast<std::size_t>(v)] == -1) {
                    component[static_cast<std::size_t>(v)] = num_components;
                    queue.push_back(v);
                }
            }
        }
        sizes.push_back(size);
        min_member.push_back(s);  // s is the smallest id in its component
        ++num_components;
    }
    NodeId best = 0;
    for (NodeId c = 1; c < num_components; ++c) {
        if (sizes[static_cast<std::size_t>(c)] > sizes[static_cast<std::size_t>(best)]) best = c;
        // equal sizes: earlier component already has the smaller min id
    }

    ComponentResult result;
    std::vector<NodeId> new_id(static_cast<std::size_t>(n), -1);
    for (NodeId u = 0; u < n; ++u) {
        if (component[static_cast<std::size_t>(u)] == best) {
            new_id[static_cast<std::size_t>(u)] = static_cast<NodeId>(result.original_ids.size());
            result.original_ids.push_back(u);
        }
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u : result.original_ids)
        for (NodeId v : g.neighbors(u))
            if (u < v) edges.emplace_back(new_id[static_cast<std::size_t>(u)], new_id[static_cast<std::size_t>(v)]);
    result.graph = Graph::from_edges(static_cast<NodeId>(result.original_ids.size()), edges);
    return result;
}

Graph remove_node(const Graph& g, NodeId c) {
    if (c < 0 || c >= g.num_nodes()) throw std::out_of_range("node id out of range");
    Graph h = g;
    h.detach_node(c);
    return h;
}

CoreLabels k_core_decomposition(const Graph& g) {
    const NodeId n = g.num_nodes();
    CoreLabels labels;
    labels.core_index.assign(static_cast<std::size_t>(n), 0);
    labels.in_two_core.assign(static_cast<std::size_t>(n), false);
    if (n == 0) return labels;

    // bucket-based peeling in O(n + m)
    std::vector<NodeId> deg(static_cast<std::size_t>(n));
    NodeId max_deg = 0;
    for (NodeId u = 0; u < n; ++u) {
        deg[static_cast<std::size_t>(u)] = g.degree(u);
        max_deg = std::max(max_deg, deg[static_cast<std::size_t>(u)]);
    }
    std::vector<NodeId> bucket_start(static_cast<std::size_t>(max_deg) + 2, 0);
    for (NodeId u = 0; u < n; ++u) ++bucket_start[static_cast<std::size_t>(deg[static_cast<std::size_t>(u)]) + 1];
    for (std::size_t d = 1; d < bucket_start.size(); ++d) bucket_start[d] += bucket_start[d - 1];
    std::vector<NodeId> order(static_cast<std::size_t>(n));
    std::vector<NodeId> pos(static_cast<std::size_t>(n));
    {
        auto cursor = bucket_start;
        for (NodeId u = 0; u < n; ++u) {
            pos[static_cast<std::size_t>(u)] = cursor[static_cast<std::size_t>(deg[static_cast<std::size_t>(u)])];
            order[static_cast<std::size_t>(pos[static_cast<std::size_t>(u)])] = u;
            ++cursor[static_cast<std::size_t>(deg[static_cast<std::size_t>(u)])];
        }
    }
    for (NodeId i = 0; i < n; ++i) {
        NodeId u = order[static_cast<std::size_t>(i)];
        labels.core_index[static_cast<std::size_t>(u)] = deg[static_cast<std::size_t>(u)];
        for (NodeId v : g.neighbors(u)) {
            if (deg[static_cast<std::size_t>(v)] > deg[static_cast<std::size_t>(u)]) {
                // move v one bucket down: swap it with the first node of its bucket
                NodeId dv = deg[static_cast<std::size_t>(v)];
                NodeId pv = pos[static_cast<std::size_t>(v)];
                NodeId pw = bucket_start[static_cast<std::size_t>(dv)];
                NodeId w = order[static_cast<std::size_t>(pw)];
                std::swap(order[static_cast<std::size_t>(pv)], order[static_cast<std::size_t>(pw)]);
                std::swap(pos[static_cast<std::size_t>(v)], pos[static_cast<std::size_t>(w)]);
                ++bucket_start[static_cast<std::size_t>(dv)];
                --deg[static_cast<std::size_t>(v)];
            }
        }
    }
    // peeling yields non-decreasing coreness along `order`; enforce the running max
    // to turn per-node peel degrees into proper core indices
    int running = 0;
    for (NodeId i = 0; i < n; ++i) {
        NodeId u = order[static_cast<std::size_t>(i)];
        running = std::max(running, labels.core_index[static_cast<std::size_t>(u)]);
        labels.core_index[static_cast<std::size_t>(u)] = running;
        labels.in_two_core[static_cast<std::size_t>(u)] = running >= 2;
    }
    return labels;
}

}  // namespace nbx
