#ifndef NBX_GRAPH_HPP
#define NBX_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nbx {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

struct ParseError : std::runtime_error {
    std::size_t line;
    ParseError(std::size_t line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

struct EmptyGraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Simple undirected graph: sorted adjacency lists over dense node ids 0..n-1.
/// Immutable except for detach_node(), which isolates a node in place and is
/// the primitive behind node-removal workflows that need stable ids.
class Graph {
public:
    Graph() = default;
    explicit Graph(NodeId n) : adj_(static_cast<std::size_t>(n)) {}

    /// Builds a simplified graph: self-loops dropped, duplicates collapsed,
    /// direction ignored. Endpoints must lie in [0, n).
    static Graph from_edges(NodeId n, std::span<const std::pair<NodeId, NodeId>> edges);

    NodeId num_nodes() const { return static_cast<NodeId>(adj_.size()); }
    std::int64_t num_edges() const { return m_; }

    std::span<const NodeId> neighbors(NodeId u) const {
        check_node(u);
        return adj_[static_cast<std::size_t>(u)];
    }
    NodeId degree(NodeId u) const {
        check_node(u);
        return static_cast<NodeId>(adj_[static_cast<std::size_t>(u)].size());
    }
    bool has_edge(NodeId u, NodeId v) const;

    /// Removes all edges incident to u; u keeps its id and becomes isolated.
    void detach_node(NodeId u);

    /// Checks simplicity and symmetry of the adjacency structure.
    bool is_consistent() const;

private:
    void check_node(NodeId u) const {
        if (u < 0 || u >= num_nodes()) throw std::out_of_range("node id out of range");
    }

    std::vector<std::vector<NodeId>> adj_;
    std::int64_t m_ = 0;
};

/// Canonical indexing of the 2m directed edges. Undirected edges are sorted
/// by (min endpoint, max endpoint); edge k maps to directed index 2k for
/// min->max and 2k+1 for max->min, so reverse(e) == e ^ 1.
class DirectedEdgeIndex {
public:
    explicit DirectedEdgeIndex(const Graph& g);

    EdgeId count() const { return static_cast<EdgeId>(source_.size()); }
    NodeId source(EdgeId e) const { return source_[static_cast<std::size_t>(e)]; }
    NodeId target(EdgeId e) const { return target_[static_cast<std::size_t>(e)]; }
    std::pair<NodeId, NodeId> endpoints(EdgeId e) const { return {source(e), target(e)}; }
    static EdgeId reverse(EdgeId e) { return e ^ 1; }

    /// Index of the directed edge src->dst; throws if the edge does not exist.
    EdgeId index_of(NodeId src, NodeId dst) const;

    /// Directed edges with target v, as indices into the 0..2m-1 range.
    std::span<const EdgeId> in_edges(NodeId v) const {
        auto b = in_offsets_[static_cast<std::size_t>(v)];
        auto e = in_offsets_[static_cast<std::size_t>(v) + 1];
        return {in_edges_.data() + b, static_cast<std::size_t>(e - b)};
    }

private:
    std::vector<NodeId> source_, target_;
    std::vector<std::int64_t> in_offsets_;
    std::vector<EdgeId> in_edges_;
    // out-edge ids per source, targets sorted, for index_of lookups
    std::vector<std::int64_t> out_offsets_;
    std::vector<EdgeId> out_edges_;
};

struct CoreLabels {
    std::vector<int> core_index;
    std::vector<bool> in_two_core;

    bool two_core_empty() const {
        for (bool b : in_two_core)
            if (b) return false;
        return true;
    }
};

struct LoadSummary {
    std::size_t lines_parsed = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_edges_dropped = 0;
    /// new dense id -> original id from the input file
    std::vector<std::int64_t> original_ids;
};

struct LoadedGraph {
    Graph graph;
    LoadSummary summary;
};

/// Parses a whitespace-separated edge list. Lines starting with '#' and blank
/// lines are ignored. Node ids are compacted to 0..n-1 in increasing order of
/// original id; the mapping is reported in the summary.
LoadedGraph load_edge_list(std::istream& in);

struct ComponentResult {
    Graph graph;
    /// new id -> id in the parent graph
    std::vector<NodeId> original_ids;
};

/// Induced subgraph on the largest connected component. Ties broken by the
/// smallest contained node id. Node ids are compacted preserving order.
ComponentResult largest_connected_component(const Graph& g);

/// New graph with node c isolated (all incident edges deleted). Remaining
/// node ids are unchanged; the result is not reduced to a component.
Graph remove_node(const Graph& g, NodeId c);

/// Coreness of every node via minimum-degree peeling.
CoreLabels k_core_decomposition(const Graph& g);

}  // namespace nbx

#endif
