#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace edgepp {

using NodeId = std::uint32_t;

/// Undirected node pair stored in canonical order (first < second).
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Degree of every node, indexed by NodeId.
using DegreeSequence = std::vector<std::uint32_t>;

/// One flag per node; nonzero means active.
using ActiveMask = std::vector<std::uint8_t>;

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Edge-list parse failure carrying the 1-based line number of the offending line.
class ParseError : public GraphError {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Sparse undirected simple graph.
///
/// Immutable after construction. Edges are kept sorted lexicographically and
/// deduplicated; adjacency is a CSR array of sorted neighbor lists. Dense
/// adjacency matrices are never built.
class Graph {
public:
    Graph() = default;

    /// Builds from an arbitrary list of pairs. Orientation is canonicalized and
    /// duplicates collapse. Throws GraphError on self-loops or indices >= n.
    Graph(std::size_t n, std::span<const Edge> edges);
    Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges);

    /// Builds from pairs already canonical, sorted and unique. Not validated
    /// beyond debug assertions; used on hot paths that construct graphs from
    /// filtered subsets of another graph's edges.
    static Graph from_sorted_unique(std::size_t n, std::vector<Edge> edges);

    std::size_t num_nodes() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::span<const NodeId> neighbors(NodeId v) const noexcept {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

    /// O(log d) membership test on the sorted neighbor list of the smaller endpoint.
    bool has_edge(NodeId a, NodeId b) const noexcept;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    void build_adjacency();

    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> adj_;
};

/// Parses the edge-list text format: whitespace-separated `u v` pairs, `#`
/// comments, blank lines ignored, optional first data line `N <n>` fixing the
/// node count. LF and CRLF both accepted.
Graph parse_edge_list(std::string_view text);

/// Reads and parses a file. Throws GraphError if the file cannot be opened.
Graph load_edge_list(const std::string& path);

/// Serializes with LF endings and pairs in lexicographic order. The `N <n>`
/// header is emitted whenever the node count is not implied by the largest
/// endpoint (trailing isolated nodes, or no edges at all).
std::string format_edge_list(const Graph& g);
void save_edge_list(const Graph& g, const std::string& path);

DegreeSequence degree_sequence(const Graph& g);

/// |E(generated) ∩ E(reference)| / max(|E(reference)|, 1).
double edge_overlap(const Graph& generated, const Graph& reference);

/// Number of edges with both endpoints active, i.e. (s^T A s) / 2.
std::size_t active_subgraph_edge_count(const Graph& g, const ActiveMask& s);

/// s_i = 1 iff node i's degree differs between the two graphs.
ActiveMask active_mask_between(const Graph& before, const Graph& after);

}  // namespace edgepp
