#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ellint/errors.hpp"

namespace ellint {

struct UnknownVertex : Error {
    explicit UnknownVertex(const std::string& name)
        : Error("unknown vertex: " + name) {}
};
struct NegativeDecoration : Error {
    NegativeDecoration() : Error("edge decoration must be >= 0") {}
};
struct SelfLoopContraction : Error {
    SelfLoopContraction() : Error("cannot contract a self-loop") {}
};
struct InvalidEdgeIndex : Error {
    explicit InvalidEdgeIndex(int e) : Error("invalid edge index: " + std::to_string(e)) {}
};

/// One directed decorated edge: head/tail are vertex indices, n >= 0 the
/// number of extra holomorphic derivatives carried by the edge.
struct Edge {
    int head = 0;
    int tail = 0;
    int n = 0;
    bool is_self_loop() const { return head == tail; }
};

/// Directed multigraph with per-edge decorations. Vertices are identified by
/// name; edges are addressed by their position in `edges` (parallel edges are
/// distinct). All structural operations return new graphs.
class DecoratedGraph {
public:
    DecoratedGraph() = default;
    DecoratedGraph(std::vector<std::string> vertex_names, std::vector<Edge> edges);

    int num_vertices() const { return static_cast<int>(names_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::string>& vertex_names() const { return names_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const;

    /// Index of a vertex name, or throws UnknownVertex.
    int vertex_index(const std::string& name) const;

private:
    std::vector<std::string> names_;
    std::vector<Edge> edges_;
};

struct GraphClass {
    bool connected = false;
    std::vector<int> self_loop_edges;
    std::vector<std::pair<int, int>> multi_edge_pairs; // vertex index pairs with >= 2 parallel edges
    bool simple = false;
};

/// Build a graph from named vertices and (head, tail, n) triples. Edge order
/// in `spec` is the edge index order.
DecoratedGraph build_graph(const std::vector<std::string>& vertices,
                           const std::vector<std::tuple<std::string, std::string, int>>& spec);

/// Collapse edge e, merging head and tail into the lower of the two vertex
/// indices. Rejects self-loops.
DecoratedGraph contract_edge(const DecoratedGraph& g, int e);

/// Remove edge e, keeping all vertices.
DecoratedGraph delete_edge(const DecoratedGraph& g, int e);

GraphClass classify(const DecoratedGraph& g);

/// |E| - |V| + (#connected components).
int first_betti(const DecoratedGraph& g);

/// Connected components as vertex index sets (sorted, deterministic order).
std::vector<std::vector<int>> connected_components(const DecoratedGraph& g);

} // namespace ellint
