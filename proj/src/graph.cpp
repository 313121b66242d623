#include "ellint/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace ellint {

DecoratedGraph::DecoratedGraph(std::vector<std::string> vertex_names, std::vector<Edge> edges)
    : names_(std::move(vertex_names)), edges_(std::move(edges)) {
    for (const Edge& e : edges_) {
        if (e.head < 0 || e.head >= num_vertices() || e.tail < 0 || e.tail >= num_vertices())
            throw UnknownVertex("#" + std::to_string(std::max(e.head, e.tail)));
        if (e.n < 0) throw NegativeDecoration();
    }
}

const Edge& DecoratedGraph::edge(int e) const {
    if (e < 0 || e >= num_edges()) throw InvalidEdgeIndex(e);
    return edges_[e];
}

int DecoratedGraph::vertex_index(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw UnknownVertex(name);
    return static_cast<int>(it - names_.begin());
}

DecoratedGraph build_graph(const std::vector<std::string>& vertices,
                           const std::vector<std::tuple<std::string, std::string, int>>& spec) {
    std::map<std::string, int> index;
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
        if (!index.emplace(vertices[i], i).second)
            throw Error("duplicate vertex name: " + vertices[i]);
    }
    std::vector<Edge> edges;
    edges.reserve(spec.size());
    for (const auto& [h, t, n] : spec) {
        auto ih = index.find(h);
        if (ih == index.end()) throw UnknownVertex(h);
        auto it = index.find(t);
        if (it == index.end()) throw UnknownVertex(t);
        if (n < 0) throw NegativeDecoration();
        edges.push_back({ih->second, it->second, n});
    }
    return DecoratedGraph(vertices, std::move(edges));
}

DecoratedGraph contract_edge(const DecoratedGraph& g, int e) {
    const Edge& ce = g.edge(e);
    if (ce.is_self_loop()) throw SelfLoopContraction();
    const int keep = std::min(ce.head, ce.tail);
    const int drop = std::max(ce.head, ce.tail);

    std::vector<std::string> names;
    names.reserve(g.num_vertices() - 1);
    std::vector<int> remap(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (v == drop) {
            remap[v] = keep;
        } else {
            remap[v] = static_cast<int>(names.size());
            names.push_back(g.vertex_names()[v]);
        }
    }
    // the merged vertex keeps the lower identifier; indices above `drop` shift down
    if (drop < g.num_vertices()) {
        for (int v = drop + 1; v < g.num_vertices(); ++v) remap[v] = v - 1;
        remap[drop] = remap[keep];
    }

    std::vector<Edge> edges;
    edges.reserve(g.num_edges() - 1);
    for (int i = 0; i < g.num_edges(); ++i) {
        if (i == e) continue;
        const Edge& ed = g.edges()[i];
        edges.push_back({remap[ed.head], remap[ed.tail], ed.n});
    }
    return DecoratedGraph(std::move(names), std::move(edges));
}

DecoratedGraph delete_edge(const DecoratedGraph& g, int e) {
    g.edge(e); // validates index
    std::vector<Edge> edges;
    edges.reserve(g.num_edges() - 1);
    for (int i = 0; i < g.num_edges(); ++i)
        if (i != e) edges.push_back(g.edges()[i]);
    return DecoratedGraph(g.vertex_names(), std::move(edges));
}

namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        parent[b] = a;
        return true;
    }
};

} // namespace

GraphClass classify(const DecoratedGraph& g) {
    GraphClass c;
    std::set<std::pair<int, int>> seen, multi;
    Dsu dsu(g.num_vertices());
    for (int i = 0; i < g.num_edges(); ++i) {
        const Edge& e = g.edges()[i];
        if (e.is_self_loop()) c.self_loop_edges.push_back(i);
        auto key = std::minmax(e.head, e.tail);
        if (!e.is_self_loop() && !seen.insert(key).second) multi.insert(key);
        dsu.unite(e.head, e.tail);
    }
    c.multi_edge_pairs.assign(multi.begin(), multi.end());
    int components = 0;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (dsu.find(v) == v) ++components;
    c.connected = (g.num_vertices() == 0) || components == 1;
    c.simple = c.self_loop_edges.empty() && c.multi_edge_pairs.empty();
    return c;
}

int first_betti(const DecoratedGraph& g) {
    Dsu dsu(g.num_vertices());
    for (const Edge& e : g.edges()) dsu.unite(e.head, e.tail);
    int components = 0;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (dsu.find(v) == v) ++components;
    return g.num_edges() - g.num_vertices() + components;
}

std::vector<std::vector<int>> connected_components(const DecoratedGraph& g) {
    Dsu dsu(g.num_vertices());
    for (const Edge& e : g.edges()) dsu.unite(e.head, e.tail);
    std::map<int, std::vector<int>> by_root;
    for (int v = 0; v < g.num_vertices(); ++v) by_root[dsu.find(v)].push_back(v);
    std::vector<std::vector<int>> out;
    out.reserve(by_root.size());
    for (auto& [root, verts] : by_root) out.push_back(std::move(verts));
    return out;
}

} // namespace ellint
