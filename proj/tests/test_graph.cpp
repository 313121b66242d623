#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ellint/graph.hpp"

using namespace ellint;

namespace {

DecoratedGraph triangle() {
    return build_graph({"a", "b", "c"}, {{"a", "b", 0}, {"b", "c", 0}, {"c", "a", 0}});
}
DecoratedGraph banana2() {
    return build_graph({"a", "b"}, {{"a", "b", 0}, {"a", "b", 0}});
}

} // namespace

TEST_CASE("build_graph basics") {
    auto g = build_graph({"a", "b"}, {{"a", "b", 0}});
    CHECK(g.num_vertices() == 2);
    CHECK(g.num_edges() == 1);
    CHECK(classify(g).simple);

    auto t = triangle();
    CHECK(t.num_edges() == 3);
    CHECK(classify(t).simple);
    CHECK(classify(t).connected);

    CHECK_THROWS_AS(build_graph({"a"}, {{"a", "z", 0}}), UnknownVertex);
    CHECK_THROWS_AS(build_graph({"a", "b"}, {{"a", "b", -1}}), NegativeDecoration);
    CHECK_THROWS_AS(build_graph({"a", "a"}, {}), Error);
}

TEST_CASE("contract_edge") {
    auto single = build_graph({"a", "b"}, {{"a", "b", 0}});
    auto c1 = contract_edge(single, 0);
    CHECK(c1.num_vertices() == 1);
    CHECK(c1.num_edges() == 0);

    auto c2 = contract_edge(triangle(), 0); // banana-2
    CHECK(c2.num_vertices() == 2);
    CHECK(c2.num_edges() == 2);
    auto cls2 = classify(c2);
    CHECK(!cls2.simple);
    CHECK(cls2.multi_edge_pairs.size() == 1);

    auto c3 = contract_edge(banana2(), 0); // one vertex with a self-loop
    CHECK(c3.num_vertices() == 1);
    CHECK(c3.num_edges() == 1);
    CHECK(classify(c3).self_loop_edges == std::vector<int>{0});

    CHECK_THROWS_AS(contract_edge(c3, 0), SelfLoopContraction);
    CHECK_THROWS_AS(contract_edge(single, 5), InvalidEdgeIndex);

    // merged vertex takes the lower identifier
    auto g = build_graph({"a", "b", "c"}, {{"b", "c", 2}, {"a", "b", 0}});
    auto gc = contract_edge(g, 0);
    CHECK(gc.vertex_names() == std::vector<std::string>{"a", "b"});
    CHECK(gc.edges()[0].n == 0); // surviving edge keeps its decoration
}

TEST_CASE("delete_edge") {
    auto single = build_graph({"a", "b"}, {{"a", "b", 0}});
    auto d1 = delete_edge(single, 0);
    CHECK(d1.num_vertices() == 2);
    CHECK(d1.num_edges() == 0);
    CHECK(!classify(d1).connected);

    auto d2 = delete_edge(triangle(), 1); // path on 3 vertices
    CHECK(d2.num_edges() == 2);
    CHECK(classify(d2).connected);
    CHECK(first_betti(d2) == 0);

    auto d3 = delete_edge(banana2(), 0);
    CHECK(d3.num_edges() == 1);
    CHECK(classify(d3).simple);

    CHECK_THROWS_AS(delete_edge(single, 1), InvalidEdgeIndex);
}

TEST_CASE("classify") {
    auto b = classify(banana2());
    CHECK(b.connected);
    CHECK(!b.simple);
    CHECK(b.multi_edge_pairs == std::vector<std::pair<int, int>>{{0, 1}});

    auto loop = build_graph({"a"}, {{"a", "a", 0}});
    CHECK(classify(loop).self_loop_edges == std::vector<int>{0});

    auto iso = build_graph({"a", "b"}, {});
    CHECK(!classify(iso).connected);
}

TEST_CASE("first_betti") {
    auto tree = build_graph({"a", "b", "c", "d"}, {{"a", "b", 0}, {"b", "c", 0}, {"b", "d", 0}});
    CHECK(first_betti(tree) == 0);
    CHECK(first_betti(triangle()) == 1);
    CHECK(first_betti(banana2()) == 1);
}

TEST_CASE("contraction preserves loop number, deletion drops it on cycles") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const int nv = 2 + int(rng() % 4);
        std::vector<std::string> names;
        for (int i = 0; i < nv; ++i) names.push_back(std::string(1, char('a' + i)));
        std::vector<std::tuple<std::string, std::string, int>> spec;
        // random connected graph: a spanning path plus extras
        for (int i = 0; i + 1 < nv; ++i) spec.emplace_back(names[i], names[i + 1], 0);
        const int extra = int(rng() % 3);
        for (int i = 0; i < extra; ++i) {
            int u = int(rng() % nv), v = int(rng() % nv);
            if (u == v) continue;
            spec.emplace_back(names[u], names[v], 0);
        }
        auto g = build_graph(names, spec);
        const int b = first_betti(g);
        for (int e = 0; e < g.num_edges(); ++e) {
            if (g.edges()[e].is_self_loop()) continue;
            CHECK(first_betti(contract_edge(g, e)) == b);
            auto gd = delete_edge(g, e);
            // deletion keeps betti iff e lay on a cycle, else splits a component
            if (first_betti(gd) == b)
                CHECK(!classify(gd).connected);
            else
                CHECK(first_betti(gd) == b - 1);
        }
    }
}

TEST_CASE("contract and delete commute on disjoint edge pairs") {
    // square with a chord: edges 0..4
    auto g = build_graph({"a", "b", "c", "d"},
                         {{"a", "b", 0}, {"b", "c", 0}, {"c", "d", 0}, {"d", "a", 0}, {"a", "c", 0}});
    // contract edge 1 then delete (shifted) edge 3->2 vs delete edge 3 then contract edge 1
    auto path1 = delete_edge(contract_edge(g, 1), 2); // edge 3 shifts down by one
    auto path2 = contract_edge(delete_edge(g, 3), 1);
    CHECK(path1.num_vertices() == path2.num_vertices());
    CHECK(path1.num_edges() == path2.num_edges());
    for (int e = 0; e < path1.num_edges(); ++e) {
        CHECK(path1.edges()[e].head == path2.edges()[e].head);
        CHECK(path1.edges()[e].tail == path2.edges()[e].tail);
    }
}

TEST_CASE("simple graphs never hit SelfLoopContraction") {
    auto g = triangle();
    REQUIRE(classify(g).simple);
    for (int e = 0; e < g.num_edges(); ++e) CHECK_NOTHROW(contract_edge(g, e));
}
