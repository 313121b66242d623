#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "ellint/graph_polynomials.hpp"

using namespace ellint;

namespace {

DecoratedGraph single_edge() { return build_graph({"a", "b"}, {{"a", "b", 0}}); }
DecoratedGraph banana2() { return build_graph({"a", "b"}, {{"a", "b", 0}, {"a", "b", 0}}); }
DecoratedGraph triangle() {
    return build_graph({"a", "b", "c"}, {{"a", "b", 0}, {"b", "c", 0}, {"c", "a", 0}});
}

// test-side spanning tree counter independent of the production enumeration:
// Kirchhoff with all t = 1 counts trees
long long count_trees_kirchhoff(const DecoratedGraph& g) {
    SchwingerVector t(g.num_edges(), 1.0);
    return std::llround(kirchhoff_det(g, t, g.num_vertices() - 1));
}

std::mt19937 rng(20240811);
double rand_t() { return std::uniform_real_distribution<double>(0.1, 10.0)(rng); }

} // namespace

TEST_CASE("incidence") {
    auto m1 = incidence(single_edge());
    CHECK(m1(0, 0) == 1);  // head a
    CHECK(m1(1, 0) == -1); // tail b

    auto m3 = incidence(triangle());
    for (int e = 0; e < 3; ++e) {
        int sum = 0, nonzero = 0;
        for (int v = 0; v < 3; ++v) {
            sum += m3(v, e);
            nonzero += m3(v, e) != 0;
        }
        CHECK(sum == 0);
        CHECK(nonzero == 2);
    }

    CHECK_THROWS_AS(incidence(build_graph({"a"}, {{"a", "a", 0}})), SelfLoopPresent);
}

TEST_CASE("graph_matrix") {
    // single edge, base = tail -> [1/t0]
    auto M = graph_matrix(single_edge(), {2.0}, 1);
    REQUIRE(M.m.size() == 1);
    CHECK(M.m[0][0] == doctest::Approx(0.5).epsilon(1e-14));

    // banana-2 -> [1/t0 + 1/t1]
    auto Mb = graph_matrix(banana2(), {2.0, 4.0}, 1);
    CHECK(Mb.m[0][0] == doctest::Approx(0.75).epsilon(1e-14));

    // triangle: diagonal = sum of incident 1/t_e, off-diagonal = -1/t_shared
    SchwingerVector t = {rand_t(), rand_t(), rand_t()};
    auto Mt = graph_matrix(triangle(), t, 2);
    CHECK(Mt.m[0][0] == doctest::Approx(1 / t[0] + 1 / t[2]).epsilon(1e-13));
    CHECK(Mt.m[1][1] == doctest::Approx(1 / t[0] + 1 / t[1]).epsilon(1e-13));
    CHECK(Mt.m[0][1] == doctest::Approx(-1 / t[0]).epsilon(1e-13));
    CHECK(Mt.m[0][1] == doctest::Approx(Mt.m[1][0]).epsilon(1e-14));
}

TEST_CASE("spanning_trees") {
    CHECK(spanning_trees(single_edge()) == std::vector<std::vector<int>>{{0}});
    CHECK(spanning_trees(banana2()) == std::vector<std::vector<int>>{{0}, {1}});
    auto trees = spanning_trees(triangle());
    CHECK(trees == std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}});
    CHECK_THROWS_AS(spanning_trees(build_graph({"a", "b"}, {})), Disconnected);

    // counts agree with the Kirchhoff route on a batch of random graphs
    for (int trial = 0; trial < 30; ++trial) {
        const int nv = 2 + int(rng() % 4);
        std::vector<std::string> names;
        for (int i = 0; i < nv; ++i) names.push_back(std::string(1, char('a' + i)));
        std::vector<std::tuple<std::string, std::string, int>> spec;
        for (int i = 0; i + 1 < nv; ++i) spec.emplace_back(names[i], names[i + 1], 0);
        for (int i = 0; i < int(rng() % 4); ++i) {
            int u = int(rng() % nv), v = int(rng() % nv);
            if (u != v) spec.emplace_back(names[u], names[v], 0);
        }
        auto g = build_graph(names, spec);
        CHECK(static_cast<long long>(spanning_trees(g).size()) == count_trees_kirchhoff(g));
    }
}

TEST_CASE("kirchhoff determinant and tree polynomial") {
    // single edge: det = 1/t0, P = 1
    CHECK(kirchhoff_det(single_edge(), {3.0}, 1) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(tree_polynomial(single_edge(), {3.0}) == doctest::Approx(1.0).epsilon(1e-14));

    SchwingerVector tb = {rand_t(), rand_t()};
    CHECK(kirchhoff_det(banana2(), tb, 1) ==
          doctest::Approx(1 / tb[0] + 1 / tb[1]).epsilon(1e-13));
    CHECK(tree_polynomial(banana2(), tb) == doctest::Approx(tb[0] + tb[1]).epsilon(1e-13));

    SchwingerVector tt = {rand_t(), rand_t(), rand_t()};
    CHECK(kirchhoff_det(triangle(), tt, 0) ==
          doctest::Approx(1 / (tt[0] * tt[1]) + 1 / (tt[0] * tt[2]) + 1 / (tt[1] * tt[2]))
              .epsilon(1e-12));
    CHECK(tree_polynomial(triangle(), tt) ==
          doctest::Approx(tt[0] + tt[1] + tt[2]).epsilon(1e-13));
}

TEST_CASE("matrix-tree identity, base independence, P = det * prod t") {
    for (int trial = 0; trial < 60; ++trial) {
        const int nv = 2 + int(rng() % 4); // up to 5 vertices
        std::vector<std::string> names;
        for (int i = 0; i < nv; ++i) names.push_back(std::string(1, char('a' + i)));
        std::vector<std::tuple<std::string, std::string, int>> spec;
        for (int i = 0; i + 1 < nv; ++i) spec.emplace_back(names[i], names[i + 1], 0);
        for (int i = 0; i < int(rng() % 4); ++i) {
            int u = int(rng() % nv), v = int(rng() % nv);
            if (u != v) spec.emplace_back(names[u], names[v], 0);
        }
        auto g = build_graph(names, spec);
        if (g.num_edges() > 7) continue;
        SchwingerVector t(g.num_edges());
        for (double& x : t) x = rand_t();

        const double det = kirchhoff_det(g, t, nv - 1);
        double tree_sum = 0; // sum over trees of prod_{e in T} 1/t_e
        for (const auto& tree : spanning_trees(g)) {
            double p = 1;
            for (int e : tree) p /= t[e];
            tree_sum += p;
        }
        CHECK(std::abs(det - tree_sum) <= 1e-10 * std::abs(det));

        for (int base = 0; base < nv; ++base)
            CHECK(kirchhoff_det(g, t, base) == doctest::Approx(det).epsilon(1e-12));

        double prod_t = 1;
        for (double x : t) prod_t *= x;
        CHECK(tree_polynomial(g, t) == doctest::Approx(det * prod_t).epsilon(1e-12));
    }
}

TEST_CASE("cuts") {
    auto c1 = cuts(single_edge(), {0}, {1});
    REQUIRE(c1.size() == 1);
    CHECK(c1[0].edges == std::vector<int>{0});

    auto cb = cuts(banana2(), {0}, {1});
    REQUIRE(cb.size() == 1);
    CHECK(cb[0].edges == std::vector<int>{0, 1});

    // triangle a..c: exactly the 2-edge subsets isolating a from c with both
    // sides connected
    // every a|c cut must contain the direct edge e2 plus one of e0, e1
    auto ct = cuts(triangle(), {0}, {2});
    REQUIRE(ct.size() == 2);
    std::set<std::vector<int>> expect = {{0, 2}, {1, 2}};
    std::set<std::vector<int>> actual;
    for (const auto& c : ct) actual.insert(c.edges);
    CHECK(actual == expect);

    CHECK_THROWS_AS(cuts(triangle(), {0, 1}, {1}), SeedsOverlap);
}

TEST_CASE("inverse via cuts") {
    auto A1 = inverse_via_cuts(single_edge(), {2.5}, 1);
    CHECK(A1[0][0] == doctest::Approx(2.5).epsilon(1e-14));

    SchwingerVector tb = {rand_t(), rand_t()};
    auto Ab = inverse_via_cuts(banana2(), tb, 1);
    CHECK(Ab[0][0] == doctest::Approx(tb[0] * tb[1] / (tb[0] + tb[1])).epsilon(1e-13));

    for (int trial = 0; trial < 20; ++trial) {
        SchwingerVector t = {rand_t(), rand_t(), rand_t()};
        auto A = inverse_via_cuts(triangle(), t, 2);
        auto M = graph_matrix(triangle(), t, 2);
        double worst = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double s = 0;
                for (int k = 0; k < 2; ++k) s += A[i][k] * M.m[k][j];
                worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
            }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("edge coefficients bounded by 2") {
    CHECK(edge_coeff(single_edge(), {rand_t()}, 1, 0, 0) == doctest::Approx(1.0).epsilon(1e-13));

    SchwingerVector tb = {rand_t(), rand_t()};
    CHECK(edge_coeff(banana2(), tb, 1, 0, 0) ==
          doctest::Approx(tb[1] / (tb[0] + tb[1])).epsilon(1e-13));

    double worst = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        SchwingerVector t = {rand_t(), rand_t(), rand_t()};
        worst = std::max(worst, edge_coeff_bound(triangle(), t, int(rng() % 3)));
    }
    CHECK(worst <= 2.0 + 1e-12);
}

TEST_CASE("deletion-contraction of the tree polynomial") {
    // P_G(t) = P_{G/e}(t') + t_e P_{G\e}(t') for non-bridge e
    for (int trial = 0; trial < 40; ++trial) {
        const int nv = 2 + int(rng() % 3);
        std::vector<std::string> names;
        for (int i = 0; i < nv; ++i) names.push_back(std::string(1, char('a' + i)));
        std::vector<std::tuple<std::string, std::string, int>> spec;
        for (int i = 0; i + 1 < nv; ++i) spec.emplace_back(names[i], names[i + 1], 0);
        for (int i = 0; i < 1 + int(rng() % 3); ++i) {
            int u = int(rng() % nv), v = int(rng() % nv);
            if (u != v) spec.emplace_back(names[u], names[v], 0);
        }
        auto g = build_graph(names, spec);
        if (g.num_edges() > 7) continue;
        SchwingerVector t(g.num_edges());
        for (double& x : t) x = rand_t();
        for (int e = 0; e < g.num_edges(); ++e) {
            auto gd = delete_edge(g, e);
            if (!classify(gd).connected) continue; // bridge
            auto gc = contract_edge(g, e);
            SchwingerVector t_rest;
            for (int i = 0; i < g.num_edges(); ++i)
                if (i != e) t_rest.push_back(t[i]);
            // contraction can create self-loops (edges parallel to e); a
            // self-loop is in no spanning tree, so its t multiplies every term
            std::vector<Edge> keep;
            SchwingerVector t_keep;
            double loop_factor = 1;
            for (int i = 0; i < gc.num_edges(); ++i) {
                if (gc.edges()[i].is_self_loop())
                    loop_factor *= t_rest[i];
                else {
                    keep.push_back(gc.edges()[i]);
                    t_keep.push_back(t_rest[i]);
                }
            }
            DecoratedGraph gcs(gc.vertex_names(), keep);
            const double lhs = tree_polynomial(g, t);
            const double rhs = loop_factor * tree_polynomial(gcs, t_keep) +
                               t[e] * tree_polynomial(gd, t_rest);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    }
}

TEST_CASE("schwinger integral") {
    // single edge: (L - eps)/4pi exactly
    auto r1 = schwinger_integral(single_edge(), 0.25, 2.0);
    CHECK(r1.value == doctest::Approx((2.0 - 0.25) / (4 * M_PI)).epsilon(1e-10));

    // banana-2 closed form at eps -> 0:
    // int_{[0,L]^2} dt dt'/(t+t') = 2 L ln 2, so W -> L ln2 / (8 pi^2)
    auto rb = schwinger_integral(banana2(), 1e-8, 1.0);
    const double exact = std::log(2.0) / (8 * M_PI * M_PI);
    CHECK(std::abs(rb.value - exact) < 1e-6);
    CHECK(std::abs(rb.value - exact) < 5 * (rb.err + 1e-7 * exact));

    // triangle: eps-refinement stays within the reported error estimates
    auto t3 = schwinger_integral(triangle(), 1e-3, 1.0, 1e-7);
    auto t4 = schwinger_integral(triangle(), 1e-4, 1.0, 1e-7);
    CHECK(std::abs(t4.value - t3.value) < 0.02 * std::abs(t4.value));

    // Cauchy in eps: successive differences shrink
    double prev = 0, dprev = 1e300;
    for (int k = 1; k <= 4; ++k) {
        auto r = schwinger_integral(banana2(), std::pow(10.0, -k), 1.0, 1e-8);
        if (k > 1) {
            const double d = std::abs(r.value - prev);
            CHECK(d < dprev);
            dprev = d;
        }
        prev = r.value;
    }
}

TEST_CASE("a_constant exact rationals") {
    CHECK(a_constant(3, {}) == Rational(1)); // empty integral
    CHECK(a_constant(0, {0}) == Rational(1, 12));
    CHECK(a_constant(1, {0}) == Rational(11, 192)); // hand antiderivative

    // all k <= 2, entries <= 3: exact value matches quadrature to 1e-12
    auto quad = [](int n0, const std::vector<int>& ns) {
        const int k = static_cast<int>(ns.size());
        int M = n0 + 2;
        for (int n : ns) M += n + 2;
        // tensor Gauss-Legendre on [0,1]^k
        const int m = 48;
        static std::vector<double> x, w;
        if (x.empty()) {
            x.resize(m);
            w.resize(m);
            for (int i = 0; i < m; ++i) {
                // Chebyshev initial guess + Newton on Legendre
                double t = std::cos(M_PI * (i + 0.75) / (m + 0.5));
                for (int it = 0; it < 100; ++it) {
                    double p0 = 1, p1 = 0;
                    for (int kk = 0; kk < m; ++kk) {
                        double p2 = p1;
                        p1 = p0;
                        p0 = ((2 * kk + 1) * t * p1 - kk * p2) / (kk + 1);
                    }
                    double dp = m * (t * p0 - p1) / (t * t - 1);
                    double dt = p0 / dp;
                    t -= dt;
                    if (std::abs(dt) < 1e-15) break;
                }
                double p0 = 1, p1 = 0;
                for (int kk = 0; kk < m; ++kk) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2 * kk + 1) * t * p1 - kk * p2) / (kk + 1);
                }
                double dp = m * (t * p0 - p1) / (t * t - 1);
                x[i] = 0.5 * (1 - t); // map to [0,1] (order irrelevant)
                w[i] = 1.0 / ((1 - t * t) * dp * dp);
            }
        }
        double total = 0;
        std::vector<int> idx(k, 0);
        while (true) {
            double u_sum = 1, prod_w = 1, prod_u = 1;
            for (int d = 0; d < k; ++d) {
                const double u = x[idx[d]];
                u_sum += u;
                prod_w *= w[idx[d]];
                prod_u *= std::pow(u, ns[d] + 1);
            }
            total += prod_w * prod_u / std::pow(u_sum, M);
            int d = 0;
            for (; d < k; ++d) {
                if (++idx[d] < m) break;
                idx[d] = 0;
            }
            if (d == k) break;
        }
        return total;
    };

    for (int n0 = 0; n0 <= 3; ++n0)
        for (int n1 = 0; n1 <= 3; ++n1) {
            CHECK(a_constant(n0, {n1}).to_double() ==
                  doctest::Approx(quad(n0, {n1})).epsilon(1e-12));
            for (int n2 = 0; n2 <= 3; ++n2)
                CHECK(a_constant(n0, {n1, n2}).to_double() ==
                      doctest::Approx(quad(n0, {n1, n2})).epsilon(1e-12));
        }

    CHECK(a_constant(0, {0}).to_string() == "1/12");
}
