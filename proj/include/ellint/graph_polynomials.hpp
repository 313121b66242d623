#pragma once

#include <vector>

#include "ellint/graph.hpp"
#include "ellint/rational.hpp"

namespace ellint {

struct SelfLoopPresent : Error {
    SelfLoopPresent() : Error("graph has self-loops") {}
};
struct Disconnected : Error {
    Disconnected() : Error("graph is not connected") {}
};
struct SeedsOverlap : Error {
    SeedsOverlap() : Error("side seeds overlap") {}
};
struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& w) : Error("quadrature failure: " + w) {}
};
struct UnsupportedArity : Error {
    explicit UnsupportedArity(int k) : Error("unsupported arity k=" + std::to_string(k)) {}
};

/// Positive Schwinger time per edge, indexed like the graph's edges.
using SchwingerVector = std::vector<double>;

/// rho_{v,e} = +1 if head(e)=v, -1 if tail(e)=v, 0 otherwise. Rejects
/// self-loops (their column would be identically zero).
struct IncidenceMatrix {
    int num_vertices = 0;
    int num_edges = 0;
    std::vector<int> rho; // row-major, rho[v*num_edges + e]
    int operator()(int v, int e) const { return rho[v * num_edges + e]; }
};

IncidenceMatrix incidence(const DecoratedGraph& g);

/// The (V-1)x(V-1) matrix M(t)_{ij} = sum_e rho_{v(i),e} (1/t_e) rho_{v(j),e}
/// over the vertices other than `base`.
struct BasedGraphMatrix {
    int base = 0;
    std::vector<int> vertex_of_row;      // row index -> vertex index
    std::vector<std::vector<double>> m;  // (V-1)x(V-1), symmetric
    SchwingerVector t;
};

BasedGraphMatrix graph_matrix(const DecoratedGraph& g, const SchwingerVector& t, int base);

/// All spanning trees as edge index subsets, in increasing bitmask order.
std::vector<std::vector<int>> spanning_trees(const DecoratedGraph& g);

/// det M(t) (numeric LU). Equals sum over spanning trees of prod_{e in T} 1/t_e.
double kirchhoff_det(const DecoratedGraph& g, const SchwingerVector& t, int base);

/// P(t) = sum over spanning trees of prod_{e not in T} t_e, by enumeration.
double tree_polynomial(const DecoratedGraph& g, const SchwingerVector& t);

struct CutSet {
    std::vector<int> edges;
    std::vector<int> side1; // vertex indices of the piece containing side1 seeds
    std::vector<int> side2;
};

/// All minimal edge subsets whose removal splits g into exactly two connected
/// trees separating the seed sets, in increasing bitmask order.
std::vector<CutSet> cuts(const DecoratedGraph& g, const std::vector<int>& side1_seed,
                         const std::vector<int>& side2_seed);

/// Inverse of M(t) via the cut formula:
/// A_{ij} = (1/P(t)) sum_{C in Cut(g;{v(i),v(j)},{base})} prod_{e in C} t_e.
std::vector<std::vector<double>> inverse_via_cuts(const DecoratedGraph& g,
                                                  const SchwingerVector& t, int base);

/// (sum_i rho_{v(i),e} M^{-1}(t)_{i,j}) / t_e for row-vertex j (0-based row of
/// the based matrix).
double edge_coeff(const DecoratedGraph& g, const SchwingerVector& t, int base, int e, int j);

/// max over all (e, j) of |edge_coeff|; bounded by 2.
double edge_coeff_bound(const DecoratedGraph& g, const SchwingerVector& t, int base);

struct SchwingerResult {
    double value = 0;
    double err = 0;
    long long evaluations = 0;
};

/// Integral over [eps, L]^E of prod_e (dt_e / 4pi) / P(t), by adaptive
/// Gauss-Kronrod recursion in log coordinates.
SchwingerResult schwinger_integral(const DecoratedGraph& g, double eps, double L,
                                   double rel_tol = 1e-9, long long max_evals = 40'000'000);

/// The collapse constant
///   A(n0; n1..nk) = int_{[0,1]^k} prod du_i prod u_i^{n_i+1}
///                   / (1 + sum u_i)^{sum_{j=0..k}(n_j+2)},
/// as an exact rational. k = 0 gives 1 (empty integral).
Rational a_constant(int n0, const std::vector<int>& ns);

} // namespace ellint
