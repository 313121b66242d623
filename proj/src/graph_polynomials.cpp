#include "ellint/graph_polynomials.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>

#include <eigen3/Eigen/Dense>

namespace ellint {

namespace {

void require_no_self_loops(const DecoratedGraph& g) {
    for (const Edge& e : g.edges())
        if (e.is_self_loop()) throw SelfLoopPresent();
}

void require_connected(const DecoratedGraph& g) {
    if (!classify(g).connected) throw Disconnected();
}

} // namespace

IncidenceMatrix incidence(const DecoratedGraph& g) {
    require_no_self_loops(g);
    IncidenceMatrix m;
    m.num_vertices = g.num_vertices();
    m.num_edges = g.num_edges();
    m.rho.assign(static_cast<size_t>(m.num_vertices) * m.num_edges, 0);
    for (int e = 0; e < g.num_edges(); ++e) {
        m.rho[g.edges()[e].head * m.num_edges + e] = 1;
        m.rho[g.edges()[e].tail * m.num_edges + e] = -1;
    }
    return m;
}

BasedGraphMatrix graph_matrix(const DecoratedGraph& g, const SchwingerVector& t, int base) {
    require_connected(g);
    IncidenceMatrix rho = incidence(g);
    if (base < 0 || base >= g.num_vertices()) throw Error("base vertex out of range");
    if (static_cast<int>(t.size()) != g.num_edges()) throw Error("schwinger vector size mismatch");
    for (double te : t)
        if (!(te > 0)) throw Error("schwinger times must be positive");

    BasedGraphMatrix out;
    out.base = base;
    out.t = t;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (v != base) out.vertex_of_row.push_back(v);
    const int n = static_cast<int>(out.vertex_of_row.size());
    out.m.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int e = 0; e < g.num_edges(); ++e)
                s += rho(out.vertex_of_row[i], e) * rho(out.vertex_of_row[j], e) / t[e];
            out.m[i][j] = s;
        }
    return out;
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
        parent[b] = a;
        return true;
    }
};

bool subset_is_spanning_tree(const DecoratedGraph& g, unsigned mask) {
    Dsu dsu(g.num_vertices());
    int used = 0;
    for (int e = 0; e < g.num_edges(); ++e) {
        if (!(mask >> e & 1u)) continue;
        const Edge& ed = g.edges()[e];
        if (!dsu.unite(ed.head, ed.tail)) return false; // cycle
        ++used;
    }
    return used == g.num_vertices() - 1;
}

} // namespace

std::vector<std::vector<int>> spanning_trees(const DecoratedGraph& g) {
    require_connected(g);
    const int E = g.num_edges();
    if (E > 24) throw Error("too many edges for tree enumeration");
    std::vector<std::vector<int>> trees;
    for (unsigned mask = 0; mask < (1u << E); ++mask) {
        if (std::popcount(mask) != g.num_vertices() - 1) continue;
        if (!subset_is_spanning_tree(g, mask)) continue;
        std::vector<int> t;
        for (int e = 0; e < E; ++e)
            if (mask >> e & 1u) t.push_back(e);
        trees.push_back(std::move(t));
    }
    return trees;
}

double kirchhoff_det(const DecoratedGraph& g, const SchwingerVector& t, int base) {
    BasedGraphMatrix M = graph_matrix(g, t, base);
    const int n = static_cast<int>(M.vertex_of_row.size());
    if (n == 0) return 1.0; // single vertex: empty matrix
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = M.m[i][j];
    return A.determinant();
}

double tree_polynomial(const DecoratedGraph& g, const SchwingerVector& t) {
    require_no_self_loops(g);
    if (!classify(g).connected) return 0.0; // no spanning trees
    double sum = 0;
    for (const auto& tree : spanning_trees(g)) {
        std::vector<char> in_tree(g.num_edges(), 0);
        for (int e : tree) in_tree[e] = 1;
        double prod = 1;
        for (int e = 0; e < g.num_edges(); ++e)
            if (!in_tree[e]) prod *= t[e];
        sum += prod;
    }
    return sum;
}

namespace {

// Components of g restricted to edges NOT in `mask`; returns component id per
// vertex and component count.
std::pair<std::vector<int>, int> components_without(const DecoratedGraph& g, unsigned mask) {
    Dsu dsu(g.num_vertices());
    for (int e = 0; e < g.num_edges(); ++e) {
        if (mask >> e & 1u) continue;
        dsu.unite(g.edges()[e].head, g.edges()[e].tail);
    }
    std::vector<int> id(g.num_vertices(), -1);
    int count = 0;
    for (int v = 0; v < g.num_vertices(); ++v) {
        int r = dsu.find(v);
        if (id[r] < 0) id[r] = count++;
        id[v] = id[r];
    }
    return {id, count};
}

// Property 1 of the cut definition: removing `mask` splits g into exactly two
// connected pieces, both acyclic, with the seed sets on opposite sides.
bool is_two_tree_split(const DecoratedGraph& g, unsigned mask, const std::vector<int>& s1,
                       const std::vector<int>& s2) {
    auto [id, count] = components_without(g, mask);
    if (count != 2) return false;
    for (int v : s1)
        if (id[v] != id[s1[0]]) return false;
    for (int v : s2)
        if (id[v] != id[s2[0]]) return false;
    if (!s1.empty() && !s2.empty() && id[s1[0]] == id[s2[0]]) return false;
    // acyclicity of both pieces: kept edges == V - 2 exactly when both are trees
    int kept = 0;
    for (int e = 0; e < g.num_edges(); ++e) {
        if (mask >> e & 1u) continue;
        // an edge internal to a component; count it
        ++kept;
    }
    return kept == g.num_vertices() - 2;
}

} // namespace

std::vector<CutSet> cuts(const DecoratedGraph& g, const std::vector<int>& side1_seed,
                         const std::vector<int>& side2_seed) {
    require_no_self_loops(g);
    require_connected(g);
    for (int a : side1_seed)
        for (int b : side2_seed)
            if (a == b) throw SeedsOverlap();
    const int E = g.num_edges();
    if (E > 24) throw Error("too many edges for cut enumeration");

    std::vector<unsigned> valid;
    for (unsigned mask = 1; mask < (1u << E); ++mask)
        if (is_two_tree_split(g, mask, side1_seed, side2_seed)) valid.push_back(mask);

    std::vector<CutSet> out;
    for (unsigned mask : valid) {
        bool minimal = true;
        for (unsigned other : valid)
            if (other != mask && (other & mask) == other) {
                minimal = false;
                break;
            }
        if (!minimal) continue;
        CutSet c;
        for (int e = 0; e < E; ++e)
            if (mask >> e & 1u) c.edges.push_back(e);
        auto [id, count] = components_without(g, mask);
        (void)count;
        const int side1_id = side1_seed.empty() ? id[0] : id[side1_seed[0]];
        for (int v = 0; v < g.num_vertices(); ++v)
            (id[v] == side1_id ? c.side1 : c.side2).push_back(v);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<std::vector<double>> inverse_via_cuts(const DecoratedGraph& g,
                                                  const SchwingerVector& t, int base) {
    BasedGraphMatrix M = graph_matrix(g, t, base);
    const int n = static_cast<int>(M.vertex_of_row.size());
    const double P = tree_polynomial(g, t);
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            std::vector<int> s1{M.vertex_of_row[i]};
            if (j != i) s1.push_back(M.vertex_of_row[j]);
            double sum = 0;
            for (const CutSet& c : cuts(g, s1, {base})) {
                double prod = 1;
                for (int e : c.edges) prod *= t[e];
                sum += prod;
            }
            A[i][j] = A[j][i] = sum / P;
        }
    return A;
}

double edge_coeff(const DecoratedGraph& g, const SchwingerVector& t, int base, int e, int j) {
    BasedGraphMatrix M = graph_matrix(g, t, base);
    const int n = static_cast<int>(M.vertex_of_row.size());
    if (e < 0 || e >= g.num_edges()) throw InvalidEdgeIndex(e);
    if (j < 0 || j >= n) throw Error("row index out of range");
    Eigen::MatrixXd A(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) A(r, c) = M.m[r][c];
    Eigen::MatrixXd inv = A.inverse();
    IncidenceMatrix rho = incidence(g);
    double s = 0;
    for (int i = 0; i < n; ++i) s += rho(M.vertex_of_row[i], e) * inv(i, j);
    return s / t[e];
}

double edge_coeff_bound(const DecoratedGraph& g, const SchwingerVector& t, int base) {
    BasedGraphMatrix M = graph_matrix(g, t, base);
    const int n = static_cast<int>(M.vertex_of_row.size());
    Eigen::MatrixXd A(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) A(r, c) = M.m[r][c];
    Eigen::MatrixXd inv = A.inverse();
    IncidenceMatrix rho = incidence(g);
    double worst = 0;
    for (int e = 0; e < g.num_edges(); ++e)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += rho(M.vertex_of_row[i], e) * inv(i, j);
            worst = std::max(worst, std::abs(s / t[e]));
        }
    return worst;
}

namespace {

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
constexpr double kKronrodX[15] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
constexpr double kKronrodW[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
constexpr double kGaussW[7] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct AdaptiveCtx {
    std::function<double(double)> f;
    long long* evals;
    long long max_evals;
};

std::pair<double, double> gk15(const AdaptiveCtx& ctx, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fk[15];
    for (int i = 0; i < 15; ++i) fk[i] = ctx.f(c + h * kKronrodX[i]);
    *ctx.evals += 15;
    double kron = 0, gauss = 0;
    for (int i = 0; i < 15; ++i) kron += kKronrodW[i] * fk[i];
    for (int i = 0; i < 7; ++i) gauss += kGaussW[i] * fk[2 * i + 1];
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

double adaptive_1d(const AdaptiveCtx& ctx, double a, double b, double tol, double* err_out,
                   int depth = 0) {
    auto [val, err] = gk15(ctx, a, b);
    if (err <= tol || depth >= 28) {
        if (depth >= 28 && err > tol) throw QuadratureFailure("max refinement depth reached");
        *err_out += err;
        return val;
    }
    if (*ctx.evals > ctx.max_evals) throw QuadratureFailure("evaluation budget exceeded");
    const double c = 0.5 * (a + b);
    return adaptive_1d(ctx, a, c, tol / 2, err_out, depth + 1) +
           adaptive_1d(ctx, c, b, tol / 2, err_out, depth + 1);
}

} // namespace

SchwingerResult schwinger_integral(const DecoratedGraph& g, double eps, double L, double rel_tol,
                                   long long max_evals) {
    require_no_self_loops(g);
    require_connected(g);
    if (!(0 < eps && eps < L)) throw Error("need 0 < eps < L");
    const int E = g.num_edges();
    const double s_lo = std::log(eps), s_hi = std::log(L);
    const double inv4pi = 1.0 / (4.0 * M_PI);

    // magnitude probe at the box center fixes the absolute tolerance scale
    const double tc = std::sqrt(eps * L);
    SchwingerVector t(E, tc);
    const double probe =
        std::pow(inv4pi * tc * (s_hi - s_lo), E) / tree_polynomial(g, t);
    double abs_tol = rel_tol * std::max(std::abs(probe), 1e-300);

    long long evals = 0;
    double err_total = 0;

    // iterated adaptive integration in log coordinates t_e = e^{s_e}; the
    // outer Kronrod estimate absorbs inner-level noise since inner levels run
    // at a tighter tolerance
    std::function<double(int, SchwingerVector&, double)> integrate_dim =
        [&](int dim, SchwingerVector& tv, double tol) -> double {
        AdaptiveCtx ctx;
        ctx.evals = &evals;
        ctx.max_evals = max_evals;
        ctx.f = [&](double s) -> double {
            tv[dim] = std::exp(s);
            const double jac = tv[dim] * inv4pi; // dt_e/4pi = t_e ds_e / 4pi
            if (dim + 1 == E) return jac / tree_polynomial(g, tv);
            return jac * integrate_dim(dim + 1, tv, 0.2 * tol / (s_hi - s_lo));
        };
        double err_here = 0;
        double v = adaptive_1d(ctx, s_lo, s_hi, tol, &err_here);
        if (dim == 0) err_total = err_here;
        return v;
    };

    SchwingerVector tv(E, eps);
    SchwingerResult res;
    res.value = integrate_dim(0, tv, abs_tol);
    res.err = err_total + std::abs(res.value) * 1e-12;
    res.evaluations = evals;
    return res;
}

Rational a_constant(int n0, const std::vector<int>& ns) {
    if (n0 < 0) throw Error("n0 must be >= 0");
    for (int n : ns)
        if (n < 0) throw Error("decorations must be >= 0");
    const int k = static_cast<int>(ns.size());
    if (k == 0) return Rational(1);
    if (k > 16) throw UnsupportedArity(k);

    // A = (prod a_i! / (M-1)!) * sum_{S subset [k]} (-1)^{|S|}
    //       sum_J coef_J(prod_{i in S} T_i) * (n0+1+J)! / (1+|S|)^{n0+2+J}
    // with a_i = n_i + 1, M = sum_{j=0..k} (n_j + 2), T_i(s) = sum_{j<=a_i} s^j / j!.
    int M = n0 + 2;
    for (int n : ns) M += n + 2;

    auto factorial = [](int n) {
        BigInt f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };

    Rational total(0);
    for (unsigned S = 0; S < (1u << k); ++S) {
        // polynomial prod_{i in S} T_i as rational coefficients in s
        std::vector<Rational> poly{Rational(1)};
        int bits = 0;
        for (int i = 0; i < k; ++i) {
            if (!(S >> i & 1u)) continue;
            ++bits;
            const int a = ns[i] + 1;
            std::vector<Rational> ti(a + 1);
            for (int j = 0; j <= a; ++j) ti[j] = Rational(BigInt(1), factorial(j));
            std::vector<Rational> prod(poly.size() + a, Rational(0));
            for (size_t p = 0; p < poly.size(); ++p)
                for (int j = 0; j <= a; ++j) prod[p + j] = prod[p + j] + poly[p] * ti[j];
            poly = std::move(prod);
        }
        const int sgn = (bits % 2 == 0) ? 1 : -1;
        for (size_t J = 0; J < poly.size(); ++J) {
            if (poly[J] == Rational(0)) continue;
            BigInt denpow = 1;
            for (int p = 0; p < n0 + 2 + static_cast<int>(J); ++p) denpow *= (1 + bits);
            Rational term = poly[J] * Rational(factorial(n0 + 1 + static_cast<int>(J)), denpow);
            total = total + (sgn > 0 ? term : -term);
        }
    }
    BigInt pref_num = 1;
    for (int n : ns) pref_num *= factorial(n + 1);
    return total * Rational(pref_num, factorial(M - 1));
}

} // namespace ellint
