#include "ellint/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <eigen3/Eigen/Dense>

#include "ellint/fft.hpp"
#include "ellint/parallel.hpp"

namespace ellint {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

int next_pow2(int n) {
    int p = 2;
    while (p < n) p <<= 1;
    return p;
}

// ---------------------------------------------------------------------------
// grid tensor contraction
//
// A component integral is a sum over grid assignments of one torus point per
// free vertex, each edge contributing table[(z_head - z_tail) index]. Leaf and
// series vertices are summed out exactly (the same finite sum, reordered);
// anything left is brute-forced under the budget.
// ---------------------------------------------------------------------------

using Grid = std::vector<Complex>; // row-major N x N

struct EdgeFactor {
    int u = 0, v = 0; // factor is tab[(z_u - z_v) index]; u == -1 means pinned... (never)
    Grid tab;
};

size_t neg_index(size_t idx, int N) {
    const int i = static_cast<int>(idx) / N, j = static_cast<int>(idx) % N;
    return static_cast<size_t>((N - i) % N) * N + (N - j) % N;
}

Grid oriented(const Grid& tab, bool flip, int N) {
    if (!flip) return tab;
    Grid out(tab.size());
    for (size_t idx = 0; idx < tab.size(); ++idx) out[idx] = tab[neg_index(idx, N)];
    return out;
}

Complex grid_sum(const Grid& g) {
    // deterministic blocked accumulation
    Complex total = 0;
    for (size_t i = 0; i < g.size(); ++i) total += g[i];
    return total;
}

// correlation h(s) = (1/N^2) sum_x a(x) b(x + s), via FFT
Grid correlate(const Grid& a, const Grid& b, int N) {
    Grid A = a, B = b;
    detail::fft2d(A, N, -1);
    detail::fft2d(B, N, -1);
    Grid C(a.size());
    for (size_t idx = 0; idx < C.size(); ++idx) C[idx] = A[neg_index(idx, N)] * B[idx];
    detail::fft2d(C, N, +1);
    const double scale = 1.0 / (static_cast<double>(N) * N * N * N);
    for (Complex& c : C) c *= scale;
    return C;
}

struct Contraction {
    int N;
    int pinned;                   // vertex index fixed at z = 0
    std::vector<EdgeFactor> edges;
    long long budget;

    Complex run() {
        Complex scalar = 1.0;
        const double inv_n2 = 1.0 / (static_cast<double>(N) * N);
        std::map<int, int> degree;

        auto recount = [&] {
            degree.clear();
            for (const EdgeFactor& e : edges) {
                ++degree[e.u];
                ++degree[e.v];
            }
        };
        auto merge_parallels = [&] {
            for (size_t i = 0; i < edges.size(); ++i)
                for (size_t j = i + 1; j < edges.size();) {
                    const bool same = edges[j].u == edges[i].u && edges[j].v == edges[i].v;
                    const bool swapped = edges[j].u == edges[i].v && edges[j].v == edges[i].u;
                    if (same || swapped) {
                        Grid o = oriented(edges[j].tab, swapped, N);
                        for (size_t idx = 0; idx < o.size(); ++idx) edges[i].tab[idx] *= o[idx];
                        edges.erase(edges.begin() + j);
                    } else {
                        ++j;
                    }
                }
        };

        while (true) {
            merge_parallels();
            recount();
            int pick = -1, pick_deg = 3;
            for (const auto& [v, d] : degree) {
                if (v == pinned) continue;
                if (d <= 2 && (pick < 0 || d < pick_deg || (d == pick_deg && v < pick))) {
                    pick = v;
                    pick_deg = d;
                }
            }
            if (pick < 0) break;
            if (pick_deg == 1) {
                for (size_t i = 0; i < edges.size(); ++i)
                    if (edges[i].u == pick || edges[i].v == pick) {
                        scalar *= inv_n2 * grid_sum(edges[i].tab);
                        edges.erase(edges.begin() + i);
                        break;
                    }
            } else {
                // series vertex: two edges to distinct neighbors a, b
                int ia = -1, ib = -1;
                for (size_t i = 0; i < edges.size(); ++i)
                    if (edges[i].u == pick || edges[i].v == pick) {
                        if (ia < 0)
                            ia = static_cast<int>(i);
                        else
                            ib = static_cast<int>(i);
                    }
                EdgeFactor& ea = edges[ia];
                EdgeFactor& eb = edges[ib];
                const int a = (ea.u == pick) ? ea.v : ea.u;
                const int b = (eb.u == pick) ? eb.v : eb.u;
                // express both as functions of (z_pick - z_neighbor)
                Grid ga = oriented(ea.tab, ea.u != pick, N);
                Grid gb = oriented(eb.tab, eb.u != pick, N);
                // sum_x ga(x) gb(x + (z_a - z_b)) -> new factor of z_a - z_b
                EdgeFactor ne;
                ne.u = a;
                ne.v = b;
                ne.tab = correlate(ga, gb, N);
                edges.erase(edges.begin() + std::max(ia, ib));
                edges.erase(edges.begin() + std::min(ia, ib));
                edges.push_back(std::move(ne));
            }
        }

        // collect remaining free vertices
        std::vector<int> free;
        for (const auto& [v, d] : degree)
            if (v != pinned && d > 0) free.push_back(v);
        if (edges.empty() || free.empty()) return scalar;

        const int F = static_cast<int>(free.size());
        double cost = static_cast<double>(edges.size());
        for (int i = 0; i < 2 * F; ++i) cost *= N;
        if (cost > static_cast<double>(budget))
            throw QuadratureBudgetExceeded(std::to_string(F) + " free vertices on a " +
                                           std::to_string(N) + "-grid");

        std::map<int, int> slot;
        for (int i = 0; i < F; ++i) slot[free[i]] = i;
        slot[pinned] = -1;

        const size_t n2 = static_cast<size_t>(N) * N;
        std::vector<Complex> partial(n2, Complex(0));
        parallel_for(static_cast<int>(n2), [&](int first) {
            std::vector<size_t> pos(F, 0);
            pos[0] = static_cast<size_t>(first);
            // iterate the remaining F-1 coordinates
            std::vector<size_t> idx(F - 1, 0);
            Complex acc = 0;
            while (true) {
                Complex prod = 1.0;
                for (const EdgeFactor& e : edges) {
                    const size_t zu = (slot[e.u] < 0) ? 0 : pos[slot[e.u]];
                    const size_t zv = (slot[e.v] < 0) ? 0 : pos[slot[e.v]];
                    // index of z_u - z_v
                    const int iu = static_cast<int>(zu) / N, ju = static_cast<int>(zu) % N;
                    const int iv = static_cast<int>(zv) / N, jv = static_cast<int>(zv) % N;
                    const size_t d = static_cast<size_t>((iu - iv + N) % N) * N + (ju - jv + N) % N;
                    prod *= e.tab[d];
                }
                acc += prod;
                int k = 0;
                for (; k < F - 1; ++k) {
                    if (++idx[k] < n2) {
                        pos[k + 1] = idx[k];
                        break;
                    }
                    idx[k] = 0;
                    pos[k + 1] = 0;
                }
                if (k == F - 1) break;
            }
            partial[first] = acc;
        });
        Complex total = 0;
        for (const Complex& p : partial) total += p;
        double inv = 1.0;
        for (int i = 0; i < F; ++i) inv *= inv_n2;
        return scalar * total * inv;
    }
};

// ---------------------------------------------------------------------------
// per-component evaluation
// ---------------------------------------------------------------------------

struct Component {
    std::vector<int> vertices;       // original vertex ids, ascending
    std::vector<Edge> edges;         // endpoints as positions into `vertices`
};

int grid_size_for(const QuadratureControl& ctl, double eps) {
    const double base = ctl.eps_schedule.empty() ? eps : ctl.eps_schedule.front();
    const double n = ctl.grid_per_dim * std::sqrt(std::max(1.0, base / eps));
    return next_pow2(static_cast<int>(std::ceil(n)));
}

Complex component_value_regulated(const Component& comp, const ModularPoint& tau,
                                  const QuadratureControl& ctl, double eps, int N) {
    std::map<int, Grid> tables;
    for (const Edge& e : comp.edges)
        if (!tables.count(e.n))
            tables[e.n] =
                bcov_propagator_grid(tau, RegularizationWindow(eps, ctl.L), e.n, N, ctl.sums);
    Contraction c;
    c.N = N;
    c.pinned = static_cast<int>(comp.vertices.size()) - 1;
    c.budget = ctl.budget;
    for (const Edge& e : comp.edges) {
        EdgeFactor f;
        f.u = e.head;
        f.v = e.tail;
        f.tab = tables[e.n];
        c.edges.push_back(std::move(f));
    }
    return c.run();
}

double flat_distance(Complex z, const ModularPoint& tau) {
    const double y = tau.im;
    double b = z.imag() / y;
    double a = z.real() - b * tau.re;
    a -= std::round(a);
    b -= std::round(b);
    const Complex zr = Complex(a, 0) + b * tau.value();
    double d = std::abs(zr);
    for (int mm = -1; mm <= 1; ++mm)
        for (int nn = -1; nn <= 1; ++nn)
            d = std::min(d, std::abs(zr + double(mm) + double(nn) * tau.value()));
    return d;
}

double mask_weight(double d, double r) {
    if (d <= 0.5 * r) return 0.0;
    if (d >= r) return 1.0;
    const double u = (d - 0.5 * r) / (0.5 * r);
    const double f = std::exp(-1.0 / u), g = std::exp(-1.0 / (1.0 - u));
    return f / (f + g);
}

Complex component_value_excised(const Component& comp, const ModularPoint& tau,
                                const QuadratureControl& ctl, double radius, int N) {
    const Complex t = tau.value();
    std::map<int, Grid> tables;
    const Complex estar_term = estar_coefficient() * e2_star(tau, ctl.sums);
    for (const Edge& e : comp.edges) {
        if (tables.count(e.n)) continue;
        Grid tab(static_cast<size_t>(N) * N, Complex(0));
        parallel_for(N, [&](int i) {
            for (int j = 0; j < N; ++j) {
                const Complex z = (double(i) + double(j) * t) / double(N);
                const double w = mask_weight(flat_distance(z, tau), radius);
                if (w == 0.0) continue;
                Complex val = weierstrass_p_trig(z, tau, e.n, ctl.sums) / (4 * kPi);
                if (e.n == 0) val += estar_term;
                tab[static_cast<size_t>(i) * N + j] = w * val;
            }
        });
        tables[e.n] = std::move(tab);
    }
    Contraction c;
    c.N = N;
    c.pinned = static_cast<int>(comp.vertices.size()) - 1;
    c.budget = ctl.budget;
    for (const Edge& e : comp.edges) {
        EdgeFactor f;
        f.u = e.head;
        f.v = e.tail;
        f.tab = tables[e.n];
        c.edges.push_back(std::move(f));
    }
    return c.run();
}

// Neville extrapolation to eps = 0 through (eps_k, W_k); returns value and an
// error estimate from the last diagonal difference.
std::pair<Complex, double> extrapolate(const std::vector<double>& eps,
                                       const std::vector<Complex>& vals) {
    const int n = static_cast<int>(vals.size());
    if (n == 1) return {vals[0], std::abs(vals[0]) * 1e-3};
    std::vector<Complex> T = vals;
    Complex prev_diag = T[0];
    double est = std::abs(T[n - 1] - T[0]);
    for (int j = 1; j < n; ++j) {
        for (int i = n - 1; i >= j; --i)
            T[i] = T[i] + (T[i] - T[i - 1]) * (eps[i] / (eps[i - j] - eps[i]));
        est = std::abs(T[n - 1] - prev_diag);
        prev_diag = T[n - 1];
    }
    return {T[n - 1], est};
}

Component make_component(const DecoratedGraph& g, const std::vector<int>& vertices,
                         const std::vector<Edge>& all_edges) {
    Component comp;
    comp.vertices = vertices;
    std::map<int, int> local;
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i) local[vertices[i]] = i;
    for (const Edge& e : all_edges)
        if (local.count(e.head) && local.count(e.tail))
            comp.edges.push_back({local[e.head], local[e.tail], e.n});
    (void)g;
    return comp;
}

std::string params_string(const QuadratureControl& ctl, const ModularPoint& tau) {
    std::ostringstream os;
    os << "tau=" << tau.re << "+" << tau.im << "i L=" << ctl.L << " grid=" << ctl.grid_per_dim
       << " excision=" << ctl.excision_radius << " eps=[";
    for (size_t i = 0; i < ctl.eps_schedule.size(); ++i)
        os << (i ? "," : "") << ctl.eps_schedule[i];
    os << "]";
    return os.str();
}

} // namespace

void QuadratureControl::validate() const {
    if (eps_schedule.empty()) throw Error("empty eps schedule");
    for (size_t i = 0; i + 1 < eps_schedule.size(); ++i)
        if (!(eps_schedule[i] > eps_schedule[i + 1]))
            throw Error("eps schedule must be strictly decreasing");
    for (double e : eps_schedule)
        if (!(e > 0 && e < L)) throw Error("eps schedule out of range");
    if (!(excision_radius > 0 && excision_radius < 0.25))
        throw Error("excision radius must lie in (0, 0.25)");
    if (grid_per_dim < 8) throw Error("grid_per_dim too small");
}

GraphIntegralResult graph_integral(const DecoratedGraph& g, const ModularPoint& tau,
                                   const QuadratureControl& ctl) {
    ctl.validate();
    GraphIntegralResult res;
    res.method = (ctl.method == Method::RegulatedExtrapolated) ? "regulated-extrapolated"
                                                               : "excised-direct";
    res.params = params_string(ctl, tau);

    // self-loops factor out with their closed values
    Complex factor = 1.0;
    std::vector<Edge> rest;
    for (const Edge& e : g.edges()) {
        if (e.is_self_loop())
            factor *= self_loop_value(e.n, tau, ctl.sums);
        else
            rest.push_back(e);
    }
    DecoratedGraph pruned(g.vertex_names(), rest);

    std::vector<Complex> comp_vals;
    std::vector<double> comp_errs;
    for (const std::vector<int>& verts : connected_components(pruned)) {
        if (verts.size() == 1) continue; // unit-mass measure
        if (2 * (verts.size() - 1) > 6)
            throw QuadratureBudgetExceeded("component needs more than 6 real dimensions");
        Component comp = make_component(pruned, verts, rest);

        Complex cval;
        double cerr;
        if (ctl.method == Method::RegulatedExtrapolated) {
            std::vector<Complex> vals;
            for (double eps : ctl.eps_schedule)
                vals.push_back(component_value_regulated(comp, tau, ctl, eps,
                                                         grid_size_for(ctl, eps)));
            std::tie(cval, cerr) = extrapolate(ctl.eps_schedule, vals);
        } else {
            const double radius = ctl.excision_radius * std::min(1.0, std::abs(tau.value()));
            const std::vector<double> radii = {radius, radius / std::sqrt(2.0), radius / 2};
            std::vector<Complex> vals;
            for (double r : radii) {
                const int N = next_pow2(std::max(ctl.grid_per_dim,
                                                 static_cast<int>(std::ceil(24.0 / r))));
                vals.push_back(component_value_excised(comp, tau, ctl, r, N));
            }
            // fit W + a r^2 + b r^4
            Eigen::Matrix3d A;
            for (int i = 0; i < 3; ++i) {
                const double r2 = radii[i] * radii[i];
                A(i, 0) = 1;
                A(i, 1) = r2;
                A(i, 2) = r2 * r2;
            }
            Eigen::Vector3d re, im;
            for (int i = 0; i < 3; ++i) {
                re(i) = vals[i].real();
                im(i) = vals[i].imag();
            }
            const Eigen::Vector3d sr = A.fullPivLu().solve(re);
            const Eigen::Vector3d si = A.fullPivLu().solve(im);
            cval = Complex(sr(0), si(0));
            // two-point r^2 extrapolation from the smaller radii as the check
            const double w2 = radii[2] * radii[2] / (radii[1] * radii[1] - radii[2] * radii[2]);
            const Complex two_pt = vals[2] + (vals[2] - vals[1]) * w2;
            cerr = std::abs(cval - two_pt) + 1e-12 * std::abs(cval);
        }
        comp_vals.push_back(cval);
        comp_errs.push_back(cerr);
    }
    Complex value = factor;
    for (const Complex& v : comp_vals) value *= v;
    double err = 0;
    for (size_t i = 0; i < comp_vals.size(); ++i) {
        double partial = comp_errs[i] * std::abs(factor);
        for (size_t j = 0; j < comp_vals.size(); ++j)
            if (j != i) partial *= std::abs(comp_vals[j]);
        err += partial;
    }
    res.value = value;
    res.err = err + 1e-15;
    return res;
}

double modularity_check(const DecoratedGraph& g, const ModularPoint& tau,
                        const ModularGroupElement& gamma, const QuadratureControl& ctl) {
    int weight = 0;
    for (const Edge& e : g.edges()) weight += e.n + 2;
    const GraphIntegralResult w0 = graph_integral(g, tau, ctl);
    const GraphIntegralResult w1 = graph_integral(g, gamma.apply(tau), ctl);
    const Complex j = gamma.automorphy(tau);
    return std::abs(w1.value - std::pow(j, weight) * w0.value) /
           std::max(std::abs(w0.value), 1e-12);
}

DbarResult wirtinger_dbar(const std::function<Complex(const ModularPoint&)>& f,
                          const ModularPoint& tau, double h) {
    if (!(h > 0) || h >= tau.im / 10) throw StepTooLarge();
    auto dbar_at = [&](double step) {
        const Complex fx_p = f(ModularPoint(tau.re + step, tau.im));
        const Complex fx_m = f(ModularPoint(tau.re - step, tau.im));
        const Complex fy_p = f(ModularPoint(tau.re, tau.im + step));
        const Complex fy_m = f(ModularPoint(tau.re, tau.im - step));
        const Complex dx = (fx_p - fx_m) / (2 * step);
        const Complex dy = (fy_p - fy_m) / (2 * step);
        return 0.5 * (dx + Complex(0, 1) * dy);
    };
    const Complex d1 = dbar_at(h);
    const Complex d2 = dbar_at(h / 2);
    DbarResult r;
    r.value = (4.0 * d2 - d1) / 3.0;
    r.err = std::abs(d2 - d1) / 3.0 + 1e-12 * std::abs(r.value);
    return r;
}

AnomalyResult anomaly_check(const DecoratedGraph& g, const ModularPoint& tau,
                            const QuadratureControl& ctl, double h) {
    const GraphClass cls = classify(g);
    if (!cls.simple) throw NotSimple("anomaly recursion needs a simple graph");
    for (const Edge& e : g.edges())
        if (e.n != 0) throw NotSimple("anomaly recursion needs undecorated edges");

    AnomalyResult out;
    DbarResult lhs = wirtinger_dbar(
        [&](const ModularPoint& t) { return graph_integral(g, t, ctl).value; }, tau, h);
    out.lhs = lhs.value;
    out.lhs_err = lhs.err;

    Complex sum = 0;
    for (int e = 0; e < g.num_edges(); ++e) {
        const Complex wc = graph_integral(contract_edge(g, e), tau, ctl).value;
        const Complex wd = graph_integral(delete_edge(g, e), tau, ctl).value;
        out.contracted.push_back(wc);
        out.deleted.push_back(wd);
        sum += wd - wc;
    }
    const double y = tau.im;
    out.rhs = Complex(0, 1) / (8 * y * y) * sum;
    out.residual = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.rhs), 1e-12);
    return out;
}

ImTauFit fit_inverse_y_poly(const std::vector<double>& ys, const std::vector<Complex>& values,
                            int order) {
    const int n = static_cast<int>(ys.size());
    if (n < order + 1) throw IllConditionedFit();
    Eigen::MatrixXd A(n, order + 1);
    Eigen::VectorXd br(n), bi(n);
    for (int i = 0; i < n; ++i) {
        double p = 1;
        for (int j = 0; j <= order; ++j) {
            A(i, j) = p;
            p /= ys[i];
        }
        br(i) = values[i].real();
        bi(i) = values[i].imag();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(order) < 1e-10 * svd.singularValues()(0)) throw IllConditionedFit();
    Eigen::VectorXd cr = svd.solve(br);
    Eigen::VectorXd ci = svd.solve(bi);
    ImTauFit fit;
    for (int j = 0; j <= order; ++j) {
        fit.re_coeffs.push_back(cr(j));
        fit.im_coeffs.push_back(ci(j));
    }
    const Eigen::VectorXd rr = A * cr - br, ri = A * ci - bi;
    fit.residual = std::sqrt((rr.squaredNorm() + ri.squaredNorm()) / n);
    return fit;
}

ImTauFit imtau_fit(const DecoratedGraph& g, const std::vector<ModularPoint>& tau_line,
                   const QuadratureControl& ctl, int order) {
    std::vector<double> ys;
    std::vector<Complex> vals;
    for (const ModularPoint& t : tau_line) {
        ys.push_back(t.im);
        vals.push_back(graph_integral(g, t, ctl).value);
    }
    return fit_inverse_y_poly(ys, vals, order);
}

} // namespace ellint
