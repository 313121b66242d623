#include "ellint/flat_collapse.hpp"

#include <algorithm>
#include <cmath>

#include "ellint/graph_polynomials.hpp"

namespace ellint {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kBumpPower = 4;
constexpr int kMaxDeriv = 8;

// beta^{(j)}(x) for beta = (1-x)^4: (-1)^j 4!/(4-j)! (1-x)^{4-j}, 0 for j > 4.
double bump_deriv(double x, int j) {
    if (x >= 1 || j > kBumpPower) return 0.0;
    double c = 1;
    for (int i = 0; i < j; ++i) c *= -(kBumpPower - i);
    return c * std::pow(1 - x, kBumpPower - j);
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0);
    w.assign(n, 0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2 * k + 1) * t * p1 - k * p2) / (k + 1);
            }
            const double dp = n * (t * p0 - p1) / (t * t - 1);
            const double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1, p1 = 0;
        for (int k = 0; k < n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2 * k + 1) * t * p1 - k * p2) / (k + 1);
        }
        const double dp = n * (t * p0 - p1) / (t * t - 1);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = 2.0 / ((1 - t * t) * dp * dp);
    }
}

Complex ipow(Complex z, int n) {
    Complex r = 1;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

} // namespace

FlatTestFunction::FlatTestFunction(double radius, std::vector<Term> terms)
    : radius_(radius), terms_(std::move(terms)) {
    if (!(radius > 0)) throw Error("bump radius must be positive");
    deriv_cache_.push_back(terms_);
}

FlatTestFunction FlatTestFunction::standard(double radius) {
    return FlatTestFunction(radius, {{1.0, 3, 0, 0, 0, 0, 0}});
}
FlatTestFunction FlatTestFunction::radial(double radius) {
    return FlatTestFunction(radius, {{1.0, 0, 0, 0, 0, 0, 0}});
}
FlatTestFunction FlatTestFunction::zero(double radius) {
    return FlatTestFunction(radius, {});
}

std::vector<FlatTestFunction::Term> FlatTestFunction::differentiate_z1(
    const std::vector<Term>& in, double radius) {
    std::vector<Term> out;
    const double inv_r2 = 1.0 / (radius * radius);
    for (const Term& t : in) {
        if (t.a > 0) {
            Term u = t;
            u.coeff *= t.a;
            --u.a;
            out.push_back(u);
        }
        if (t.j1 < kBumpPower) { // higher bump derivatives vanish identically
            Term u = t;
            u.coeff *= inv_r2;
            ++u.b;
            ++u.j1;
            out.push_back(u);
        }
    }
    return out;
}

Complex FlatTestFunction::eval(Complex z1, Complex z2) const { return eval_deriv1(z1, z2, 0); }

Complex FlatTestFunction::eval_deriv1(Complex z1, Complex z2, int order) const {
    if (order < 0 || order > kMaxDeriv) throw Error("derivative order must lie in [0, 8]");
    auto* self = const_cast<FlatTestFunction*>(this);
    while (static_cast<int>(self->deriv_cache_.size()) <= order)
        self->deriv_cache_.push_back(differentiate_z1(self->deriv_cache_.back(), radius_));
    const double x1 = std::norm(z1) / (radius_ * radius_);
    const double x2 = std::norm(z2) / (radius_ * radius_);
    if (x1 >= 1 || x2 >= 1) return 0.0;
    Complex sum = 0;
    for (const Term& t : self->deriv_cache_[order]) {
        sum += t.coeff * ipow(z1, t.a) * ipow(std::conj(z1), t.b) * ipow(z2, t.p) *
               ipow(std::conj(z2), t.q) * bump_deriv(x1, t.j1) * bump_deriv(x2, t.j2);
    }
    return sum;
}

Complex FlatTestFunction::diagonal_derivative_integral(int order, int points_per_dim) const {
    std::vector<double> xs, ws;
    gauss_legendre(points_per_dim, xs, ws);
    Complex sum = 0;
    for (int i = 0; i < points_per_dim; ++i)
        for (int j = 0; j < points_per_dim; ++j) {
            const Complex z(radius_ * xs[i], radius_ * xs[j]);
            sum += ws[i] * ws[j] * eval_deriv1(z, z, order);
        }
    return sum * radius_ * radius_;
}

Complex flat_U(Complex z, double eps, int deriv) {
    const double sign = (deriv % 2 == 0) ? 1.0 : -1.0;
    return sign / (4 * kPi * eps) * ipow(std::conj(z) / (4 * eps), deriv + 1) *
           std::exp(-std::norm(z) / (4 * eps));
}

Complex flat_P_window(Complex z, double eps, double L, int deriv) {
    // (-1)^d / (4 pi z^{d+2}) * int_{A_L}^{A_eps} u^{d+1} e^{-u} du
    const double aw2 = std::norm(z);
    const double sign = (deriv % 2 == 0) ? 1.0 : -1.0;
    if (aw2 == 0) return 0.0;
    const double A_lo = aw2 / (4 * eps), A_hi = aw2 / (4 * L);
    auto gamma_int = [](int k, double x) {
        double term = 1.0, s = 1.0;
        for (int j = 1; j < k; ++j) {
            term *= x / j;
            s += term;
        }
        double fact = 1.0;
        for (int j = 2; j < k; ++j) fact *= j;
        return fact * std::exp(-x) * s;
    };
    if (A_lo >= 0.5) {
        const double I = gamma_int(deriv + 2, A_hi) - gamma_int(deriv + 2, A_lo);
        return sign * I / (4 * kPi * ipow(z, deriv + 2));
    }
    const Complex wbar_pow = ipow(std::conj(z), deriv + 2);
    double p_lo = std::pow(1.0 / (4 * eps), deriv + 2);
    double p_hi = std::pow(1.0 / (4 * L), deriv + 2);
    double jfac = 1.0, r2j = 1.0;
    Complex acc = 0;
    for (int j = 0; j < 40; ++j) {
        if (j > 0) {
            jfac *= -j;
            r2j *= aw2;
            p_lo /= (4 * eps);
            p_hi /= (4 * L);
        }
        const double add = (r2j / jfac) / (deriv + 2 + j) * (p_lo - p_hi);
        acc += add;
        if (std::abs(add) < 1e-24 * (std::abs(acc) + 1e-300) && j > 2) break;
    }
    return sign * wbar_pow * acc / (4 * kPi);
}

FlatCollapseResult flat_collapse_check(const DecoratedGraph& g, const FlatTestFunction& phi,
                                       const std::vector<double>& eps_schedule, double L) {
    if (g.num_vertices() != 2) throw WrongShape("need exactly 2 vertices");
    if (g.num_edges() < 1) throw WrongShape("need at least one edge");
    for (const Edge& e : g.edges()) {
        if (e.is_self_loop()) throw WrongShape("self-loops not allowed");
        if (e.head != g.edges()[0].head)
            throw WrongShape("all edges must share one orientation");
    }
    if (eps_schedule.empty()) throw Error("empty eps schedule");
    for (size_t i = 0; i + 1 < eps_schedule.size(); ++i)
        if (!(eps_schedule[i] > eps_schedule[i + 1]))
            throw Error("eps schedule must be strictly decreasing");

    const int n0 = g.edges()[0].n;
    std::vector<int> ns;
    for (int e = 1; e < g.num_edges(); ++e) ns.push_back(g.edges()[e].n);
    const int k = static_cast<int>(ns.size());
    int N = n0 + 1;
    for (int n : ns) N += n + 2;
    if (N > 8) throw WrongShape("total derivative order beyond the bump's support");

    FlatCollapseResult res;
    res.derivative_order = N;

    // RHS: A(n0; ns)/(4 pi)^k * int d^2z (d^N Phi)(z, z)
    const double a_val = a_constant(n0, ns).to_double();
    res.rhs = a_val / std::pow(4 * kPi, k) * phi.diagonal_derivative_integral(N);

    // G(w) = int d^2z2 Phi(z2 + w, z2) on a fixed Gauss grid over the support
    const double R = phi.radius();
    const int m = 44;
    std::vector<double> gx, gw;
    gauss_legendre(m, gx, gw);
    auto G_of_w = [&](Complex w) {
        Complex sum = 0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const Complex z2(R * gx[i], R * gx[j]);
                sum += gw[i] * gw[j] * phi.eval(z2 + w, z2);
            }
        return sum * R * R;
    };

    // LHS(eps) = int d^2w [d^{n0} U_eps](w) prod_i [d^{n_i} P_eps^L](w) G(w),
    // in polar coordinates scaled by sqrt(eps)
    const int n_rad = 40, n_ang = 64;
    std::vector<double> rx, rw;
    gauss_legendre(n_rad, rx, rw);
    for (double eps : eps_schedule) {
        const double rho_max = std::min(2 * std::sqrt(eps * 46.0), 2 * R);
        Complex acc = 0;
        for (int i = 0; i < n_rad; ++i) {
            const double rho = 0.5 * rho_max * (rx[i] + 1);
            const double wr = 0.5 * rho_max * rw[i];
            for (int jth = 0; jth < n_ang; ++jth) {
                const double th = 2 * kPi * jth / n_ang;
                const Complex w = std::polar(rho, th);
                Complex kern = flat_U(w, eps, n0);
                for (int n : ns) kern *= flat_P_window(w, eps, L, n);
                acc += wr * (2 * kPi / n_ang) * rho * kern * G_of_w(w);
            }
        }
        res.eps.push_back(eps);
        res.lhs.push_back(acc);
    }
    res.residual = std::abs(res.lhs.back() - res.rhs);
    return res;
}

} // namespace ellint
