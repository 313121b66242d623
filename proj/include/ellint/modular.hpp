#pragma once

#include <complex>
#include <vector>

#include "ellint/errors.hpp"

namespace ellint {

using Complex = std::complex<double>;

struct OddWeight : Error {
    explicit OddWeight(int k) : Error("Eisenstein weight must be even >= 2, got " + std::to_string(k)) {}
};
struct Unsupported : Error {
    explicit Unsupported(const std::string& w) : Error("unsupported: " + w) {}
};
struct PoleAtLatticePoint : Error {
    PoleAtLatticePoint() : Error("evaluation at a lattice point") {}
};

/// A point tau = x + iy in the upper half-plane.
struct ModularPoint {
    double re = 0;
    double im = 1;
    ModularPoint() = default;
    ModularPoint(double x, double y) : re(x), im(y) {
        if (!(im > 0)) throw Error("Im(tau) must be positive");
    }
    explicit ModularPoint(Complex tau) : ModularPoint(tau.real(), tau.imag()) {}
    Complex value() const { return {re, im}; }
};

/// gamma = (A B; C D) in SL(2, Z).
struct ModularGroupElement {
    long long A = 1, B = 0, C = 0, D = 1;
    ModularGroupElement() = default;
    ModularGroupElement(long long a, long long b, long long c, long long d) : A(a), B(b), C(c), D(d) {
        if (A * D - B * C != 1) throw Error("matrix not in SL(2,Z)");
    }
    ModularPoint apply(const ModularPoint& tau) const {
        Complex t = tau.value();
        return ModularPoint((Complex(double(A)) * t + double(B)) / (Complex(double(C)) * t + double(D)));
    }
    Complex automorphy(const ModularPoint& tau) const {
        return Complex(double(C)) * tau.value() + double(D);
    }
    friend ModularGroupElement operator*(const ModularGroupElement& g, const ModularGroupElement& h) {
        return {g.A * h.A + g.B * h.C, g.A * h.B + g.B * h.D,
                g.C * h.A + g.D * h.C, g.C * h.B + g.D * h.D};
    }
};

inline ModularGroupElement sl2_identity() { return {1, 0, 0, 1}; }
inline ModularGroupElement sl2_S() { return {0, -1, 1, 0}; }
inline ModularGroupElement sl2_T() { return {1, 1, 0, 1}; }

struct SumControl {
    int q_terms = 64;
    int lattice_radius = 60;
    double tol = 1e-10;
};

/// Exact even zeta values via Bernoulli numbers: zeta(2) = pi^2/6 etc.
/// Supported for even m in [2, 16].
double zeta_even(int m);

/// Bernoulli number B_m for even m <= 16 (B_2 = 1/6, ...), as a double.
double bernoulli(int m);

/// Eisenstein series E_k(tau) of even weight k >= 2, normalized with constant
/// term 1, by q-series: E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.
Complex eisenstein(int k, const ModularPoint& tau, const SumControl& ctl = {});

/// E_2^*(tau, taubar) = E_2(tau) - 3/(pi Im tau).
Complex e2_star(const ModularPoint& tau, const SumControl& ctl = {});

/// Weierstrass p function and z-derivatives via lattice sums with a smoothly
/// weighted radial truncation: deriv 0 uses the subtracted sum
/// 1/z^2 + sum'[1/(z-l)^2 - 1/l^2], deriv d >= 1 the absolutely summed
/// (-1)^d (d+1)! sum 1/(z-l)^{d+2}.
Complex weierstrass_p(Complex z, const ModularPoint& tau, int deriv = 0,
                      const SumControl& ctl = {});

/// Same values through the trigonometric series
/// p(z) = pi^2 sum_n 1/sin^2(pi(z - n tau)) - (pi^2/3) E_2(tau);
/// an independent evaluation path, also the fast one for grids.
Complex weierstrass_p_trig(Complex z, const ModularPoint& tau, int deriv = 0,
                           const SumControl& ctl = {});

/// Lattice-sum oracle for E_k: sum' 1/(m+n tau)^k / (2 zeta(k)); for k = 2 the
/// conditionally convergent sum in Eisenstein order (inner sum over m closed
/// as pi^2/sin^2(pi n tau)).
Complex eisenstein_lattice(int k, const ModularPoint& tau, const SumControl& ctl = {});

/// Reduce tau into the standard fundamental domain |Re| <= 1/2, |tau| >= 1;
/// returns the reduced point and the gamma with gamma(tau) = reduced.
std::pair<ModularPoint, ModularGroupElement> reduce_to_fundamental_domain(const ModularPoint& tau);

} // namespace ellint
