#pragma once

#include <complex>
#include <vector>

#include "ellint/errors.hpp"
#include "ellint/graph.hpp"

namespace ellint {

struct WrongShape : Error {
    explicit WrongShape(const std::string& w) : Error("wrong graph shape: " + w) {}
};

using Complex = std::complex<double>;

/// Smooth compactly supported test function on C x C:
///   Phi(z1, z2) = sum_terms c * z1^a z1bar^b z2^p z2bar^q
///                 * beta^{(j1)}(|z1|^2/R^2) beta^{(j2)}(|z2|^2/R^2)
/// with bump beta(x) = (1-x)^4 inside the radius, 0 outside. Closed under
/// holomorphic z1-derivatives up to order 8 (higher orders are rejected).
class FlatTestFunction {
public:
    struct Term {
        double coeff;
        int a, b;   // powers of z1, conj(z1)
        int p, q;   // powers of z2, conj(z2)
        int j1, j2; // bump derivative orders
    };

    /// Monomial prefactor z1^a conj(z1)^b z2^p conj(z2)^q times the two bumps.
    FlatTestFunction(double radius, std::vector<Term> terms);

    /// z1^3 times the two bumps: the canonical test function with a
    /// nonvanishing diagonal derivative integral.
    static FlatTestFunction standard(double radius);
    /// Purely radial bump pair.
    static FlatTestFunction radial(double radius);
    /// Identically zero.
    static FlatTestFunction zero(double radius);

    double radius() const { return radius_; }
    Complex eval(Complex z1, Complex z2) const;
    /// (d/dz1)^order Phi, order <= 8.
    Complex eval_deriv1(Complex z1, Complex z2, int order) const;

    /// int d^2z (d/dz1)^order Phi(z, z), by tensor Gauss-Legendre.
    Complex diagonal_derivative_integral(int order, int points_per_dim = 48) const;

private:
    double radius_;
    std::vector<Term> terms_;
    std::vector<std::vector<Term>> deriv_cache_; // deriv_cache_[m] = terms of d^m/dz1^m
    static std::vector<Term> differentiate_z1(const std::vector<Term>& in, double radius);
};

/// Flat-plane kernels of the two-vertex collapse limit.
Complex flat_U(Complex z, double eps, int deriv = 0);
Complex flat_P_window(Complex z, double eps, double L, int deriv = 0);

struct FlatCollapseResult {
    std::vector<double> eps;       // schedule used
    std::vector<Complex> lhs;      // graph integral per eps
    Complex rhs{0, 0};             // A(n0;ns)/(4pi)^k * int d^2z d^N Phi(z,z)
    double residual = 0;           // |lhs.back() - rhs|
    int derivative_order = 0;      // N
};

/// Two-vertex collapse check: U_eps on edge 0, P_eps^L on the k remaining
/// parallel edges, integrated against Phi over C^2, along a decreasing eps
/// schedule; compared with the closed collapse limit.
FlatCollapseResult flat_collapse_check(const DecoratedGraph& two_vertex_g,
                                       const FlatTestFunction& phi,
                                       const std::vector<double>& eps_schedule, double L);

} // namespace ellint
