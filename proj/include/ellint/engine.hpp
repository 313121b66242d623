#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ellint/graph.hpp"
#include "ellint/modular.hpp"
#include "ellint/propagator.hpp"

namespace ellint {

struct QuadratureBudgetExceeded : Error {
    explicit QuadratureBudgetExceeded(const std::string& w)
        : Error("quadrature budget exceeded: " + w) {}
};
struct StepTooLarge : Error {
    StepTooLarge() : Error("finite-difference step too large for Im tau") {}
};
struct NotSimple : Error {
    explicit NotSimple(const std::string& w) : Error("graph not admissible: " + w) {}
};
struct IllConditionedFit : Error {
    IllConditionedFit() : Error("least-squares fit is ill-conditioned") {}
};

enum class Method { RegulatedExtrapolated, ExcisedDirect };

struct QuadratureControl {
    int grid_per_dim = 32;          // grid at the first schedule entry; scaled as eps shrinks
    double excision_radius = 0.15;  // in units of the shorter lattice period, < 0.25
    std::vector<double> eps_schedule = {1e-2, 1e-3, 1e-4};
    double L = 1e3;
    int richardson_order = 2;
    Method method = Method::RegulatedExtrapolated;
    long long budget = 6'000'000'000; // table-lookup budget per evaluation
    SumControl sums;

    void validate() const;
};

struct GraphIntegralResult {
    Complex value{0, 0};
    double err = 0;
    std::string method;
    std::string params; // resolved parameter record
};

/// W_{(Gamma,n)}(tau, taubar): disconnected components multiply, self-loops
/// contribute their closed values, one vertex per component is pinned at 0,
/// and the rest is quadrature per ctl.method.
GraphIntegralResult graph_integral(const DecoratedGraph& g, const ModularPoint& tau,
                                   const QuadratureControl& ctl = {});

/// |W(gamma tau) - (C tau + D)^{sum (n_e + 2)} W(tau)| / max(|W(tau)|, 1e-12).
double modularity_check(const DecoratedGraph& g, const ModularPoint& tau,
                        const ModularGroupElement& gamma, const QuadratureControl& ctl = {});

struct DbarResult {
    Complex value{0, 0};
    double err = 0;
};

/// Wirtinger d/d(taubar) = (d/dx + i d/dy)/2 by central differences with one
/// Richardson level. h must be < Im(tau)/10.
DbarResult wirtinger_dbar(const std::function<Complex(const ModularPoint&)>& f,
                          const ModularPoint& tau, double h);

struct AnomalyResult {
    Complex lhs{0, 0};        // dbar W
    Complex rhs{0, 0};        // (i/8 y^2) sum_e (W_{G\e} - W_{G/e})
    double residual = 0;      // |lhs - rhs| / max(|rhs|, 1e-12)
    double lhs_err = 0;
    std::vector<Complex> contracted; // W_{G/e} per edge
    std::vector<Complex> deleted;    // W_{G\e} per edge
};

/// Deletion-contraction recursion for dbar W on simple undecorated graphs.
/// The recursion orientation (deleted minus contracted) is the numerically
/// determined one; see the repository notes for the fit procedure.
AnomalyResult anomaly_check(const DecoratedGraph& g, const ModularPoint& tau,
                            const QuadratureControl& ctl, double h);

struct ImTauFit {
    std::vector<double> re_coeffs; // c_i of Re W = sum c_i y^{-i}
    std::vector<double> im_coeffs;
    double residual = 0; // rms misfit
};

/// Least-squares fit of W(x + iy) = sum_{i<=order} c_i y^{-i} along a vertical
/// segment of tau values. Diagnostic for general graphs; exact-structure
/// validation for closed-form cases.
ImTauFit imtau_fit(const DecoratedGraph& g, const std::vector<ModularPoint>& tau_line,
                   const QuadratureControl& ctl = {}, int order = 2);

/// Fit utility on externally supplied values (used for detrended series).
ImTauFit fit_inverse_y_poly(const std::vector<double>& ys, const std::vector<Complex>& values,
                            int order);

} // namespace ellint
