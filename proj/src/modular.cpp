#include "ellint/modular.hpp"

#include <algorithm>
#include <cmath>

namespace ellint {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// B_2 .. B_16 as fractions
const double kBernoulli[] = {1.0 / 6,  -1.0 / 30,    1.0 / 42,  -1.0 / 30,
                             5.0 / 66, -691.0 / 2730, 7.0 / 6,   -3617.0 / 510};

// C-infinity step: 1 on u <= 0 decaying to 0 at u >= 1.
double smooth_cutoff(double u) {
    if (u <= 0) return 1.0;
    if (u >= 1) return 0.0;
    const double f = std::exp(-1.0 / u), g = std::exp(-1.0 / (1.0 - u));
    return g / (f + g);
}

double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

double bernoulli(int m) {
    if (m < 2 || m % 2 != 0 || m > 16) throw Unsupported("Bernoulli number B_" + std::to_string(m));
    return kBernoulli[m / 2 - 1];
}

double zeta_even(int m) {
    if (m < 2 || m % 2 != 0 || m > 16) throw Unsupported("zeta_even argument " + std::to_string(m));
    // zeta(2n) = (-1)^{n+1} B_{2n} (2 pi)^{2n} / (2 (2n)!)
    const int n = m / 2;
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    return sign * bernoulli(m) * std::pow(2 * kPi, m) / (2 * factorial(m));
}

Complex eisenstein(int k, const ModularPoint& tau, const SumControl& ctl) {
    if (k < 2 || k % 2 != 0) throw OddWeight(k);
    if (k > 16) throw Unsupported("Eisenstein weight > 16");
    const Complex q = std::exp(Complex(0, 2 * kPi) * tau.value());
    // sigma_{k-1}(n) by sieve
    const int N = std::max(ctl.q_terms, 8);
    std::vector<double> sigma(N + 1, 0.0);
    for (int d = 1; d <= N; ++d) {
        const double dk = std::pow(double(d), k - 1);
        for (int n = d; n <= N; n += d) sigma[n] += dk;
    }
    Complex sum = 0, qn = 1;
    for (int n = 1; n <= N; ++n) {
        qn *= q;
        sum += sigma[n] * qn;
    }
    const double coeff = 2.0 * k / bernoulli(k);
    return 1.0 - coeff * sum;
}

Complex e2_star(const ModularPoint& tau, const SumControl& ctl) {
    return eisenstein(2, tau, ctl) - 3.0 / (kPi * tau.im);
}

namespace {

// Reduce z by lattice translations to the centered cell (|a|,|b| <= 1/2).
Complex reduce_to_cell(Complex z, const ModularPoint& tau) {
    const double y = tau.im;
    double b = z.imag() / y;
    double a = z.real() - b * tau.re;
    a -= std::round(a);
    b -= std::round(b);
    return Complex(a, 0) + b * tau.value();
}

} // namespace

Complex weierstrass_p(Complex z, const ModularPoint& tau, int deriv, const SumControl& ctl) {
    if (deriv < 0) throw Error("derivative order must be >= 0");
    z = reduce_to_cell(z, tau);
    if (std::abs(z) < 1e-12) throw PoleAtLatticePoint();

    const double R = std::max(8, ctl.lattice_radius / 2); // weight 1 inside R, 0 beyond 2R
    const Complex t = tau.value();
    const int ncap = static_cast<int>(std::ceil(2 * R / tau.im)) + 1;
    const double dfac = factorial(deriv + 1) * ((deriv % 2 == 0) ? 1.0 : -1.0);

    Complex sum = (deriv == 0) ? 1.0 / (z * z) : dfac / std::pow(z, deriv + 2);
    for (int n = -ncap; n <= ncap; ++n) {
        const double abs_im = std::abs(n * tau.im);
        if (abs_im > 2 * R) continue;
        const int mcap = static_cast<int>(std::ceil(std::sqrt(std::max(0.0, 4 * R * R - abs_im * abs_im)) + std::abs(n * tau.re))) + 1;
        for (int m = -mcap; m <= mcap; ++m) {
            if (n == 0 && m == 0) continue;
            const Complex lam = double(m) + double(n) * t;
            const double al = std::abs(lam);
            if (al >= 2 * R) continue;
            const double w = smooth_cutoff((al - R) / R);
            if (w == 0.0) continue;
            if (deriv == 0)
                sum += w * (1.0 / ((z - lam) * (z - lam)) - 1.0 / (lam * lam));
            else
                sum += w * dfac / std::pow(z - lam, deriv + 2);
        }
    }
    return sum;
}

Complex weierstrass_p_trig(Complex z, const ModularPoint& tau, int deriv, const SumControl& ctl) {
    if (deriv < 0) throw Error("derivative order must be >= 0");
    z = reduce_to_cell(z, tau);
    if (std::abs(z) < 1e-12) throw PoleAtLatticePoint();
    const Complex t = tau.value();

    // derivatives of 1/sin^2(pi w) as polynomials in u = cot(pi w):
    // d^m/dw^m [1/sin^2] = pi^m Q_m(u), Q_0 = 1 + u^2, Q_{m+1} = -(1+u^2) Q_m'.
    static thread_local std::vector<std::vector<double>> Q; // Q[m] coefficients
    if (Q.empty()) Q.push_back({1.0, 0.0, 1.0});
    while (static_cast<int>(Q.size()) <= deriv) {
        const auto& prev = Q.back();
        std::vector<double> dprev(prev.size() - 1, 0.0);
        for (size_t i = 1; i < prev.size(); ++i) dprev[i - 1] = prev[i] * double(i);
        std::vector<double> next(dprev.size() + 2, 0.0);
        for (size_t i = 0; i < dprev.size(); ++i) {
            next[i] -= dprev[i];
            next[i + 2] -= dprev[i];
        }
        Q.push_back(std::move(next));
    }
    const auto& poly = Q[deriv];

    auto inv_sin2_deriv = [&](Complex w) -> Complex {
        Complex u;
        if (w.imag() >= 0) {
            const Complex e = std::exp(Complex(0, 2 * kPi) * w);
            u = Complex(0, 1) * (e + 1.0) / (e - 1.0);
        } else {
            const Complex e = std::exp(Complex(0, -2 * kPi) * w);
            u = -Complex(0, 1) * (e + 1.0) / (e - 1.0);
        }
        Complex val = 0;
        for (auto it = poly.rbegin(); it != poly.rend(); ++it) val = val * u + *it;
        return val * std::pow(kPi, deriv);
    };

    const int ncap = static_cast<int>(std::ceil((-std::log(ctl.tol * 1e-2) / (2 * kPi) + std::abs(z.imag())) / tau.im)) + 2;
    Complex sum = inv_sin2_deriv(z);
    for (int n = 1; n <= ncap; ++n) {
        sum += inv_sin2_deriv(z - double(n) * t) + inv_sin2_deriv(z + double(n) * t);
    }
    Complex out = kPi * kPi * sum;
    if (deriv == 0) out -= kPi * kPi / 3.0 * eisenstein(2, tau, ctl);
    return out;
}

Complex eisenstein_lattice(int k, const ModularPoint& tau, const SumControl& ctl) {
    if (k < 2 || k % 2 != 0) throw OddWeight(k);
    const Complex t = tau.value();
    if (k == 2) {
        // Eisenstein order: G_2 = 2 zeta(2) + sum_{n != 0} pi^2 / sin^2(pi n tau)
        const int ncap = static_cast<int>(std::ceil((-std::log(ctl.tol * 1e-2) / (2 * kPi)) / tau.im)) + 2;
        Complex g2 = 2.0 * zeta_even(2);
        for (int n = 1; n <= ncap; ++n) {
            const Complex s = std::sin(kPi * double(n) * t);
            g2 += 2.0 * kPi * kPi / (s * s);
        }
        return g2 / (2.0 * zeta_even(2));
    }
    // absolutely convergent: smooth radial truncation
    const double R = std::max(12, ctl.lattice_radius);
    const int ncap = static_cast<int>(std::ceil(2 * R / tau.im)) + 1;
    Complex sum = 0;
    for (int n = -ncap; n <= ncap; ++n) {
        const int mcap = static_cast<int>(std::ceil(2 * R + std::abs(n * tau.re))) + 1;
        for (int m = -mcap; m <= mcap; ++m) {
            if (n == 0 && m == 0) continue;
            const Complex lam = double(m) + double(n) * t;
            const double al = std::abs(lam);
            if (al >= 2 * R) continue;
            sum += smooth_cutoff((al - R) / R) / std::pow(lam, k);
        }
    }
    return sum / (2.0 * zeta_even(k));
}

std::pair<ModularPoint, ModularGroupElement> reduce_to_fundamental_domain(const ModularPoint& tau) {
    ModularPoint cur = tau;
    ModularGroupElement g = sl2_identity();
    for (int iter = 0; iter < 256; ++iter) {
        const double shift = std::round(cur.re);
        if (shift != 0) {
            const long long s = static_cast<long long>(shift);
            g = ModularGroupElement(1, -s, 0, 1) * g;
            cur = ModularPoint(cur.re - shift, cur.im);
        }
        if (std::norm(cur.value()) < 1.0 - 1e-15) {
            g = sl2_S() * g;
            cur = sl2_S().apply(cur);
            continue;
        }
        return {cur, g};
    }
    throw Error("fundamental domain reduction did not converge");
}

} // namespace ellint
