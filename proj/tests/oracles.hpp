#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: sums run in long double against std::lgammal, integrals use
// adaptive Simpson.

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

inline std::complex<long double> ml_series(long double alpha, std::complex<long double> z,
                                           int terms = 200) {
    std::complex<long double> sum = 0;
    std::complex<long double> power = 1;
    for (int k = 0; k < terms; ++k) {
        sum += power / std::exp(std::lgammal(1.0L + k * alpha));
        power *= z;
    }
    return sum;
}

namespace detail {

inline long double simpson_step(const std::function<long double(long double)>& f, long double a,
                                long double b, long double fa, long double fm, long double fb,
                                long double whole, long double eps, int depth) {
    const long double m = (a + b) / 2;
    const long double lm = (a + m) / 2;
    const long double rm = (m + b) / 2;
    const long double flm = f(lm);
    const long double frm = f(rm);
    const long double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const long double right = (b - m) / 6 * (fm + 4 * frm + fb);
    const long double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15 * eps) return left + right + delta / 15;
    return simpson_step(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

}  // namespace detail

inline long double integrate(const std::function<long double(long double)>& f, long double a,
                             long double b, long double eps = 1e-15L, int depth = 60) {
    const long double fa = f(a);
    const long double fb = f(b);
    const long double fm = f((a + b) / 2);
    const long double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, eps, depth);
}

// Weakly singular endpoints are removed with u = s^k substitutions so the
// integrand seen by Simpson is smooth.
inline long double incomplete_beta(long double eta, long double p, long double q) {
    // ∫_0^η u^{p-1}(1-u)^{q-1} du with u = η s^{1/p}:  η^p/p ∫_0^1 (1 - η s^{1/p})^{q-1} ds
    const auto g = [&](long double s) {
        return std::pow(1 - eta * std::pow(s, 1 / p), q - 1);
    };
    return std::pow(eta, p) / p * integrate(g, 0, 1);
}

// (1/Γ(α)) ∫_a^t (t-τ)^{α-1} τ^γ dτ with v = (t-τ)^α / α.
inline long double rl_integral_power(long double a, long double gamma, long double alpha,
                                     long double t) {
    const long double vmax = std::pow(t - a, alpha) / alpha;
    const auto g = [&](long double v) {
        const long double tau = t - std::pow(alpha * v, 1 / alpha);
        return std::pow(std::max(tau, 0.0L), gamma);
    };
    return integrate(g, 0, vmax) / std::tgamma(alpha);
}

}  // namespace oracle
