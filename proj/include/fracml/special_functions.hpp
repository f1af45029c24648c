#pragma once

// Gamma, Beta and the unnormalized incomplete Beta function.
//
// All functions are templated on the floating-point type. The Mittag-Leffler
// evaluator instantiates them with long double to get extra headroom for the
// cancellation that occurs in alternating series; the public double API is
// what everything else uses.

#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "fracml/errors.hpp"

namespace fracml {

/// Largest |x| accepted by gamma(). Past this Γ overflows a double.
inline constexpr double kGammaArgumentBound = 170.0;

namespace detail {

template <std::floating_point Real>
std::string describe(Real x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// Stirling-series coefficients B_{2k} / (2k (2k-1)), k = 1..9.
template <std::floating_point Real>
inline constexpr std::array<Real, 9> kStirling = {
    Real(1) / Real(12),          Real(-1) / Real(360),       Real(1) / Real(1260),
    Real(-1) / Real(1680),       Real(1) / Real(1188),       Real(-691) / Real(360360),
    Real(1) / Real(156),         Real(-3617) / Real(122400), Real(43867) / Real(244188),
};

// Below this the argument is shifted upward before the asymptotic series is used.
template <std::floating_point Real>
inline constexpr Real kStirlingThreshold = Real(20);

template <std::floating_point Real>
Real stirling_correction(Real x) {
    const Real inv = Real(1) / x;
    const Real inv2 = inv * inv;
    Real sum = 0;
    for (auto it = kStirling<Real>.rbegin(); it != kStirling<Real>.rend(); ++it) {
        sum = sum * inv2 + *it;
    }
    return sum * inv;
}

// sin(pi x) with exact argument reduction.
template <std::floating_point Real>
Real sin_pi(Real x) {
    const Real n = std::round(x);
    const Real r = x - n;
    const Real s = std::sin(std::numbers::pi_v<Real> * r);
    return std::fmod(n, Real(2)) == 0 ? s : -s;
}

// Γ(x) for x >= 0.5 without range checks.
template <std::floating_point Real>
Real gamma_positive(Real x) {
    Real shift_product = 1;
    while (x < kStirlingThreshold<Real>) {
        shift_product *= x;
        x += 1;
    }
    // x^(x-1/2) is split in two halves so that the intermediate stays finite up to x = 171.
    const Real half_power = std::pow(x, (x - Real(0.5)) / 2);
    const Real value = half_power * (half_power * std::exp(-x)) *
                       std::sqrt(2 * std::numbers::pi_v<Real>) *
                       std::exp(stirling_correction(x));
    return value / shift_product;
}

}  // namespace detail

/// Γ(x). Reflection handles x < 1/2; the asymptotic series with an upward shift
/// handles the rest.
template <std::floating_point Real>
Real gamma(Real x) {
    if (!std::isfinite(x)) throw DomainError("gamma: non-finite argument");
    if (x <= 0 && std::floor(x) == x) {
        throw PoleError("gamma: pole at non-positive integer " + detail::describe(x));
    }
    if (std::abs(x) > Real(kGammaArgumentBound)) {
        throw OverflowError("gamma: |x| exceeds " + detail::describe(kGammaArgumentBound) +
                            " (x = " + detail::describe(x) + ")");
    }
    if (x <= Real(23) && std::floor(x) == x) {
        // (x-1)! is exactly representable in this range.
        Real factorial = 1;
        for (Real k = 2; k < x; ++k) factorial *= k;
        return factorial;
    }
    if (x < Real(0.5)) {
        return std::numbers::pi_v<Real> / (detail::sin_pi(x) * detail::gamma_positive(1 - x));
    }
    return detail::gamma_positive(x);
}

/// ln Γ(x) for x > 0. No overflow bound.
template <std::floating_point Real>
Real log_gamma(Real x) {
    if (!(x > 0) || !std::isfinite(x)) {
        throw DomainError("log_gamma: requires finite x > 0, got " + detail::describe(x));
    }
    Real shift_product = 1;
    while (x < detail::kStirlingThreshold<Real>) {
        shift_product *= x;
        x += 1;
    }
    const Real half_log_2pi = Real(0.5) * std::log(2 * std::numbers::pi_v<Real>);
    return (x - Real(0.5)) * std::log(x) - x + half_log_2pi + detail::stirling_correction(x) -
           std::log(shift_product);
}

/// Γ(a) / Γ(b) for a, b > 0. Switches to the log domain once either argument
/// would overflow Γ.
template <std::floating_point Real>
Real gamma_ratio(Real a, Real b) {
    if (!(a > 0) || !(b > 0)) {
        throw DomainError("gamma_ratio: requires positive arguments");
    }
    const Real limit = Real(kGammaArgumentBound);
    if (a <= limit && b <= limit) return gamma(a) / gamma(b);
    return std::exp(log_gamma(a) - log_gamma(b));
}

/// B(p, q) = Γ(p)Γ(q)/Γ(p+q).
template <std::floating_point Real>
Real beta(Real p, Real q) {
    if (!(p > 0) || !(q > 0) || !std::isfinite(p) || !std::isfinite(q)) {
        throw DomainError("beta: requires p > 0 and q > 0");
    }
    if (p + q <= Real(kGammaArgumentBound)) return gamma(p) * gamma(q) / gamma(p + q);
    return std::exp(log_gamma(p) + log_gamma(q) - log_gamma(p + q));
}

namespace detail {

// Modified Lentz evaluation of the continued fraction for B_x(a, b), valid and
// fast for x <= a / (a + b).
template <std::floating_point Real>
Real incomplete_beta_cf(Real x, Real a, Real b) {
    if (x == 0) return 0;
    constexpr Real tiny = std::numeric_limits<Real>::min() / std::numeric_limits<Real>::epsilon();
    constexpr Real eps = std::numeric_limits<Real>::epsilon();
    constexpr int max_iterations = 10000;

    const Real qab = a + b;
    const Real qap = a + 1;
    const Real qam = a - 1;
    Real c = 1;
    Real d = 1 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1 / d;
    Real h = d;
    for (int m = 1; m <= max_iterations; ++m) {
        const Real m2 = 2 * Real(m);
        Real aa = Real(m) * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1 / d;
        const Real delta = d * c;
        h *= delta;
        if (std::abs(delta - 1) <= eps) {
            return std::exp(a * std::log(x) + b * std::log1p(-x)) / a * h;
        }
    }
    throw ConvergenceError("incomplete_beta: continued fraction did not converge");
}

}  // namespace detail

/// Unnormalized incomplete Beta ∫₀^η u^{p-1}(1-u)^{q-1} du.
template <std::floating_point Real>
Real incomplete_beta(Real eta, Real p, Real q) {
    if (!(eta >= 0 && eta <= 1)) {
        throw DomainError("incomplete_beta: eta must lie in [0, 1], got " + detail::describe(eta));
    }
    if (!(p > 0) || !(q > 0) || !std::isfinite(p) || !std::isfinite(q)) {
        throw DomainError("incomplete_beta: requires p > 0 and q > 0");
    }
    if (eta == 0) return 0;
    if (eta == 1) return beta(p, q);
    if (eta <= p / (p + q)) return detail::incomplete_beta_cf(eta, p, q);
    return beta(p, q) - detail::incomplete_beta_cf(1 - eta, q, p);
}

}  // namespace fracml
