#pragma once

// One-parameter Mittag-Leffler function E_α(z) = Σ z^k / Γ(1 + kα) and the
// fractional trigonometric pair cos_α, sin_α built from it.
//
// Evaluation is the plain power series. Partial sums are carried in long double
// with compensated accumulation regardless of the requested scalar type. The
// largest term is roughly exp(|z|^{1/α}), and its rounding error is what is
// left after cancellation when z points away from the positive real axis:
// results stay within 1e-15 of max(1, |E|) while |z|^{1/α} is below about 10
// (|z| <= 10 at α = 1), and degrade gradually beyond that. For large |z|
// combined with small α the term budget runs out and the evaluator reports a
// ConvergenceError.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "fracml/compensated_sum.hpp"
#include "fracml/errors.hpp"
#include "fracml/special_functions.hpp"

namespace fracml {

inline constexpr int kMLTermBudget = 2000;

template <std::floating_point Real>
struct MLEvaluation {
    std::complex<Real> value;
    int terms_used = 0;
    /// Magnitude of the first term not added to the sum.
    Real truncation_estimate = 0;
};

namespace detail {

using Wide = long double;

struct LatticeSum {
    std::complex<Wide> value;
    int terms_used = 0;
    Wide truncation_estimate = 0;
};

// Σ_{k≥0} z^m / Γ(1 + mα) over m = first + stride·k. Terms follow the ratio
// recurrence term(m + stride) = term(m) · z^stride · Γ(1 + mα) / Γ(1 + (m + stride)α).
inline LatticeSum lattice_series(Wide alpha, std::complex<Wide> z, int first, int stride,
                                 Wide tol) {
    std::complex<Wide> z_stride = 1;
    for (int i = 0; i < stride; ++i) z_stride *= z;
    std::complex<Wide> term = 1;
    for (int i = 0; i < first; ++i) term *= z;
    term /= gamma<Wide>(1 + Wide(first) * alpha);

    CompensatedSum<std::complex<Wide>> sum;
    int m = first;
    for (int k = 0; k < kMLTermBudget; ++k) {
        if (k > 0 && std::abs(term) < tol * std::max(Wide(1), std::abs(sum.value()))) {
            return {sum.value(), k, std::abs(term)};
        }
        sum.add(term);
        if (!std::isfinite(std::abs(sum.value()))) break;
        term *= z_stride * gamma_ratio<Wide>(1 + Wide(m) * alpha, 1 + Wide(m + stride) * alpha);
        m += stride;
    }
    throw ConvergenceError(
        "Mittag-Leffler series did not converge within " + std::to_string(kMLTermBudget) +
        " terms (|z| = " + describe(std::abs(z)) + ", alpha = " + describe(alpha) +
        ", partial sum magnitude " + describe(std::abs(sum.value())) + ", last term magnitude " +
        describe(std::abs(term)) + ")");
}

template <std::floating_point Real>
void check_tolerance(Real tol) {
    if (!(tol > 0)) throw DomainError("tolerance must be positive");
}

template <std::floating_point Real>
Real narrow_checked(Wide x, const char* what) {
    const Real r = static_cast<Real>(x);
    if (!std::isfinite(r)) {
        throw ConvergenceError(std::string(what) + ": value overflows the requested precision");
    }
    return r;
}

}  // namespace detail

/// E_α(z), summed until the next term drops below tol · max(1, |partial sum|).
template <std::floating_point Real>
MLEvaluation<Real> ml(Real alpha, std::type_identity_t<std::complex<Real>> z, std::type_identity_t<Real> tol) {
    if (!(alpha > 0 && alpha <= 2)) {
        throw DomainError("ml: alpha must lie in (0, 2], got " + detail::describe(alpha));
    }
    detail::check_tolerance(tol);
    const auto s = detail::lattice_series(alpha, std::complex<detail::Wide>(z), 0, 1, tol);
    return {{detail::narrow_checked<Real>(s.value.real(), "ml"),
             detail::narrow_checked<Real>(s.value.imag(), "ml")},
            s.terms_used,
            static_cast<Real>(s.truncation_estimate)};
}

/// cos_α(t^α) = Σ (-1)^k t^{2kα} / Γ(1 + 2kα).
template <std::floating_point Real>
Real cos_alpha(Real alpha, std::type_identity_t<Real> t, std::type_identity_t<Real> tol) {
    if (!(alpha > 0 && alpha <= 1)) throw DomainError("cos_alpha: alpha must lie in (0, 1]");
    if (!(t >= 0)) throw DomainError("cos_alpha: t must be non-negative");
    detail::check_tolerance(tol);
    const detail::Wide x = std::pow(detail::Wide(t), detail::Wide(alpha));
    const auto s = detail::lattice_series(alpha, {0, x}, 0, 2, tol);
    return detail::narrow_checked<Real>(s.value.real(), "cos_alpha");
}

/// sin_α(t^α) = Σ (-1)^k t^{(2k+1)α} / Γ(1 + (2k+1)α).
template <std::floating_point Real>
Real sin_alpha(Real alpha, std::type_identity_t<Real> t, std::type_identity_t<Real> tol) {
    if (!(alpha > 0 && alpha <= 1)) throw DomainError("sin_alpha: alpha must lie in (0, 1]");
    if (!(t >= 0)) throw DomainError("sin_alpha: t must be non-negative");
    detail::check_tolerance(tol);
    const detail::Wide x = std::pow(detail::Wide(t), detail::Wide(alpha));
    // (i x)^{2k+1} = i (-1)^k x^{2k+1}: the wanted sum is the imaginary part.
    const auto s = detail::lattice_series(alpha, {0, x}, 1, 2, tol);
    return detail::narrow_checked<Real>(s.value.imag(), "sin_alpha");
}

/// Smallest M in (0, search_max] with |E_α(i M^α) - 1| < 1e-9, if any.
///
/// g(M) = |E_α(i M^α) - 1| is sampled on a uniform grid; every interior local
/// minimum is refined by golden-section search inside its bracketing cell pair
/// and accepted if it reaches the threshold. The trivial zero at M = 0 is not a
/// candidate.
template <std::floating_point Real>
std::optional<Real> ml_period(Real alpha, std::type_identity_t<Real> search_max) {
    if (!(alpha > 0 && alpha <= 1)) throw DomainError("ml_period: alpha must lie in (0, 1]");
    if (!(search_max > 0) || !std::isfinite(search_max)) {
        throw DomainError("ml_period: search_max must be positive");
    }
    using detail::Wide;
    constexpr Wide threshold = 1e-9L;
    constexpr Wide tol = 1e-18L;
    const auto distance_from_one = [&](Wide m) {
        const Wide x = std::pow(m, Wide(alpha));
        const auto s = detail::lattice_series(alpha, {0, x}, 0, 1, tol);
        return std::abs(s.value - Wide(1));
    };

    const auto cells =
        static_cast<int>(std::max<Wide>(2000, std::ceil(Wide(search_max) / Wide(0.005))));
    const Wide h = Wide(search_max) / cells;
    std::vector<Wide> g(static_cast<std::size_t>(cells) + 1);
    g[0] = 0;
    for (int i = 1; i <= cells; ++i) g[static_cast<std::size_t>(i)] = distance_from_one(i * h);

    const Wide golden = (std::sqrt(Wide(5)) - 1) / 2;
    for (int i = 2; i < cells; ++i) {
        const auto u = static_cast<std::size_t>(i);
        if (!(g[u] <= g[u - 1] && g[u] <= g[u + 1])) continue;
        Wide lo = (i - 1) * h;
        Wide hi = (i + 1) * h;
        Wide x1 = hi - golden * (hi - lo);
        Wide x2 = lo + golden * (hi - lo);
        Wide f1 = distance_from_one(x1);
        Wide f2 = distance_from_one(x2);
        while (hi - lo > 4 * std::numeric_limits<Wide>::epsilon() * hi) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - golden * (hi - lo);
                f1 = distance_from_one(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + golden * (hi - lo);
                f2 = distance_from_one(x2);
            }
        }
        const Wide best = f1 <= f2 ? x1 : x2;
        if (std::min(f1, f2) < threshold && best <= Wide(search_max)) return static_cast<Real>(best);
    }
    return std::nullopt;
}

}  // namespace fracml
