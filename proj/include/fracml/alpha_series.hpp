#pragma once

// Truncated generalized power series Σ_{k=0..N} c_k t^{kα}.
//
// Every function handled by the solver lives on the lattice {t^{kα}}, so the
// Jumarie derivative, the fractional integral, products and operator residuals
// can all be computed exactly coefficient by coefficient here. Operations that
// shift the lattice (derivatives) drop the top coefficient; they never
// manufacture tail terms they cannot know.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <string>
#include <type_traits>

#include <Eigen/Core>

#include "fracml/errors.hpp"
#include "fracml/mittag_leffler.hpp"
#include "fracml/special_functions.hpp"

namespace fracml {

template <std::floating_point Real = double>
class AlphaSeries {
public:
    using Scalar = std::complex<Real>;
    using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    AlphaSeries(Real alpha, Coeffs coeffs) : alpha_(alpha), coeffs_(std::move(coeffs)) {
        if (!(alpha_ > 0 && alpha_ <= 1)) {
            throw DomainError("AlphaSeries: alpha must lie in (0, 1], got " +
                              detail::describe(alpha_));
        }
        if (coeffs_.size() == 0) throw OrderError("AlphaSeries: needs at least one coefficient");
        for (Eigen::Index k = 0; k < coeffs_.size(); ++k) {
            if (!std::isfinite(coeffs_[k].real()) || !std::isfinite(coeffs_[k].imag())) {
                throw DomainError("AlphaSeries: coefficient " + std::to_string(k) +
                                  " is not finite");
            }
        }
    }

    Real alpha() const { return alpha_; }
    const Coeffs& coeffs() const { return coeffs_; }
    /// Truncation order N: the highest stored power is t^{Nα}.
    Eigen::Index order() const { return coeffs_.size() - 1; }
    Scalar operator[](Eigen::Index k) const { return coeffs_[k]; }

private:
    Real alpha_;
    Coeffs coeffs_;
};

namespace detail {

template <std::floating_point Real>
void require_same_lattice(const AlphaSeries<Real>& a, const AlphaSeries<Real>& b) {
    if (a.alpha() != b.alpha()) {
        throw AlphaMismatchError("series on different lattices: alpha " + describe(a.alpha()) +
                                 " vs " + describe(b.alpha()));
    }
}

// 1 / Γ(1 + kα), through the log domain once Γ would overflow.
template <std::floating_point Real>
Real reciprocal_gamma_lattice(Real alpha, Eigen::Index k) {
    const Real x = 1 + Real(k) * alpha;
    if (x <= Real(kGammaArgumentBound)) return 1 / gamma(x);
    return std::exp(-log_gamma(x));
}

template <std::floating_point Real>
void require_order(Eigen::Index n, const char* what) {
    if (n < 1) throw OrderError(std::string(what) + ": order must be at least 1");
}

}  // namespace detail

/// Series c_k = a^k / Γ(1 + kα) of E_α(a t^α), k = 0..N.
template <std::floating_point Real>
AlphaSeries<Real> series_from_ml(Real alpha, std::type_identity_t<std::complex<Real>> a, Eigen::Index order) {
    detail::require_order<Real>(order, "series_from_ml");
    typename AlphaSeries<Real>::Coeffs c(order + 1);
    std::complex<Real> power = 1;
    for (Eigen::Index k = 0; k <= order; ++k) {
        c[k] = power * detail::reciprocal_gamma_lattice(alpha, k);
        power *= a;
    }
    return {alpha, std::move(c)};
}

/// Coefficients of cos_α(b t^α) up to order N.
template <std::floating_point Real>
AlphaSeries<Real> cos_alpha_series(Real alpha, std::type_identity_t<Real> b, Eigen::Index order) {
    detail::require_order<Real>(order, "cos_alpha_series");
    typename AlphaSeries<Real>::Coeffs c = AlphaSeries<Real>::Coeffs::Zero(order + 1);
    Real power = 1;
    for (Eigen::Index k = 0; k <= order; k += 2) {
        c[k] = power * detail::reciprocal_gamma_lattice(alpha, k);
        power *= -b * b;
    }
    return {alpha, std::move(c)};
}

/// Coefficients of sin_α(b t^α) up to order N.
template <std::floating_point Real>
AlphaSeries<Real> sin_alpha_series(Real alpha, std::type_identity_t<Real> b, Eigen::Index order) {
    detail::require_order<Real>(order, "sin_alpha_series");
    typename AlphaSeries<Real>::Coeffs c = AlphaSeries<Real>::Coeffs::Zero(order + 1);
    Real power = b;
    for (Eigen::Index k = 1; k <= order; k += 2) {
        c[k] = power * detail::reciprocal_gamma_lattice(alpha, k);
        power *= -b * b;
    }
    return {alpha, std::move(c)};
}

/// The constant series [value, 0, ..., 0].
template <std::floating_point Real>
AlphaSeries<Real> constant_series(Real alpha, std::type_identity_t<std::complex<Real>> value, Eigen::Index order) {
    typename AlphaSeries<Real>::Coeffs c = AlphaSeries<Real>::Coeffs::Zero(order + 1);
    c[0] = value;
    return {alpha, std::move(c)};
}

/// Keeps coefficients 0..order.
template <std::floating_point Real>
AlphaSeries<Real> truncate(const AlphaSeries<Real>& s, Eigen::Index order) {
    if (order < 0 || order > s.order()) {
        throw OrderError("truncate: order " + std::to_string(order) + " outside [0, " +
                         std::to_string(s.order()) + "]");
    }
    return {s.alpha(), s.coeffs().head(order + 1)};
}

/// Jumarie derivative of order α, term by term:
/// D^α t^{kα} = Γ(1 + kα)/Γ(1 + (k-1)α) t^{(k-1)α}, D^α 1 = 0.
template <std::floating_point Real>
AlphaSeries<Real> jumarie_deriv(const AlphaSeries<Real>& s) {
    if (s.order() < 1) throw OrderError("jumarie_deriv: series of order 0 has no usable derivative");
    const Real alpha = s.alpha();
    typename AlphaSeries<Real>::Coeffs c(s.order());
    for (Eigen::Index k = 0; k < s.order(); ++k) {
        c[k] = s[k + 1] * gamma_ratio<Real>(1 + Real(k + 1) * alpha, 1 + Real(k) * alpha);
    }
    return {alpha, std::move(c)};
}

/// Fractional integral of order α from 0; the result has order N + 1 and no
/// constant term.
template <std::floating_point Real>
AlphaSeries<Real> frac_integral(const AlphaSeries<Real>& s) {
    const Real alpha = s.alpha();
    typename AlphaSeries<Real>::Coeffs c(s.order() + 2);
    c[0] = 0;
    for (Eigen::Index k = 0; k <= s.order(); ++k) {
        c[k + 1] = s[k] * gamma_ratio<Real>(1 + Real(k) * alpha, 1 + Real(k + 1) * alpha);
    }
    return {alpha, std::move(c)};
}

template <std::floating_point Real>
AlphaSeries<Real> add(const AlphaSeries<Real>& a, const AlphaSeries<Real>& b) {
    detail::require_same_lattice(a, b);
    const Eigen::Index n = std::min(a.order(), b.order()) + 1;
    return {a.alpha(), a.coeffs().head(n) + b.coeffs().head(n)};
}

template <std::floating_point Real>
AlphaSeries<Real> scale(const AlphaSeries<Real>& s, std::type_identity_t<std::complex<Real>> factor) {
    return {s.alpha(), s.coeffs() * factor};
}

/// Cauchy product on the lattice: t^{jα} t^{kα} = t^{(j+k)α}.
template <std::floating_point Real>
AlphaSeries<Real> mul(const AlphaSeries<Real>& a, const AlphaSeries<Real>& b) {
    detail::require_same_lattice(a, b);
    const Eigen::Index order = std::min(a.order(), b.order());
    typename AlphaSeries<Real>::Coeffs c(order + 1);
    for (Eigen::Index k = 0; k <= order; ++k) {
        detail::CompensatedSum<std::complex<Real>> acc;
        for (Eigen::Index j = 0; j <= k; ++j) acc.add(a[j] * b[k - j]);
        c[k] = acc.value();
    }
    return {a.alpha(), std::move(c)};
}

template <std::floating_point Real>
AlphaSeries<Real> operator+(const AlphaSeries<Real>& a, const AlphaSeries<Real>& b) {
    return add(a, b);
}

template <std::floating_point Real>
AlphaSeries<Real> operator-(const AlphaSeries<Real>& a, const AlphaSeries<Real>& b) {
    return add(a, scale(b, std::complex<Real>(-1)));
}

template <std::floating_point Real>
AlphaSeries<Real> operator*(const AlphaSeries<Real>& a, const AlphaSeries<Real>& b) {
    return mul(a, b);
}

template <std::floating_point Real>
AlphaSeries<Real> operator*(std::type_identity_t<std::complex<Real>> factor, const AlphaSeries<Real>& s) {
    return scale(s, factor);
}

/// Σ c_k t^{kα} with compensated summation.
template <std::floating_point Real>
std::complex<Real> eval(const AlphaSeries<Real>& s, std::type_identity_t<Real> t) {
    if (!(t >= 0)) throw DomainError("eval: t must be non-negative");
    const Real x = std::pow(t, s.alpha());
    detail::CompensatedSum<std::complex<Real>> acc;
    Real power = 1;
    for (Eigen::Index k = 0; k <= s.order(); ++k) {
        acc.add(s[k] * power);
        power *= x;
    }
    return acc.value();
}

/// Σ_m p_m D^{mα} s with D^{mα} the m-fold sequential Jumarie derivative. The
/// result has order N - n where n is the operator degree.
template <std::floating_point Real>
AlphaSeries<Real> apply_operator(const AlphaSeries<Real>& s,
                                 const typename AlphaSeries<Real>::Coeffs& op) {
    if (op.size() == 0) throw DomainError("apply_operator: empty operator");
    const Eigen::Index degree = op.size() - 1;
    if (s.order() < degree) {
        throw OrderError("apply_operator: series order " + std::to_string(s.order()) +
                         " is below operator degree " + std::to_string(degree));
    }
    const Eigen::Index out_order = s.order() - degree;
    typename AlphaSeries<Real>::Coeffs out = AlphaSeries<Real>::Coeffs::Zero(out_order + 1);
    AlphaSeries<Real> derivative = s;
    for (Eigen::Index m = 0; m <= degree; ++m) {
        if (m > 0) derivative = jumarie_deriv(derivative);
        out += op[m] * derivative.coeffs().head(out_order + 1);
    }
    return {s.alpha(), std::move(out)};
}

template <std::floating_point Real>
Real max_abs_coefficient(const AlphaSeries<Real>& s) {
    return s.coeffs().cwiseAbs().maxCoeff();
}

}  // namespace fracml
