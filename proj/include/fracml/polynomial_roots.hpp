#pragma once

// Simultaneous (Weierstrass / Durand-Kerner) root iteration with clustering of
// numerically repeated roots.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fracml/errors.hpp"

namespace fracml {

template <std::floating_point Real>
struct RootMultiplicity {
    std::complex<Real> root;
    int multiplicity = 1;
};

struct RootOptions {
    /// Roots closer than cluster_tol * max(1, |root|) are merged.
    double cluster_tol = 1e-8;
    /// Relative residual |p(z)| / Σ|p_m||z|^m every root must reach.
    double residual_tol = 1e-12;
    int max_sweeps = 500;
};

namespace detail {

template <std::floating_point Real>
Real relative_residual(const std::vector<std::complex<Real>>& monic, std::complex<Real> z) {
    std::complex<Real> value = 0;
    Real scale = 0;
    const Real r = std::abs(z);
    for (auto it = monic.rbegin(); it != monic.rend(); ++it) {
        value = value * z + *it;
        scale = scale * r + std::abs(*it);
    }
    return scale > 0 ? std::abs(value) / scale : Real(0);
}

// A root of multiplicity m is a simple root of the (m-1)-th derivative, where
// Newton's method converges quadratically; the cluster centroid is only
// accurate to about eps^{1/m}.
template <std::floating_point Real>
std::complex<Real> polish_multiple_root(const std::vector<std::complex<Real>>& monic,
                                        std::complex<Real> z, std::size_t multiplicity) {
    using C = std::complex<Real>;
    std::vector<C> d = monic;
    for (std::size_t r = 1; r < multiplicity; ++r) {
        for (std::size_t m = 1; m < d.size(); ++m) d[m - 1] = d[m] * Real(m);
        d.pop_back();
    }
    const C start = z;
    for (int it = 0; it < 20; ++it) {
        C value = 0;
        C slope = 0;
        for (auto c = d.rbegin(); c != d.rend(); ++c) {
            slope = slope * z + value;
            value = value * z + *c;
        }
        if (slope == C(0)) break;
        const C step = value / slope;
        z -= step;
        if (std::abs(step) <= 4 * std::numeric_limits<Real>::epsilon() * std::max(Real(1), std::abs(z))) break;
    }
    // Keep the centroid if Newton wandered off, e.g. for a spurious cluster.
    if (!std::isfinite(std::abs(z)) || std::abs(z - start) > Real(1e-3) * std::max(Real(1), std::abs(start))) {
        return start;
    }
    return z;
}

}  // namespace detail

/// All roots of Σ_m p_m λ^m, m = 0..n, grouped by multiplicity and sorted by
/// (real, imaginary) part. The iteration runs in `Real`; coefficients are
/// converted on entry.
template <std::floating_point Real, typename Derived>
std::vector<RootMultiplicity<Real>> find_polynomial_roots(const Eigen::MatrixBase<Derived>& coeffs,
                                                          const RootOptions& options = {}) {
    using C = std::complex<Real>;
    const Eigen::Index n = coeffs.size() - 1;
    if (n < 1) throw DomainError("find_roots: polynomial degree must be at least 1");
    const C lead(coeffs[n]);
    if (lead == C(0)) throw DomainError("find_roots: leading coefficient is zero");

    std::vector<C> monic(static_cast<std::size_t>(n) + 1);
    bool real_coefficients = true;
    for (Eigen::Index m = 0; m <= n; ++m) {
        const C c(coeffs[m]);
        real_coefficients = real_coefficients && c.imag() == 0;
        monic[static_cast<std::size_t>(m)] = c / lead;
    }
    const auto un = static_cast<std::size_t>(n);

    std::vector<C> z(un);
    if (n == 1) {
        z[0] = -monic[0];
    } else {
        // Initial points on a circle enclosing all roots (Fujiwara bound), with
        // an angular offset that avoids symmetric stagnation.
        Real radius = 0;
        for (std::size_t m = 0; m < un; ++m) {
            radius = std::max(radius, std::pow(std::abs(monic[m]), Real(1) / Real(un - m)));
        }
        radius = std::max(Real(2) * radius, Real(1e-3));
        for (std::size_t k = 0; k < un; ++k) {
            const Real angle = 2 * std::numbers::pi_v<Real> * Real(k) / Real(un) + Real(0.4);
            z[k] = std::polar(radius, angle);
        }

        constexpr Real eps = std::numeric_limits<Real>::epsilon();
        const auto residuals_met = [&] {
            return std::all_of(z.begin(), z.end(), [&](const C& root) {
                return detail::relative_residual(monic, root) <= Real(options.residual_tol);
            });
        };
        int sweeps_after_residual = -1;
        bool converged = false;
        for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
            Real max_step = 0;
            for (std::size_t i = 0; i < un; ++i) {
                C value = 0;
                for (auto it = monic.rbegin(); it != monic.rend(); ++it) value = value * z[i] + *it;
                C denominator = 1;
                for (std::size_t j = 0; j < un; ++j) {
                    if (j != i) denominator *= z[i] - z[j];
                }
                if (denominator == C(0)) denominator = C(eps);
                const C step = value / denominator;
                z[i] -= step;
                max_step = std::max(max_step, std::abs(step) / std::max(Real(1), std::abs(z[i])));
            }
            if (max_step <= 4 * eps) {
                converged = residuals_met();
                if (converged) break;
            }
            // Near a multiple root the corrections only shrink linearly and stall
            // at the noise floor; polish for a fixed number of sweeps once the
            // residual target has been met.
            if (sweeps_after_residual < 0 && residuals_met()) sweeps_after_residual = 0;
            if (sweeps_after_residual >= 0 && ++sweeps_after_residual > 100) {
                converged = true;
                break;
            }
        }
        if (!converged && !residuals_met()) {
            throw NoConvergenceError("find_roots: no convergence after " +
                                     std::to_string(options.max_sweeps) + " sweeps");
        }
    }

    // Greedy clustering around running centroids.
    std::vector<std::vector<C>> groups;
    for (const C& root : z) {
        bool placed = false;
        for (auto& group : groups) {
            C centroid = 0;
            for (const C& g : group) centroid += g;
            centroid /= Real(group.size());
            if (std::abs(root - centroid) <=
                Real(options.cluster_tol) * std::max(Real(1), std::abs(centroid))) {
                group.push_back(root);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({root});
    }

    std::vector<RootMultiplicity<Real>> out;
    for (const auto& group : groups) {
        C centroid = 0;
        for (const C& g : group) centroid += g;
        centroid /= Real(group.size());
        if (group.size() > 1) centroid = detail::polish_multiple_root(monic, centroid, group.size());
        if (real_coefficients &&
            std::abs(centroid.imag()) <= Real(options.cluster_tol) * std::max(Real(1), std::abs(centroid))) {
            // Real polynomial: a root this close to the axis is real (a complex
            // pair would have been split into two clusters).
            centroid.imag(0);
        }
        out.push_back({centroid, static_cast<int>(group.size())});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.root.real() != y.root.real()) return x.root.real() < y.root.real();
        return x.root.imag() < y.root.imag();
    });
    return out;
}

}  // namespace fracml
