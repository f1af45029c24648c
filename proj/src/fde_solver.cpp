#include "fracml/fde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "fracml/errors.hpp"
#include "fracml/mittag_leffler.hpp"
#include "fracml/special_functions.hpp"

namespace fracml {

namespace {

constexpr double kMLTolerance = 1e-17;

bool finite(std::complex<double> z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool all_real(const Eigen::VectorXcd& v) { return (v.imag().array() == 0.0).all(); }

std::complex<double> ml_value(double alpha, std::complex<double> z) {
    return ml<double>(alpha, z, kMLTolerance).value;
}

}  // namespace

void validate(const FDEProblem& problem) {
    if (!(problem.alpha > 0 && problem.alpha <= 1)) {
        throw ValidationError("alpha must lie in (0, 1], got " + detail::describe(problem.alpha));
    }
    const Eigen::Index n = problem.char_coeffs.size() - 1;
    if (n < 1) throw ValidationError("operator must have degree at least 1");
    for (Eigen::Index m = 0; m <= n; ++m) {
        if (!finite(problem.char_coeffs[m])) {
            throw ValidationError("coefficient " + std::to_string(m) + " is not finite");
        }
    }
    if (problem.char_coeffs[n] == std::complex<double>(0.0)) {
        throw ValidationError("leading operator coefficient must be nonzero");
    }
    if (problem.ics.size() != n) {
        throw ValidationError("expected " + std::to_string(n) + " initial conditions, got " +
                              std::to_string(problem.ics.size()));
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!finite(problem.ics[k])) {
            throw ValidationError("initial condition " + std::to_string(k) + " is not finite");
        }
    }
    if (problem.grid) {
        if (!(problem.grid->t_end > 0) || !std::isfinite(problem.grid->t_end)) {
            throw ValidationError("grid t_end must be positive");
        }
        if (problem.grid->points < 2) throw ValidationError("grid needs at least 2 points");
    }
}

std::vector<RootMultiplicity<double>> find_roots(const Eigen::VectorXcd& char_coeffs,
                                                 const RootOptions& options) {
    using Wide = long double;
    const Eigen::Matrix<std::complex<Wide>, Eigen::Dynamic, 1> wide =
        char_coeffs.cast<std::complex<Wide>>();
    const auto roots = find_polynomial_roots<Wide>(wide, options);

    std::vector<RootMultiplicity<double>> out;
    out.reserve(roots.size());
    for (const auto& r : roots) out.push_back({std::complex<double>(r.root), r.multiplicity});

    if (all_real(char_coeffs)) {
        // Make conjugate partners exact conjugates of each other.
        std::vector<bool> used(out.size(), false);
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (used[i] || out[i].root.imag() <= 0) continue;
            std::size_t best = out.size();
            double best_distance = 0.0;
            for (std::size_t j = 0; j < out.size(); ++j) {
                if (j == i || used[j] || out[j].root.imag() >= 0) continue;
                if (out[j].multiplicity != out[i].multiplicity) continue;
                const double d = std::abs(out[j].root - std::conj(out[i].root));
                if (best == out.size() || d < best_distance) {
                    best = j;
                    best_distance = d;
                }
            }
            if (best != out.size()) {
                out[best].root = std::conj(out[i].root);
                used[i] = used[best] = true;
            }
        }
    }
    return out;
}

Solution general_solution(double alpha, std::span<const RootMultiplicity<double>> roots) {
    if (!(alpha > 0 && alpha <= 1)) throw DomainError("general_solution: alpha must lie in (0, 1]");
    Solution s;
    s.alpha = alpha;
    for (const auto& r : roots) {
        if (r.multiplicity < 1) throw DomainError("general_solution: multiplicity must be positive");
        if (r.multiplicity > 2) s.extends_repeated_root_pattern = true;
        for (int j = 0; j < r.multiplicity; ++j) s.modes.push_back({r.root, j, {0.0, 0.0}});
    }
    return s;
}

AlphaSeries<double> mode_series(double alpha, std::complex<double> root, int degree,
                                Eigen::Index order) {
    if (degree < 0) throw DomainError("mode_series: degree must be non-negative");
    if (order < degree + 1) {
        throw OrderError("mode_series: order " + std::to_string(order) +
                         " too small for degree " + std::to_string(degree));
    }
    const auto base = series_from_ml(alpha, root, order - degree);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(order + 1);
    c.tail(order + 1 - degree) = base.coeffs() / gamma(1.0 + degree * alpha);
    return {alpha, std::move(c)};
}

Solution apply_ics(const Solution& solution, const Eigen::VectorXcd& ics, Eigen::Index order) {
    const auto n = static_cast<Eigen::Index>(solution.modes.size());
    if (ics.size() != n) {
        throw DomainError("apply_ics: " + std::to_string(n) + " modes but " +
                          std::to_string(ics.size()) + " initial conditions");
    }
    if (n == 0) throw DomainError("apply_ics: no modes");

    Eigen::MatrixXcd system(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Mode& mode = solution.modes[static_cast<std::size_t>(i)];
        auto s = mode_series(solution.alpha, mode.root, mode.degree,
                             std::max<Eigen::Index>(order, n + mode.degree + 1));
        for (Eigen::Index k = 0; k < n; ++k) {
            system(k, i) = s[0];
            if (k + 1 < n) s = jumarie_deriv(s);
        }
    }

    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
    double row_scale = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) row_scale *= system.row(k).norm();
    const double det = std::abs(lu.determinant());
    if (!(row_scale > 0) || !(det > 1e-12 * row_scale)) {
        throw SingularSystemError("apply_ics: initial-condition system is singular (|det| = " +
                                  detail::describe(det) + ")");
    }
    const Eigen::VectorXcd amplitudes = lu.solve(ics);

    Solution out = solution;
    out.real_form.reset();
    for (Eigen::Index i = 0; i < n; ++i) out.modes[static_cast<std::size_t>(i)].amplitude = amplitudes[i];
    return out;
}

Solution to_real_form(const Solution& solution) {
    constexpr double tol = 1e-9;
    const auto near = [](std::complex<double> x, std::complex<double> y) {
        return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x));
    };

    std::vector<RealTerm> terms;
    std::vector<bool> used(solution.modes.size(), false);
    for (std::size_t i = 0; i < solution.modes.size(); ++i) {
        if (used[i]) continue;
        const Mode& m = solution.modes[i];
        const double scale = std::max(1.0, std::abs(m.amplitude));
        if (m.root.imag() == 0.0) {
            if (std::abs(m.amplitude.imag()) > tol * scale) {
                throw PairingError("real root " + detail::describe(m.root.real()) +
                                   " carries a complex amplitude");
            }
            terms.push_back({m.root.real(), 0.0, m.degree, m.amplitude.real(), 0.0});
            used[i] = true;
            continue;
        }
        std::size_t partner = solution.modes.size();
        for (std::size_t j = 0; j < solution.modes.size(); ++j) {
            if (j == i || used[j]) continue;
            const Mode& q = solution.modes[j];
            if (q.degree == m.degree && near(q.root, std::conj(m.root))) {
                partner = j;
                break;
            }
        }
        if (partner == solution.modes.size()) {
            throw PairingError("root " + detail::describe(m.root.real()) + " + " +
                               detail::describe(m.root.imag()) + "i has no conjugate partner");
        }
        used[i] = used[partner] = true;
        // Orient the pair so that the upper root comes first.
        const Mode& upper = m.root.imag() > 0 ? m : solution.modes[partner];
        const Mode& lower = m.root.imag() > 0 ? solution.modes[partner] : m;
        const std::complex<double> A = upper.amplitude + lower.amplitude;
        const std::complex<double> B = std::complex<double>(0.0, 1.0) * (upper.amplitude - lower.amplitude);
        const double pair_scale =
            std::max({1.0, std::abs(upper.amplitude), std::abs(lower.amplitude)});
        if (std::abs(A.imag()) > tol * pair_scale || std::abs(B.imag()) > tol * pair_scale) {
            throw PairingError("amplitudes of a conjugate pair are not conjugate");
        }
        terms.push_back({upper.root.real(), upper.root.imag(), m.degree, A.real(), B.real()});
    }
    Solution out = solution;
    out.real_form = std::move(terms);
    return out;
}

Solution solve(const FDEProblem& problem, const SolveOptions& options) {
    validate(problem);
    const auto roots = find_roots(problem.char_coeffs, options.roots);
    Solution s = general_solution(problem.alpha, roots);
    try {
        s = apply_ics(s, problem.ics, options.series_order);
    } catch (const SingularSystemError& e) {
        // Roots of multiplicity 3 or more come out of the iteration only to
        // about the cube root of the working precision and may escape clustering.
        throw SingularSystemError(std::string(e.what()) +
                                  "; if the operator has a root of multiplicity > 2, raise the "
                                  "cluster tolerance (currently " +
                                  detail::describe(options.roots.cluster_tol) + ")");
    }
    if (all_real(problem.char_coeffs) && all_real(problem.ics)) s = to_real_form(s);
    return s;
}

ResidualReport residual(const Solution& solution, const Eigen::VectorXcd& char_coeffs,
                        Eigen::Index order) {
    const Eigen::Index degree = char_coeffs.size() - 1;
    if (order < degree + 10) {
        throw OrderError("residual: series order must be at least operator degree + 10");
    }
    if (solution.modes.empty()) throw DomainError("residual: no modes");
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(order + 1);
    for (const Mode& m : solution.modes) {
        y += m.amplitude * mode_series(solution.alpha, m.root, m.degree, order).coeffs();
    }
    const AlphaSeries<double> series(solution.alpha, y);
    const auto applied = apply_operator(series, char_coeffs);
    const double scale = max_abs_coefficient(series);
    ResidualReport report;
    report.normalized = scale > 0 ? max_abs_coefficient(applied) / scale : 0.0;
    report.leading = std::abs(applied[0]);
    return report;
}

std::vector<std::complex<double>> eval_solution(const Solution& solution,
                                                std::span<const double> t_values) {
    std::vector<std::complex<double>> out;
    out.reserve(t_values.size());
    for (const double t : t_values) {
        if (!(t >= 0)) throw DomainError("eval_solution: t must be non-negative");
        const double x = std::pow(t, solution.alpha);
        std::complex<double> y = 0.0;
        try {
            for (const Mode& m : solution.modes) {
                const double weight =
                    std::pow(t, m.degree * solution.alpha) / gamma(1.0 + m.degree * solution.alpha);
                y += m.amplitude * weight * ml_value(solution.alpha, m.root * x);
            }
        } catch (const ConvergenceError& e) {
            throw ConvergenceError(std::string(e.what()) + " at t = " + detail::describe(t));
        }
        out.push_back(y);
    }
    return out;
}

namespace {

const std::vector<RealTerm>& require_real_form(const Solution& solution) {
    if (!solution.real_form) throw PairingError("solution has no real form");
    return *solution.real_form;
}

double degree_weight(double t, int degree, double alpha) {
    return std::pow(t, degree * alpha) / gamma(1.0 + degree * alpha);
}

}  // namespace

double eval_real_form(const Solution& solution, double t) {
    if (!(t >= 0)) throw DomainError("eval_real_form: t must be non-negative");
    const double alpha = solution.alpha;
    const double x = std::pow(t, alpha);
    double y = 0.0;
    for (const RealTerm& term : require_real_form(solution)) {
        const double w = degree_weight(t, term.degree, alpha);
        if (term.oscillatory()) {
            const auto e = ml_value(alpha, std::complex<double>(term.a, term.b) * x);
            y += w * (term.A * e.real() + term.B * e.imag());
        } else {
            y += w * term.A * ml_value(alpha, term.a * x).real();
        }
    }
    return y;
}

double eval_factorized_real_form(const Solution& solution, double t) {
    if (!(t >= 0)) throw DomainError("eval_factorized_real_form: t must be non-negative");
    const double alpha = solution.alpha;
    const double x = std::pow(t, alpha);
    double y = 0.0;
    for (const RealTerm& term : require_real_form(solution)) {
        const double w = degree_weight(t, term.degree, alpha);
        const double growth = ml_value(alpha, term.a * x).real();
        if (term.oscillatory()) {
            // cos_α(b t^α) = cos_α(s^α) with s = b^{1/α} t.
            const double s = std::pow(term.b, 1.0 / alpha) * t;
            y += w * growth *
                 (term.A * cos_alpha(alpha, s, kMLTolerance) + term.B * sin_alpha(alpha, s, kMLTolerance));
        } else {
            y += w * term.A * growth;
        }
    }
    return y;
}

std::complex<double> classical_reference(const FDEProblem& problem, double t) {
    validate(problem);
    const Eigen::Index n = problem.char_coeffs.size() - 1;
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) companion(i, i + 1) = 1.0;
    for (Eigen::Index m = 0; m < n; ++m) {
        companion(n - 1, m) = -problem.char_coeffs[m] / problem.char_coeffs[n];
    }
    const Eigen::MatrixXcd propagator = (companion * t).exp();
    return (propagator * problem.ics)[0];
}

std::vector<double> grid_points(const Grid& grid) {
    if (grid.points < 2) throw DomainError("grid needs at least 2 points");
    std::vector<double> t(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        t[static_cast<std::size_t>(i)] = grid.t_end * i / (grid.points - 1);
    }
    t.back() = grid.t_end;
    return t;
}

std::vector<DeviationReport> deviation_report(std::span<const double> alpha_grid,
                                              const DeviationScenario& scenario) {
    for (const double alpha : alpha_grid) {
        if (!(alpha > 0 && alpha <= 1)) {
            throw DomainError("deviation_report: alpha must lie in (0, 1], got " +
                              detail::describe(alpha));
        }
    }
    const double a = scenario.a;
    const double b = scenario.b;
    const double t = scenario.t;
    if (!(t >= 0)) throw DomainError("deviation_report: t must be non-negative");
    const Eigen::Index order = scenario.series_order;

    struct Measured {
        double deviation;
        double scale;
    };
    using Measure = std::function<Measured(double)>;
    const auto E = [](double alpha, std::complex<double> z) { return ml_value(alpha, z); };

    const std::vector<std::pair<std::string, Measure>> identities = {
        {"product_law",
         [&](double alpha) {
             const double x = std::pow(t, alpha);
             const auto lhs = E(alpha, a * x) * E(alpha, b * x);
             const auto rhs = E(alpha, (a + b) * x);
             return Measured{std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs))};
         }},
        {"reciprocal_law",
         [&](double alpha) {
             const double x = std::pow(t, alpha);
             const auto lhs = E(alpha, a * x) * E(alpha, -a * x);
             return Measured{std::abs(lhs - 1.0), std::max(1.0, std::abs(lhs))};
         }},
        {"square_law",
         [&](double alpha) {
             const double x = std::pow(t, alpha);
             const auto e = E(alpha, a * x);
             const auto rhs = E(alpha, 2.0 * a * x);
             return Measured{std::abs(e * e - rhs), std::max(std::abs(e * e), std::abs(rhs))};
         }},
        {"conjugate_factorization",
         [&](double alpha) {
             const double x = std::pow(t, alpha);
             const auto whole = E(alpha, std::complex<double>(a, b) * x);
             const auto split = E(alpha, a * x) * E(alpha, std::complex<double>(0.0, b) * x);
             return Measured{std::abs(whole - split), std::max(std::abs(whole), std::abs(split))};
         }},
        {"leibniz_rule",
         [&](double alpha) {
             const auto u = series_from_ml(alpha, a, order);
             const auto v = series_from_ml(alpha, b, order);
             const auto lhs = jumarie_deriv(u * v);
             const auto rhs = u * jumarie_deriv(v) + v * jumarie_deriv(u);
             const auto l = eval(lhs, t);
             const auto r = eval(rhs, t);
             return Measured{std::abs(l - r), std::max(std::abs(l), std::abs(r))};
         }},
        {"repeated_root_residual",
         [&](double alpha) {
             Solution s;
             s.alpha = alpha;
             s.modes.push_back({a, 1, {1.0, 0.0}});
             Eigen::VectorXcd op(3);
             op << a * a, -2.0 * a, 1.0;
             const auto r = residual(s, op, std::max<Eigen::Index>(order, 12));
             return Measured{r.leading, std::max(1.0, std::abs(a))};
         }},
    };

    std::vector<DeviationReport> reports;
    for (const auto& [name, measure] : identities) {
        DeviationReport rep;
        rep.identity = name;
        rep.t = name == "repeated_root_residual" ? 0.0 : t;
        for (const double alpha : alpha_grid) {
            rep.alphas.push_back(alpha);
            rep.deviations.push_back(measure(alpha).deviation);
        }
        const Measured at_one = measure(1.0);
        rep.deviation_at_alpha1 = at_one.deviation;
        rep.exact_at_alpha1 = at_one.deviation <= kExactnessTolerance * std::max(1.0, at_one.scale);
        reports.push_back(std::move(rep));
    }
    return reports;
}

}  // namespace fracml
