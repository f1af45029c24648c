#pragma once

// Linear constant-coefficient fractional differential equations
//
//     Σ_{m=0..n} p_m D^{mα} y = 0,   D^{mα} = D^α ∘ ... ∘ D^α (Jumarie),
//
// solved by factoring the characteristic polynomial Σ p_m λ^m. A root a of
// multiplicity r contributes the modes
//
//     t^{jα} / Γ(1 + jα) · E_α(a t^α),   j = 0..r-1.
//
// For simple roots the modes are exact solutions. For r >= 2 and α != 1 the
// higher modes are not: the ansatz needs a Leibniz rule for D^α that the true
// series product does not obey. The solver still builds them, and residual()
// and deviation_report() measure how far they are from solving the equation.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fracml/alpha_series.hpp"
#include "fracml/polynomial_roots.hpp"

namespace fracml {

struct Grid {
    double t_end = 1.0;
    int points = 51;

    friend bool operator==(const Grid&, const Grid&) = default;
};

struct FDEProblem {
    double alpha = 1.0;
    /// p_0..p_n of the operator Σ p_m D^{mα}; p_n != 0.
    Eigen::VectorXcd char_coeffs;
    /// [y(0), D^α y(0), ..., D^{(n-1)α} y(0)].
    Eigen::VectorXcd ics;
    std::optional<Grid> grid;

    friend bool operator==(const FDEProblem& a, const FDEProblem& b) {
        return a.alpha == b.alpha && a.char_coeffs.size() == b.char_coeffs.size() &&
               a.char_coeffs == b.char_coeffs && a.ics.size() == b.ics.size() &&
               a.ics == b.ics && a.grid == b.grid;
    }
};

/// Throws ValidationError on the first broken invariant.
void validate(const FDEProblem& problem);

/// Characteristic roots with multiplicities, iterated in extended precision.
std::vector<RootMultiplicity<double>> find_roots(const Eigen::VectorXcd& char_coeffs,
                                                 const RootOptions& options = {});

struct Mode {
    std::complex<double> root;
    int degree = 0;
    std::complex<double> amplitude{0.0, 0.0};
};

/// One real-valued term of the real form.
///
/// Real root (imag == 0):
///     A · t^{jα}/Γ(1+jα) · E_α(a t^α)
/// Conjugate pair a ± ib, b > 0:
///     t^{jα}/Γ(1+jα) · [A · Re E_α((a+ib) t^α) + B · Im E_α((a+ib) t^α)]
/// with A = A₁ + B₁ and B = i(A₁ - B₁) for the pair amplitudes A₁, B₁. When
/// a = 0 or α = 1, Re/Im E_α((a+ib)t^α) equal E_α(at^α) cos_α(bt^α) and
/// E_α(at^α) sin_α(bt^α); otherwise that factorized form is only approximate.
struct RealTerm {
    double a = 0.0;
    double b = 0.0;
    int degree = 0;
    double A = 0.0;
    double B = 0.0;
    bool oscillatory() const { return b != 0.0; }
};

struct Solution {
    double alpha = 1.0;
    std::vector<Mode> modes;
    std::optional<std::vector<RealTerm>> real_form;
    /// Set when a root of multiplicity > 2 forced modes of degree >= 2.
    bool extends_repeated_root_pattern = false;
};

Solution general_solution(double alpha, std::span<const RootMultiplicity<double>> roots);

/// Series of t^{jα}/Γ(1+jα) · E_α(a t^α) up to order N.
AlphaSeries<double> mode_series(double alpha, std::complex<double> root, int degree,
                                Eigen::Index order);

/// Amplitudes matching D^{kα} y(0) = ics[k], k = 0..n-1.
Solution apply_ics(const Solution& solution, const Eigen::VectorXcd& ics, Eigen::Index order);

/// Groups conjugate pairs; requires the complex-mode sum to be real.
Solution to_real_form(const Solution& solution);

struct SolveOptions {
    RootOptions roots;
    Eigen::Index series_order = 60;
};

/// find_roots + general_solution + apply_ics, plus the real form whenever the
/// coefficients and initial conditions are real.
Solution solve(const FDEProblem& problem, const SolveOptions& options = {});

struct ResidualReport {
    /// max |coefficient of the operator applied to y| / max |coefficient of y|.
    double normalized = 0.0;
    /// |constant term| of the operator applied to y.
    double leading = 0.0;
};

/// Residual of the solution under the full operator, in series semantics.
ResidualReport residual(const Solution& solution, const Eigen::VectorXcd& char_coeffs,
                        Eigen::Index order);

/// y(t) = Σ amplitude · t^{jα}/Γ(1+jα) · E_α(root t^α).
std::vector<std::complex<double>> eval_solution(const Solution& solution,
                                                std::span<const double> t_values);

/// Value of the real form at t. Requires real_form.
double eval_real_form(const Solution& solution, double t);

/// The factorized rendering E_α(at^α)[A cos_α(bt^α) + B sin_α(bt^α)] of every
/// oscillatory term, evaluated literally. Requires real_form.
double eval_factorized_real_form(const Solution& solution, double t);

/// Classical reference for α = 1: first component of exp(C t) y0 with C the
/// companion matrix of the characteristic polynomial.
std::complex<double> classical_reference(const FDEProblem& problem, double t);

/// Uniform evaluation grid of the problem (0..t_end).
std::vector<double> grid_points(const Grid& grid);

struct DeviationScenario {
    double a = 1.0;
    double b = 1.0;
    double t = 1.0;
    Eigen::Index series_order = 60;
};

struct DeviationReport {
    std::string identity;
    double t = 0.0;
    std::vector<double> alphas;
    std::vector<double> deviations;
    double deviation_at_alpha1 = 0.0;
    bool exact_at_alpha1 = false;
};

inline constexpr double kExactnessTolerance = 1e-12;

/// Measured deviation of Mittag-Leffler identities that hold for the
/// exponential (α = 1) but not in general:
///   product_law             |E(at^α)E(bt^α) - E((a+b)t^α)|
///   reciprocal_law          |E(at^α)E(-at^α) - 1|
///   square_law              |E(at^α)² - E(2at^α)|
///   conjugate_factorization |E((a+ib)t^α) - E(at^α)E(ibt^α)|
///   leibniz_rule            |D^α(uv) - u D^α v - v D^α u| at t, u = E(at^α), v = E(bt^α)
///   repeated_root_residual  leading residual of (D^α - a)² on t^α/Γ(1+α) E(at^α)
std::vector<DeviationReport> deviation_report(std::span<const double> alpha_grid,
                                              const DeviationScenario& scenario = {});

}  // namespace fracml
