#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fracml/errors.hpp"
#include "fracml/fde_solver.hpp"
#include "fracml/mittag_leffler.hpp"
#include "oracles.hpp"

using cd = std::complex<double>;
using namespace fracml;

namespace {

Eigen::VectorXcd vec(std::initializer_list<cd> values) {
    Eigen::VectorXcd c(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (cd v : values) c[i++] = v;
    return c;
}

FDEProblem problem(double alpha, Eigen::VectorXcd coeffs, Eigen::VectorXcd ics) {
    FDEProblem p;
    p.alpha = alpha;
    p.char_coeffs = std::move(coeffs);
    p.ics = std::move(ics);
    return p;
}

// Coefficients of (λ - a)(λ - b) for real or conjugate roots.
Eigen::VectorXcd quadratic(cd a, cd b) { return vec({a * b, -(a + b), 1.0}); }

}  // namespace

TEST_CASE("general_solution mode layout") {
    const std::vector<RootMultiplicity<double>> single{{cd(0.7), 1}};
    const Solution s1 = general_solution(0.5, single);
    REQUIRE(s1.modes.size() == 1);
    CHECK(s1.modes[0].degree == 0);
    CHECK_FALSE(s1.extends_repeated_root_pattern);

    const std::vector<RootMultiplicity<double>> twice{{cd(-1), 2}};
    const Solution s2 = general_solution(0.5, twice);
    REQUIRE(s2.modes.size() == 2);
    CHECK(s2.modes[0].degree == 0);
    CHECK(s2.modes[1].degree == 1);
    CHECK_FALSE(s2.extends_repeated_root_pattern);

    const std::vector<RootMultiplicity<double>> thrice{{cd(2), 3}};
    CHECK(general_solution(0.5, thrice).extends_repeated_root_pattern);
}

TEST_CASE("single mode with y(0) = 1 is E_alpha(a t^alpha)") {
    const Solution s = solve(problem(0.5, vec({-1.0, 1.0}), vec({1.0})));
    REQUIRE(s.modes.size() == 1);
    CHECK(std::abs(s.modes[0].amplitude - 1.0) <= 1e-15);
    const double t = 1.0;
    const auto y = eval_solution(s, std::span<const double>(&t, 1));
    // mpmath: E_{1/2}(1) = e·erfc(-1)
    CHECK(std::abs(y[0] - 5.0089800807622834663) <= 1e-12);
}

TEST_CASE("classical problem y'' - 5y' + 6y = 0") {
    const FDEProblem p = problem(1.0, vec({6, -5, 1}), vec({2, 5}));
    const Solution s = solve(p);
    REQUIRE(s.modes.size() == 2);
    CHECK(std::abs(s.modes[0].root - 2.0) <= 1e-13);
    CHECK(std::abs(s.modes[0].amplitude - 1.0) <= 1e-12);
    CHECK(std::abs(s.modes[1].amplitude - 1.0) <= 1e-12);
    const double one = 1.0;
    CHECK(std::abs(eval_solution(s, std::span<const double>(&one, 1))[0] -
                   (std::exp(2.0) + std::exp(3.0))) <= 1e-11);
    for (double t : grid_points({1.0, 51})) {
        const double exact = std::exp(2 * t) + std::exp(3 * t);
        CHECK(std::abs(classical_reference(p, t) - exact) <= 1e-12 * exact);
    }
}

TEST_CASE("cosine from a conjugate pair at alpha = 1") {
    const Solution s = solve(problem(1.0, vec({1, 0, 1}), vec({1, 0})));
    REQUIRE(s.real_form.has_value());
    REQUIRE(s.real_form->size() == 1);
    const RealTerm& term = s.real_form->front();
    CHECK(term.a == 0.0);
    CHECK(term.b == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(term.A == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(term.B) <= 1e-14);
    for (double t : {0.0, 0.5, 2.0}) {
        CHECK(std::abs(eval_real_form(s, t) - std::cos(t)) <= 1e-13);
        CHECK(std::abs(eval_factorized_real_form(s, t) - std::cos(t)) <= 1e-13);
    }
}

TEST_CASE("distinct roots give exact series solutions") {
    for (double alpha : {0.3, 0.5, 0.9}) {
        const auto coeffs = quadratic(1.0, -2.0);
        const Solution s = solve(problem(alpha, coeffs, vec({1.5, -0.5})));
        CHECK(residual(s, coeffs, 60).normalized <= 1e-10);

        const auto pair = quadratic(cd(-0.5, 1.5), cd(-0.5, -1.5));
        const Solution c = solve(problem(alpha, pair, vec({1.0, 2.0})));
        CHECK(residual(c, pair, 60).normalized <= 1e-10);
    }
}

TEST_CASE("every degree-0 mode is annihilated by its own factor") {
    for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
        for (cd root : {cd(-3), cd(0.5), cd(1, -2)}) {
            Solution s;
            s.alpha = alpha;
            s.modes.push_back({root, 0, 1.0});
            CHECK(residual(s, vec({-root, 1.0}), 50).normalized <= 1e-12);
        }
    }
}

TEST_CASE("repeated root ansatz") {
    const auto coeffs = quadratic(1.0, 1.0);
    Solution s;
    s.alpha = 0.5;
    s.modes.push_back({1.0, 1, 1.0});
    // mpmath: |Γ(2)/Γ(3/2)² - 2| = |4/π - 2|
    CHECK(std::abs(residual(s, coeffs, 60).leading - 0.72676045526483731385) <= 1e-12);

    for (double a : {-2.0, 0.5, 3.0}) {
        Solution r;
        r.alpha = 0.7;
        r.modes.push_back({a, 1, 1.0});
        const double expected =
            std::abs(a) * std::abs(std::tgamma(1 + 2 * 0.7) / std::pow(std::tgamma(1 + 0.7), 2) - 2);
        CHECK(residual(r, quadratic(a, a), 40).leading == doctest::Approx(expected).epsilon(1e-12));
    }

    const Solution exact = solve(problem(1.0, coeffs, vec({1.0, 0.0})));
    CHECK(residual(exact, coeffs, 60).normalized <= 1e-13);
    for (double t : {0.0, 0.5, 1.0}) {
        const auto y = eval_solution(exact, std::span<const double>(&t, 1))[0];
        CHECK(std::abs(y - (1.0 - t) * std::exp(t)) <= 1e-13 * std::exp(t));
    }
}

TEST_CASE("initial conditions are reproduced") {
    const double alpha = 0.6;
    const auto coeffs = quadratic(cd(0.4, 1.1), cd(-1.3, 0.2));
    const auto ics = vec({cd(1, -1), cd(0.25, 2)});
    const Solution s = solve(problem(alpha, coeffs, ics));
    const double zero = 0.0;
    CHECK(std::abs(eval_solution(s, std::span<const double>(&zero, 1))[0] - ics[0]) <= 1e-10);
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(41);
    for (const Mode& m : s.modes) y += m.amplitude * mode_series(alpha, m.root, m.degree, 40).coeffs();
    const AlphaSeries<double> series(alpha, y);
    CHECK(std::abs(series[0] - ics[0]) <= 1e-10);
    CHECK(std::abs(jumarie_deriv(series)[0] - ics[1]) <= 1e-10);
    CHECK_FALSE(s.real_form.has_value());
}

TEST_CASE("apply_ics examples and singular systems") {
    const std::vector<RootMultiplicity<double>> roots{{cd(2), 1}, {cd(3), 1}};
    const Solution s = apply_ics(general_solution(1.0, roots), vec({2, 5}), 30);
    CHECK(std::abs(s.modes[0].amplitude - 1.0) <= 1e-13);
    CHECK(std::abs(s.modes[1].amplitude - 1.0) <= 1e-13);

    const std::vector<RootMultiplicity<double>> duplicated{{cd(2), 1}, {cd(2), 1}};
    CHECK_THROWS_AS(apply_ics(general_solution(1.0, duplicated), vec({2, 5}), 30),
                    SingularSystemError);
    CHECK_THROWS_AS(apply_ics(general_solution(1.0, roots), vec({2}), 30), DomainError);
}

TEST_CASE("real form equals the complex mode sum") {
    for (double alpha : {0.4, 0.8, 1.0}) {
        Eigen::VectorXcd coeffs = quadratic(cd(-0.3, 2.0), cd(-0.3, -2.0));
        Eigen::VectorXcd cubic(4);
        cubic << coeffs[0] * -1.5, coeffs[0] + coeffs[1] * -1.5, coeffs[1] + coeffs[2] * -1.5, 1.0;
        const FDEProblem p = problem(alpha, cubic, vec({1.0, -0.5, 2.0}));
        const Solution s = solve(p);
        REQUIRE(s.real_form.has_value());
        CHECK(s.real_form->size() == 2);
        for (double t : grid_points({2.0, 41})) {
            const auto y = eval_solution(s, std::span<const double>(&t, 1))[0];
            CHECK(std::abs(y.imag()) <= 1e-10 * std::max(1.0, std::abs(y)));
            CHECK(std::abs(eval_real_form(s, t) - y.real()) <= 1e-10 * std::max(1.0, std::abs(y)));
        }
    }
}

TEST_CASE("the factorized trigonometric form is exact only when it should be") {
    // a = 0: E_α(ib t^α) = cos_α + i sin_α with no growth factor.
    const Solution pure = solve(problem(0.6, vec({4.0, 0.0, 1.0}), vec({1.0, 1.0})));
    for (double t : {0.3, 1.0}) {
        CHECK(std::abs(eval_factorized_real_form(pure, t) - eval_real_form(pure, t)) <= 1e-12);
    }
    const Solution damped = solve(problem(0.6, quadratic(cd(-1, 1), cd(-1, -1)), vec({1.0, 0.0})));
    CHECK(std::abs(eval_factorized_real_form(damped, 1.0) - eval_real_form(damped, 1.0)) > 1e-3);
    const Solution classical = solve(problem(1.0, quadratic(cd(-1, 1), cd(-1, -1)), vec({1.0, 0.0})));
    for (double t : {0.3, 1.0, 2.5}) {
        const double exact = std::exp(-t) * (std::cos(t) + std::sin(t));
        CHECK(std::abs(eval_factorized_real_form(classical, t) - exact) <= 1e-13);
        CHECK(std::abs(eval_real_form(classical, t) - exact) <= 1e-13);
    }
}

TEST_CASE("to_real_form rejects unpaired roots") {
    Solution s;
    s.alpha = 0.5;
    s.modes.push_back({cd(1, 1), 0, cd(1, 0)});
    CHECK_THROWS_AS(to_real_form(s), PairingError);
    s.modes.push_back({cd(1, -1), 0, cd(2, 0)});
    CHECK_THROWS_AS(to_real_form(s), PairingError);

    Solution r;
    r.alpha = 0.5;
    r.modes.push_back({cd(2), 0, cd(1, 1)});
    CHECK_THROWS_AS(to_real_form(r), PairingError);

    Solution ok;
    ok.alpha = 0.5;
    ok.modes.push_back({cd(2), 0, cd(1.5, 0)});
    ok.modes.push_back({cd(-1), 0, cd(-0.5, 0)});
    const Solution real = to_real_form(ok);
    REQUIRE(real.real_form->size() == 2);
    for (double t : {0.0, 0.7}) {
        CHECK(std::abs(eval_real_form(real, t) - eval_solution(ok, std::span<const double>(&t, 1))[0].real()) <= 1e-15);
    }
}

TEST_CASE("scaling the operator changes nothing") {
    const auto coeffs = quadratic(cd(0.5, 1.0), cd(0.5, -1.0));
    const auto ics = vec({1.0, -2.0});
    const Solution base = solve(problem(0.7, coeffs, ics));
    for (cd c : {cd(3.0), cd(-0.25), cd(0, 2)}) {
        const Solution scaled = solve(problem(0.7, c * coeffs, ics));
        REQUIRE(scaled.modes.size() == base.modes.size());
        for (std::size_t i = 0; i < base.modes.size(); ++i) {
            CHECK(std::abs(scaled.modes[i].root - base.modes[i].root) <= 1e-13);
            CHECK(scaled.modes[i].degree == base.modes[i].degree);
            CHECK(std::abs(scaled.modes[i].amplitude - base.modes[i].amplitude) <= 1e-13);
        }
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(validate(problem(0.0, vec({1, 1}), vec({1}))), ValidationError);
    CHECK_THROWS_AS(validate(problem(1.2, vec({1, 1}), vec({1}))), ValidationError);
    CHECK_THROWS_AS(validate(problem(0.5, vec({1}), Eigen::VectorXcd(0))), ValidationError);
    CHECK_THROWS_AS(validate(problem(0.5, vec({1, 0}), vec({1}))), ValidationError);
    CHECK_THROWS_AS(validate(problem(0.5, vec({1, 2, 1}), vec({1}))), ValidationError);
    FDEProblem bad_grid = problem(0.5, vec({1, 1}), vec({1}));
    bad_grid.grid = Grid{1.0, 1};
    CHECK_THROWS_AS(validate(bad_grid), ValidationError);
}

TEST_CASE("eval_solution reports the offending t on budget exhaustion") {
    const Solution s = solve(problem(0.1, vec({-4.0, 1.0}), vec({1.0})));
    const double t = 1e6;
    try {
        eval_solution(s, std::span<const double>(&t, 1));
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(std::string(e.what()).find("t = ") != std::string::npos);
    }
}

TEST_CASE("deviation report") {
    const std::vector<double> alphas{0.5, 0.75, 1.0};
    const auto reports = deviation_report(alphas, {});
    REQUIRE(reports.size() == 6);
    for (const auto& rep : reports) {
        CHECK(rep.exact_at_alpha1);
        CHECK(rep.deviation_at_alpha1 <= 1e-12);
        CHECK(rep.deviations.back() <= 1e-12);
        CHECK(rep.deviations.front() > 1e-3);
    }
    // Oracles: 200-term long double series and mpmath.
    const auto e1 = oracle::ml_series(0.5L, 1.0L);
    const auto e2 = oracle::ml_series(0.5L, 2.0L);
    const double product_oracle = static_cast<double>(std::abs(e1 * e1 - e2));
    CHECK(std::abs(product_oracle - 83.851022940504640616) <= 1e-10);
    CHECK(reports[0].identity == "product_law");
    CHECK(std::abs(reports[0].deviations[0] - product_oracle) <= 1e-8);
    CHECK(reports[1].identity == "reciprocal_law");
    CHECK(std::abs(reports[1].deviations[0] - 1.1417576158255401520) <= 1e-10);
    CHECK(reports[5].identity == "repeated_root_residual");
    CHECK(std::abs(reports[5].deviations[0] - std::abs(4 / std::numbers::pi - 2)) <= 1e-10);

    const std::vector<double> bad{0.0};
    CHECK_THROWS_AS(deviation_report(bad, {}), DomainError);
}

TEST_CASE("triple roots need a looser cluster tolerance and are flagged") {
    const FDEProblem p = problem(0.5, vec({-1, 3, -3, 1}), vec({1, 0, 0}));
    CHECK_THROWS_AS(solve(p), SingularSystemError);
    SolveOptions options;
    options.roots.cluster_tol = 1e-5;
    const Solution s = solve(p, options);
    CHECK(s.extends_repeated_root_pattern);
    REQUIRE(s.modes.size() == 3);
    CHECK(s.modes[2].degree == 2);
    CHECK(residual(s, p.char_coeffs, 40).normalized > 1e-3);
    const Solution classical = solve(problem(1.0, p.char_coeffs, p.ics), options);
    for (double t : {0.5, 1.0}) {
        const auto y = eval_solution(classical, std::span<const double>(&t, 1))[0];
        CHECK(std::abs(y - classical_reference(problem(1.0, p.char_coeffs, p.ics), t)) <= 1e-12);
    }
}
