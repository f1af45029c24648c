#include "fracml/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "fracml/errors.hpp"
#include "fracml/mittag_leffler.hpp"
#include "fracml/special_functions.hpp"

namespace fracml::cli {

namespace {

std::string human(double x) { return format_number(x, 6); }
std::string machine(double x) { return format_number(x, 17); }

std::string human(std::complex<double> z) {
    if (z.imag() == 0.0) return human(z.real());
    if (z.real() == 0.0) return human(z.imag()) + "i";
    return "(" + human(z.real()) + (z.imag() < 0 ? " - " : " + ") + human(std::abs(z.imag())) + "i)";
}

std::string machine(std::complex<double> z) {
    return "[" + machine(z.real()) + ", " + machine(z.imag()) + "]";
}

std::string power_factor(int degree) {
    if (degree == 0) return "";
    if (degree == 1) return "t^α/Γ(1+α)·";
    const std::string j = std::to_string(degree);
    return "t^{" + j + "α}/Γ(1+" + j + "α)·";
}

SolveOptions solve_options(const Tolerances& tol) {
    SolveOptions options;
    options.roots.cluster_tol = tol.cluster;
    options.series_order = tol.series_order;
    return options;
}

std::vector<double> evaluation_grid(const FDEProblem& problem) {
    return grid_points(problem.grid.value_or(Grid{}));
}

std::string operator_text(const Eigen::VectorXcd& p) {
    std::string out;
    for (Eigen::Index m = p.size() - 1; m >= 0; --m) {
        if (p[m] == std::complex<double>(0.0)) continue;
        if (!out.empty()) out += " + ";
        out += human(p[m]);
        if (m == 1) out += "·D^α y";
        else if (m > 1) out += "·D^{" + std::to_string(m) + "α} y";
        else out += "·y";
    }
    return out + " = 0";
}

}  // namespace

void cmd_solve(const ProblemSpec& spec, std::ostream& out) {
    const FDEProblem& p = spec.problem;
    const auto options = solve_options(spec.tolerances);
    const auto roots = find_roots(p.char_coeffs, options.roots);
    const Solution s = solve(p, options);
    const auto res = residual(s, p.char_coeffs, std::max<Eigen::Index>(
                                                     options.series_order, p.char_coeffs.size() + 9));

    out << "alpha = " << human(p.alpha) << "\n";
    out << "equation: " << operator_text(p.char_coeffs) << "\n";
    out << "roots:";
    for (const auto& r : roots) out << " " << human(r.root) << " (multiplicity " << r.multiplicity << ")";
    out << "\n";

    out << "y(t) =";
    for (std::size_t i = 0; i < s.modes.size(); ++i) {
        const Mode& m = s.modes[i];
        out << (i == 0 ? " " : " + ") << human(m.amplitude) << "·" << power_factor(m.degree)
            << "E_α(" << human(m.root) << "·t^α)";
    }
    out << "\n";

    if (s.real_form) {
        const double t_probe = p.grid ? p.grid->t_end : 1.0;
        bool factorization_exact = true;
        out << "real form: y(t) =";
        bool first = true;
        for (const RealTerm& term : *s.real_form) {
            out << (first ? " " : " + ");
            first = false;
            const std::string w = power_factor(term.degree);
            if (!term.oscillatory()) {
                out << human(term.A) << "·" << w << "E_α(" << human(term.a) << "·t^α)";
            } else if (term.a == 0.0 || p.alpha == 1.0) {
                out << w << (term.a == 0.0 ? "" : "E_α(" + human(term.a) + "·t^α)·") << "["
                    << human(term.A) << "·cos_α("
                    << human(term.b) << "·t^α) + " << human(term.B) << "·sin_α(" << human(term.b)
                    << "·t^α)]";
            } else {
                factorization_exact = false;
                const std::string z = human(std::complex<double>(term.a, term.b)) + "·t^α";
                out << w << "[" << human(term.A) << "·Re E_α(" << z << ") + " << human(term.B)
                    << "·Im E_α(" << z << ")]";
            }
        }
        out << "\n";
        if (!factorization_exact) {
            const double gap =
                std::abs(eval_real_form(s, t_probe) - eval_factorized_real_form(s, t_probe));
            out << "note: the factorized form E_α(a·t^α)[A·cos_α(b·t^α) + B·sin_α(b·t^α)] is not "
                   "exact for alpha != 1; it differs from y by "
                << human(gap) << " at t = " << human(t_probe) << "\n";
        }
    }
    if (s.extends_repeated_root_pattern) {
        out << "note: a root of multiplicity > 2 was expanded with t^{jα} factors; this "
               "extrapolates the double-root ansatz\n";
    }
    out << "series residual (normalized) = " << human(res.normalized) << "\n";

    out << "--- machine ---\n{\n  \"alpha\": " << machine(p.alpha) << ",\n  \"roots\": [";
    for (std::size_t i = 0; i < roots.size(); ++i) {
        out << (i ? ", " : "") << "{\"root\": " << machine(roots[i].root)
            << ", \"multiplicity\": " << roots[i].multiplicity << "}";
    }
    out << "],\n  \"modes\": [";
    for (std::size_t i = 0; i < s.modes.size(); ++i) {
        const Mode& m = s.modes[i];
        out << (i ? ", " : "") << "{\"root\": " << machine(m.root) << ", \"degree\": " << m.degree
            << ", \"amplitude\": " << machine(m.amplitude) << "}";
    }
    out << "],\n  \"real_form\": ";
    if (s.real_form) {
        out << "[";
        for (std::size_t i = 0; i < s.real_form->size(); ++i) {
            const RealTerm& r = (*s.real_form)[i];
            out << (i ? ", " : "") << "{\"a\": " << machine(r.a) << ", \"b\": " << machine(r.b)
                << ", \"degree\": " << r.degree << ", \"A\": " << machine(r.A)
                << ", \"B\": " << machine(r.B) << "}";
        }
        out << "]";
    } else {
        out << "null";
    }
    out << ",\n  \"extends_repeated_root_pattern\": "
        << (s.extends_repeated_root_pattern ? "true" : "false") << ",\n  \"residual\": {\"normalized\": "
        << machine(res.normalized) << ", \"leading\": " << machine(res.leading) << "}\n}\n";
}

void cmd_eval(const ProblemSpec& spec, std::ostream& out) {
    const Solution s = solve(spec.problem, solve_options(spec.tolerances));
    const auto t = evaluation_grid(spec.problem);
    const auto y = eval_solution(s, t);
    out << "t,re_y,im_y\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        out << machine(t[i]) << "," << machine(y[i].real()) << "," << machine(y[i].imag()) << "\n";
    }
}

bool cmd_verify(const ProblemSpec& spec, std::ostream& out) {
    const FDEProblem& p = spec.problem;
    const Tolerances& tol = spec.tolerances;
    const auto options = solve_options(tol);
    const auto roots = find_roots(p.char_coeffs, options.roots);
    const Solution s = solve(p, options);
    const auto grid = evaluation_grid(p);
    bool all_passed = true;
    const auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
        all_passed = all_passed && ok;
    };

    const bool repeated = std::any_of(roots.begin(), roots.end(),
                                      [](const auto& r) { return r.multiplicity > 1; });
    const Eigen::Index order = std::max<Eigen::Index>(tol.series_order, p.char_coeffs.size() + 9);
    const auto res = residual(s, p.char_coeffs, order);
    std::string residual_detail = "normalized series residual " + human(res.normalized) +
                                  " (tolerance " + human(tol.residual) + ")";
    if (repeated && p.alpha != 1.0) {
        residual_detail += "; repeated roots use the t^{jα} ansatz, which is not an exact "
                           "solution for alpha != 1";
    }
    report("series_residual", res.normalized <= tol.residual, residual_detail);

    // D^{kα} y(0) from the series must reproduce every initial condition.
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(order + 1);
    for (const Mode& m : s.modes) y += m.amplitude * mode_series(p.alpha, m.root, m.degree, order).coeffs();
    AlphaSeries<double> series(p.alpha, y);
    double ic_error = 0.0;
    for (Eigen::Index k = 0; k < p.ics.size(); ++k) {
        ic_error = std::max(ic_error, std::abs(series[0] - p.ics[k]) / std::max(1.0, std::abs(p.ics[k])));
        if (k + 1 < p.ics.size()) series = jumarie_deriv(series);
    }
    const double zero = 0.0;
    const auto y0 = eval_solution(s, std::span<const double>(&zero, 1))[0];
    ic_error = std::max(ic_error, std::abs(y0 - p.ics[0]) / std::max(1.0, std::abs(p.ics[0])));
    report("initial_conditions", ic_error <= tol.initial_conditions,
           "max relative mismatch " + human(ic_error));

    const auto values = eval_solution(s, grid);
    if (s.real_form) {
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double scale = std::max(1.0, std::abs(values[i]));
            worst = std::max(worst, std::abs(eval_real_form(s, grid[i]) - values[i]) / scale);
        }
        report("real_form_equivalence", worst <= tol.real_form,
               "max |real form - complex mode sum| " + human(worst));
    }

    if (p.alpha == 1.0) {
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto reference = classical_reference(p, grid[i]);
            worst = std::max(worst, std::abs(values[i] - reference) / std::max(1.0, std::abs(reference)));
        }
        report("classical_conjugation", worst <= tol.classical,
               "max relative gap to exp(C t) y0 " + human(worst));
    }
    out << (all_passed ? "verification passed" : "verification FAILED") << "\n";
    return all_passed;
}

void cmd_report(std::span<const double> alphas, const DeviationScenario& scenario,
                std::ostream& out) {
    const auto reports = deviation_report(alphas, scenario);
    out << "identity,alpha,t,deviation,exact_at_alpha1\n";
    for (const auto& rep : reports) {
        for (std::size_t i = 0; i < rep.alphas.size(); ++i) {
            out << rep.identity << "," << machine(rep.alphas[i]) << "," << machine(rep.t) << ","
                << machine(rep.deviations[i]) << "," << (rep.exact_at_alpha1 ? "true" : "false")
                << "\n";
        }
    }
}

namespace {

ProblemSpec load(const std::string& path, std::istream& in) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    } else {
        std::ifstream file(path, std::ios::binary);
        if (!file) throw ParseError("cannot open '" + path + "'");
        text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
    }
    return parse_problem(text);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Fractional calculus with Mittag-Leffler functions", "fracml"};
    app.require_subcommand(1);

    std::string file;
    auto* solve_cmd = app.add_subcommand("solve", "Solve a problem and print its closed form");
    solve_cmd->add_option("file", file, "Problem document, or - for standard input")->required();
    auto* eval_cmd = app.add_subcommand("eval", "Tabulate the solution on the problem grid (CSV)");
    eval_cmd->add_option("file", file, "Problem document, or - for standard input")->required();
    auto* verify_cmd = app.add_subcommand("verify", "Run the self-checks for a problem");
    verify_cmd->add_option("file", file, "Problem document, or - for standard input")->required();

    std::vector<double> alphas;
    std::vector<double> pair;
    DeviationScenario scenario;
    auto* report_cmd = app.add_subcommand("report", "Deviation table of Mittag-Leffler identities");
    report_cmd->add_option("--alphas", alphas, "Comma-separated orders in (0, 1]")
        ->delimiter(',')
        ->required();
    report_cmd->add_option("--t", scenario.t, "Evaluation point");
    report_cmd->add_option("--pair", pair, "Arguments a,b")->delimiter(',')->expected(2);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kParseFailure;
    }

    try {
        if (*solve_cmd) {
            cmd_solve(load(file, in), out);
        } else if (*eval_cmd) {
            cmd_eval(load(file, in), out);
        } else if (*verify_cmd) {
            if (!cmd_verify(load(file, in), out)) return kVerificationFailure;
        } else if (*report_cmd) {
            for (const double alpha : alphas) {
                if (!(alpha > 0 && alpha <= 1)) {
                    throw ValidationError("--alphas: every order must lie in (0, 1], got " +
                                          format_number(alpha, 6));
                }
            }
            if (!pair.empty()) {
                scenario.a = pair[0];
                scenario.b = pair[1];
            }
            cmd_report(alphas, scenario, out);
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kParseFailure;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const Error& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kNumericFailure;
    }
    return kOk;
}

}  // namespace fracml::cli
