#include "fracml/problem_io.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include <json.hpp>

#include "fracml/errors.hpp"

namespace fracml {

namespace {

using json = nlohmann::json;

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
    throw ParseError("field '" + path + "': " + what);
}

double read_number(const json& j, const std::string& path) {
    if (!j.is_number()) field_error(path, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) field_error(path, "number is not finite");
    return x;
}

std::complex<double> read_complex(const json& j, const std::string& path) {
    if (j.is_number()) return {read_number(j, path), 0.0};
    if (j.is_array() && j.size() == 2) {
        return {read_number(j[0], path + "[0]"), read_number(j[1], path + "[1]")};
    }
    field_error(path, "expected a number or a [re, im] pair");
}

Eigen::VectorXcd read_complex_list(const json& j, const std::string& path) {
    if (!j.is_array()) field_error(path, "expected an array");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = read_complex(j[i], path + "[" + std::to_string(i) + "]");
    }
    return v;
}

const json& require(const json& object, const std::string& key, const std::string& path) {
    const auto it = object.find(key);
    if (it == object.end()) field_error(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

void reject_unknown(const json& object, const std::set<std::string>& allowed,
                    const std::string& path) {
    for (const auto& [key, value] : object.items()) {
        if (!allowed.contains(key)) {
            field_error(path.empty() ? key : path + "." + key, "unknown field");
        }
    }
}

// Coefficients (lowest degree first) of Π (λ - r_i).
Eigen::VectorXcd expand_factors(const Eigen::VectorXcd& roots) {
    Eigen::VectorXcd poly = Eigen::VectorXcd::Ones(1);
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
        Eigen::VectorXcd next = Eigen::VectorXcd::Zero(poly.size() + 1);
        next.tail(poly.size()) += poly;
        next.head(poly.size()) -= roots[i] * poly;
        poly = std::move(next);
    }
    return poly;
}

std::string emit_complex(std::complex<double> z) {
    return "[" + format_number(z.real(), 17) + ", " + format_number(z.imag(), 17) + "]";
}

std::string emit_complex_list(const Eigen::VectorXcd& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) out += ", ";
        out += emit_complex(v[i]);
    }
    return out + "]";
}

}  // namespace

std::string format_number(double x, int significant) {
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof buffer, x, std::chars_format::general, significant);
    return std::string(buffer, result.ptr);
}

ProblemSpec parse_problem(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError("malformed document at " + line_column(text, e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError("document must be a JSON object");
    reject_unknown(doc, {"alpha", "operator", "initial_conditions", "grid", "tolerances"}, "");

    ProblemSpec spec;
    FDEProblem& p = spec.problem;
    p.alpha = read_number(require(doc, "alpha", ""), "alpha");

    const json& op = require(doc, "operator", "");
    if (!op.is_object()) field_error("operator", "expected an object");
    reject_unknown(op, {"factors", "coefficients"}, "operator");
    const bool has_factors = op.contains("factors");
    const bool has_coefficients = op.contains("coefficients");
    if (has_factors == has_coefficients) {
        throw ValidationError("operator: exactly one of 'factors' or 'coefficients' is required");
    }
    if (has_coefficients) {
        p.char_coeffs = read_complex_list(op["coefficients"], "operator.coefficients");
    } else {
        p.char_coeffs = expand_factors(read_complex_list(op["factors"], "operator.factors"));
    }

    p.ics = read_complex_list(require(doc, "initial_conditions", ""), "initial_conditions");

    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        if (!g.is_object()) field_error("grid", "expected an object");
        reject_unknown(g, {"t_end", "points"}, "grid");
        Grid grid;
        grid.t_end = read_number(require(g, "t_end", "grid"), "grid.t_end");
        const json& points = require(g, "points", "grid");
        if (!points.is_number_integer()) field_error("grid.points", "expected an integer");
        grid.points = points.get<int>();
        p.grid = grid;
    }

    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        if (!t.is_object()) field_error("tolerances", "expected an object");
        reject_unknown(t,
                       {"cluster", "series_order", "residual", "initial_conditions", "real_form",
                        "classical"},
                       "tolerances");
        Tolerances& tol = spec.tolerances;
        const auto positive = [&](const char* key, double& target) {
            if (!t.contains(key)) return;
            const double x = read_number(t[key], std::string("tolerances.") + key);
            if (!(x > 0)) throw ValidationError(std::string("tolerances.") + key + " must be positive");
            target = x;
        };
        positive("cluster", tol.cluster);
        positive("residual", tol.residual);
        positive("initial_conditions", tol.initial_conditions);
        positive("real_form", tol.real_form);
        positive("classical", tol.classical);
        if (t.contains("series_order")) {
            if (!t["series_order"].is_number_integer()) {
                field_error("tolerances.series_order", "expected an integer");
            }
            tol.series_order = t["series_order"].get<Eigen::Index>();
            if (tol.series_order < p.char_coeffs.size() - 1 + 10) {
                throw ValidationError("tolerances.series_order must be at least operator degree + 10");
            }
        }
    }

    validate(p);
    return spec;
}

std::string emit_problem(const FDEProblem& problem) {
    std::string out = "{\n";
    out += "  \"alpha\": " + format_number(problem.alpha, 17) + ",\n";
    out += "  \"operator\": {\"coefficients\": " + emit_complex_list(problem.char_coeffs) + "},\n";
    out += "  \"initial_conditions\": " + emit_complex_list(problem.ics);
    if (problem.grid) {
        out += ",\n  \"grid\": {\"t_end\": " + format_number(problem.grid->t_end, 17) +
               ", \"points\": " + std::to_string(problem.grid->points) + "}";
    }
    return out + "\n}\n";
}

}  // namespace fracml
