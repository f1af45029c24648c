#pragma once

// Problem documents: a flat JSON object
//
//   {
//     "alpha": 0.5,
//     "operator": {"coefficients": [p0, p1, ..., pn]}      // or
//     "operator": {"factors": [[re, im], ...]},            // roots of the polynomial
//     "initial_conditions": [y0, Dy0, ...],
//     "grid": {"t_end": 1.0, "points": 51},                // optional
//     "tolerances": {"cluster": 1e-8, ...}                 // optional
//   }
//
// Complex entries are either a number or a [re, im] pair.

#include <string>
#include <string_view>

#include "fracml/fde_solver.hpp"

namespace fracml {

struct Tolerances {
    double cluster = 1e-8;
    Eigen::Index series_order = 60;
    double residual = 1e-10;
    double initial_conditions = 1e-10;
    double real_form = 1e-10;
    double classical = 1e-9;
};

struct ProblemSpec {
    FDEProblem problem;
    Tolerances tolerances;
};

/// Throws ParseError for malformed text or wrongly typed fields and
/// ValidationError when the document is well formed but inconsistent.
ProblemSpec parse_problem(std::string_view text);

/// Canonical document for `problem` (coefficient form, 17 significant digits).
std::string emit_problem(const FDEProblem& problem);

/// Locale-independent shortest-form rendering with `significant` digits.
std::string format_number(double x, int significant);

}  // namespace fracml
