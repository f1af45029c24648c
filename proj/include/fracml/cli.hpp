#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fracml/fde_solver.hpp"
#include "fracml/problem_io.hpp"

namespace fracml::cli {

enum ExitCode : int {
    kOk = 0,
    kParseFailure = 2,
    kValidationFailure = 3,
    kNumericFailure = 4,
    kVerificationFailure = 5,
};

/// Closed-form description followed by a machine-readable block.
void cmd_solve(const ProblemSpec& spec, std::ostream& out);

/// CSV `t,re_y,im_y` over the problem grid.
void cmd_eval(const ProblemSpec& spec, std::ostream& out);

/// Prints one PASS/FAIL line per check; returns true when every check passed.
bool cmd_verify(const ProblemSpec& spec, std::ostream& out);

/// CSV `identity,alpha,t,deviation,exact_at_alpha1`.
void cmd_report(std::span<const double> alphas, const DeviationScenario& scenario,
                std::ostream& out);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name; a file argument of "-" reads the document from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace fracml::cli
