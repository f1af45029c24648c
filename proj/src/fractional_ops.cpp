#include "fracml/fractional_ops.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fracml/compensated_sum.hpp"
#include "fracml/errors.hpp"
#include "fracml/special_functions.hpp"

namespace fracml {

namespace {

struct PanelMoments {
    double zeroth;  // ∫_0^1 (m - s)^{p-1} ds
    double first;   // ∫_0^1 (m - s)^{p-1} s ds
};

// Kernel moments of the panel whose right end lies m cells before the
// evaluation point, in units of the step. For m >= 2 the binomial series of
// (1 - s/m)^{p-1} has positive terms only, so there is no cancellation even
// when m is large and the closed form m^p - (m-1)^p would lose digits.
PanelMoments panel_moments(double p, Eigen::Index m) {
    if (m == 1) return {1.0 / p, 1.0 / (p * (p + 1.0))};
    const double r = 1.0 / static_cast<double>(m);
    double b = 1.0;
    double rk = 1.0;
    double s0 = 0.0;
    double s1 = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double term = b * rk;
        s0 += term / (k + 1);
        s1 += term / (k + 2);
        if (term <= std::numeric_limits<double>::epsilon() * 0.25 * s0) break;
        b *= (k + 1 - p) / (k + 1);
        rk *= r;
        if (b == 0.0) break;
    }
    const double scale = std::pow(static_cast<double>(m), p - 1.0);
    return {scale * s0, scale * s1};
}

void require_alpha_integral(double alpha) {
    if (!(alpha > 0 && alpha <= 1)) {
        throw DomainError("fractional integral order must lie in (0, 1], got " +
                          detail::describe(alpha));
    }
}

void require_alpha_derivative(double alpha) {
    if (!(alpha > 0 && alpha < 1)) {
        throw DomainError("fractional derivative order must lie in (0, 1), got " +
                          detail::describe(alpha));
    }
}

}  // namespace

SampledFunction::SampledFunction(double start, double end, Eigen::VectorXd values)
    : start_(start), end_(end), values_(std::move(values)) {
    if (!std::isfinite(start_) || !std::isfinite(end_) || !(end_ > start_)) {
        throw DomainError("SampledFunction: need finite start < end");
    }
    if (values_.size() < 3) throw DomainError("SampledFunction: need at least 2 intervals");
    if (!values_.allFinite()) throw DomainError("SampledFunction: samples must be finite");
}

SampledFunction SampledFunction::sample(const std::function<double(double)>& f, double start,
                                        double end, Eigen::Index intervals) {
    if (intervals < 2) throw DomainError("SampledFunction: need at least 2 intervals");
    const double h = (end - start) / static_cast<double>(intervals);
    Eigen::VectorXd v(intervals + 1);
    for (Eigen::Index i = 0; i < intervals; ++i) v[i] = f(start + static_cast<double>(i) * h);
    v[intervals] = f(end);
    return {start, end, std::move(v)};
}

double SampledFunction::node(Eigen::Index i) const {
    if (i == intervals()) return end_;
    return start_ + static_cast<double>(i) * step();
}

Eigen::Index SampledFunction::node_index(double t) const {
    const double h = step();
    const double x = (t - start_) / h;
    const auto j = static_cast<Eigen::Index>(std::llround(x));
    if (!std::isfinite(x) || j < 0 || j > intervals() ||
        std::abs(t - node(j)) > 1e-9 * h + 4 * std::numeric_limits<double>::epsilon() * std::abs(t)) {
        throw GridError("t = " + detail::describe(t) + " is not a grid node of [" +
                        detail::describe(start_) + ", " + detail::describe(end_) + "] with " +
                        std::to_string(intervals()) + " intervals");
    }
    return j;
}

double rl_integral_num(const SampledFunction& f, double alpha, double t) {
    require_alpha_integral(alpha);
    const Eigen::Index j = f.node_index(t);
    const auto& v = f.values();
    detail::CompensatedSum<double> acc;
    for (Eigen::Index i = 0; i < j; ++i) {
        const auto w = panel_moments(alpha, j - i);
        acc.add(v[i] * (w.zeroth - w.first) + v[i + 1] * w.first);
    }
    return std::pow(f.step(), alpha) / gamma(alpha) * acc.value();
}

double jumarie_deriv_num(const SampledFunction& f, double alpha, double t) {
    require_alpha_derivative(alpha);
    const Eigen::Index j = f.node_index(t);
    if (j == 0) return 0.0;
    const auto& v = f.values();
    const double p = 1.0 - alpha;
    detail::CompensatedSum<double> acc;
    for (Eigen::Index i = 0; i < j; ++i) {
        acc.add((v[i + 1] - v[i]) * panel_moments(p, j - i).zeroth);
    }
    return std::pow(f.step(), -alpha) / gamma(p) * acc.value();
}

double rl_deriv_num(const SampledFunction& f, double alpha, double t) {
    require_alpha_derivative(alpha);
    if (f.node_index(t) == 0) {
        throw SingularityError("rl_deriv_num: the kernel term is infinite at the start point");
    }
    const double jumarie = jumarie_deriv_num(f, alpha, t);
    return jumarie + f.values()[0] * std::pow(t - f.start(), -alpha) / gamma(1.0 - alpha);
}

namespace {

void require_shifted_domain(double a, double gamma_exp, double alpha, double t) {
    if (!(alpha > 0 && alpha < 1)) throw DomainError("shifted power: alpha must lie in (0, 1)");
    if (!(gamma_exp > -1)) throw DomainError("shifted power: exponent must exceed -1");
    if (!(a > 0 && a < t) || !std::isfinite(t)) {
        throw DomainError("shifted power: need 0 < a < t");
    }
}

}  // namespace

double shifted_power_frac_integral(double a, double gamma_exp, double alpha, double t) {
    require_shifted_domain(a, gamma_exp, alpha, t);
    const double eta = (t - a) / t;
    return std::pow(t, gamma_exp + 1 - alpha) * incomplete_beta(eta, 1 - alpha, gamma_exp + 1) /
           gamma(1 - alpha);
}

double shifted_power_jumarie_deriv(double a, double gamma_exp, double alpha, double t) {
    require_shifted_domain(a, gamma_exp, alpha, t);
    const double eta = (t - a) / t;
    const double body = (gamma_exp + 1 - alpha) * std::pow(t, gamma_exp - alpha) *
                        incomplete_beta(eta, 1 - alpha, gamma_exp + 1);
    const double boundary = std::pow(a, gamma_exp) * std::pow(t - a, 1 - alpha) / t;
    return (body - boundary) / gamma(1 - alpha);
}

ConvergenceStudy convergence_order(Scheme scheme, const std::function<double(double)>& f,
                                   double start, double alpha, double t, double analytic,
                                   std::span<const double> steps) {
    if (steps.size() < 3) throw DomainError("convergence_order: need at least 3 step sizes");
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
        if (!(steps[i] > 0) || std::abs(steps[i + 1] - 0.5 * steps[i]) > 1e-12 * steps[i]) {
            throw DomainError("convergence_order: each step size must halve the previous one");
        }
    }
    ConvergenceStudy study;
    for (const double h : steps) {
        const double intervals = (t - start) / h;
        const auto n = static_cast<Eigen::Index>(std::llround(intervals));
        if (n < 2 || std::abs(intervals - static_cast<double>(n)) > 1e-9 * intervals) {
            throw GridError("convergence_order: step " + detail::describe(h) +
                            " does not divide [start, t]");
        }
        const auto sampled = SampledFunction::sample(f, start, t, n);
        double value = 0.0;
        switch (scheme) {
            case Scheme::RlIntegral: value = rl_integral_num(sampled, alpha, t); break;
            case Scheme::JumarieDerivative: value = jumarie_deriv_num(sampled, alpha, t); break;
            case Scheme::RlDerivative: value = rl_deriv_num(sampled, alpha, t); break;
        }
        study.steps.push_back(h);
        study.errors.push_back(std::abs(value - analytic));
    }
    const double floor = 1e-12 * std::max(1.0, std::abs(analytic));
    double total = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i + 1 < study.errors.size(); ++i) {
        if (study.errors[i] <= floor || study.errors[i + 1] <= floor) continue;
        total += std::log2(study.errors[i] / study.errors[i + 1]);
        ++pairs;
    }
    if (pairs > 0) study.order = total / pairs;
    return study;
}

}  // namespace fracml
