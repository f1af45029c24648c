#pragma once

// Numerical Riemann-Liouville and Jumarie differintegrals on uniformly sampled
// functions, and closed forms for power functions with a shifted start point.
//
// For 0 < α < 1 the Jumarie derivative is the Riemann-Liouville derivative of
// f - f(a). For the absolutely continuous data handled here this equals the
// Caputo derivative (1/Γ(1-α)) ∫_a^t (t-ξ)^{-α} f'(ξ) dξ, which is what the L1
// scheme discretizes. The Riemann-Liouville derivative then follows by adding
// back f(a) (t-a)^{-α} / Γ(1-α).

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace fracml {

/// Samples of f on the uniform grid start + i h, i = 0..n, h = (end - start) / n.
class SampledFunction {
public:
    SampledFunction(double start, double end, Eigen::VectorXd values);

    static SampledFunction sample(const std::function<double(double)>& f, double start,
                                  double end, Eigen::Index intervals);

    double start() const { return start_; }
    double end() const { return end_; }
    Eigen::Index intervals() const { return values_.size() - 1; }
    double step() const { return (end_ - start_) / static_cast<double>(intervals()); }
    double node(Eigen::Index i) const;
    const Eigen::VectorXd& values() const { return values_; }

    /// Index of the grid node at t; throws GridError when t is not a node.
    Eigen::Index node_index(double t) const;

private:
    double start_;
    double end_;
    Eigen::VectorXd values_;
};

/// (1/Γ(α)) ∫_a^t (t-τ)^{α-1} f(τ) dτ by product integration: f is replaced
/// by its piecewise-linear interpolant and each panel is integrated against
/// the kernel exactly. Second order for smooth f.
double rl_integral_num(const SampledFunction& f, double alpha, double t);

/// Jumarie derivative of order α ∈ (0,1) from the grid start, L1 scheme.
double jumarie_deriv_num(const SampledFunction& f, double alpha, double t);

/// Riemann-Liouville derivative: jumarie_deriv_num + f(a)(t-a)^{-α}/Γ(1-α).
double rl_deriv_num(const SampledFunction& f, double alpha, double t);

/// ₐD_t^{-(1-α)} t^γ = t^{γ+1-α} B_η(1-α, γ+1) / Γ(1-α), η = (t-a)/t.
double shifted_power_frac_integral(double a, double gamma, double alpha, double t);

/// Jumarie derivative of t^γ with start point a > 0:
/// d/dt[t^{γ+1-α} B_η(1-α, γ+1)]/Γ(1-α) - a^γ (t-a)^{-α}/Γ(1-α), which
/// simplifies to [(γ+1-α) t^{γ-α} B_η(1-α, γ+1) - a^γ (t-a)^{1-α}/t] / Γ(1-α).
double shifted_power_jumarie_deriv(double a, double gamma, double alpha, double t);

enum class Scheme { RlIntegral, JumarieDerivative, RlDerivative };

struct ConvergenceStudy {
    std::vector<double> steps;
    std::vector<double> errors;
    /// Mean of log2(e_i / e_{i+1}); empty when the errors sit at roundoff.
    std::optional<double> order;
};

/// Runs `scheme` for f sampled on [start, t] at each step size and fits the
/// observed order against the analytic value. Step sizes must halve.
ConvergenceStudy convergence_order(Scheme scheme, const std::function<double(double)>& f,
                                   double start, double alpha, double t, double analytic,
                                   std::span<const double> steps);

}  // namespace fracml
