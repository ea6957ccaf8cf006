#pragma once

#include <stdexcept>
#include <vector>

#include "bmhull/rng.hpp"

namespace bmhull {

/// Minimize f(x) = sum_j x_j^2/(n-j+1) over the positive orthant subject to
/// x_1 ... x_n >= n!.
struct OptProblem {
    int n = 1;
};

struct OptSolution {
    std::vector<double> x;
    double multiplier = 0.0;
    double value = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;
};

struct NoConvergence : std::runtime_error {
    NoConvergence(const std::string& what, OptSolution last)
        : std::runtime_error(what), last_iterate(std::move(last)) {}
    OptSolution last_iterate;
};

/// Objective value; fills the gradient (2x_1/n, ..., 2x_n/1) when requested.
double objective(const OptProblem& problem, const std::vector<double>& x,
                 std::vector<double>* grad = nullptr);

/// Constraint function n! g(x) - 1 with g(x) = 1/(x_1...x_n); feasible
/// points satisfy <= 0. The n! factor is handled in log space.
double constraint(const OptProblem& problem, const std::vector<double>& x,
                  std::vector<double>* grad = nullptr);

/// The KKT point x_j = sqrt(n-j+1) (n!)^{1/(2n)} with multiplier
/// 2 (n!)^{1/n} and objective value n (n!)^{1/n}.
OptSolution closed_form(const OptProblem& problem);

/// Max-norm of grad f(x) + lambda grad(n! g(x) - 1).
double kkt_residual(const OptProblem& problem, const std::vector<double>& x,
                    double multiplier);

/// Projected gradient descent on u = log x, where the constraint becomes
/// the half-space sum(u) >= log n!. Independent of closed_form.
OptSolution solve_numeric(const OptProblem& problem, double tol);

struct ConvexityReport {
    long long trials = 0;
    long long violations_f = 0;
    long long violations_g = 0;
    double hessian_identity_max_rel_err = 0.0;  // analytic vs quadratic form
    double hessian_fd_max_rel_err = 0.0;        // analytic vs finite differences
};

/// Midpoint-convexity trials for f and g at random positive pairs plus the
/// Hessian quadratic-form identity for g, cross-checked against central
/// finite differences.
ConvexityReport convexity_probe(const OptProblem& problem, int trials,
                                StreamKey key);

}  // namespace bmhull
