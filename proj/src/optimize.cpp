#include "bmhull/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bmhull {

namespace {

double log_factorial(int n) { return std::lgamma(n + 1.0); }

void check_positive(const std::vector<double>& x) {
    for (double v : x)
        if (!(v > 0.0)) throw std::domain_error("point leaves the positive orthant");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double objective(const OptProblem& problem, const std::vector<double>& x,
                 std::vector<double>* grad) {
    const int n = problem.n;
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("objective: wrong dimension");
    check_positive(x);
    double value = 0.0;
    if (grad) grad->assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        const double weight = static_cast<double>(n - j);  // n-j+1 for 1-based j
        value += x[j] * x[j] / weight;
        if (grad) (*grad)[j] = 2.0 * x[j] / weight;
    }
    return value;
}

double constraint(const OptProblem& problem, const std::vector<double>& x,
                  std::vector<double>* grad) {
    const int n = problem.n;
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("constraint: wrong dimension");
    check_positive(x);
    double log_term = log_factorial(n);
    for (double v : x) log_term -= std::log(v);
    const double term = std::exp(log_term);  // n! g(x)
    if (grad) {
        grad->assign(n, 0.0);
        for (int j = 0; j < n; ++j) (*grad)[j] = -term / x[j];
    }
    return term - 1.0;
}

OptSolution closed_form(const OptProblem& problem) {
    const int n = problem.n;
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    OptSolution sol;
    const double root_2n = std::exp(log_factorial(n) / (2.0 * n));
    sol.x.resize(n);
    for (int j = 0; j < n; ++j) sol.x[j] = std::sqrt(static_cast<double>(n - j)) * root_2n;
    sol.multiplier = 2.0 * root_2n * root_2n;
    sol.value = n * root_2n * root_2n;
    sol.kkt_residual = kkt_residual(problem, sol.x, sol.multiplier);
    return sol;
}

double kkt_residual(const OptProblem& problem, const std::vector<double>& x,
                    double multiplier) {
    std::vector<double> gf, gc;
    objective(problem, x, &gf);
    constraint(problem, x, &gc);
    double residual = 0.0;
    for (int j = 0; j < problem.n; ++j)
        residual = std::max(residual, std::abs(gf[j] + multiplier * gc[j]));
    return residual;
}

OptSolution solve_numeric(const OptProblem& problem, double tol) {
    const int n = problem.n;
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");

    const double level = log_factorial(n);  // constraint: sum u_j >= log n!
    std::vector<double> u(n, level / n), trial(n), grad(n);

    auto project = [&](std::vector<double>& v) {
        double s = 0.0;
        for (double value : v) s += value;
        double shift = (level - s) / n;
        if (shift > 0.0)
            for (double& value : v) value += shift;
    };
    auto smooth_objective = [&](const std::vector<double>& v, std::vector<double>* g) {
        double val = 0.0;
        if (g) g->assign(n, 0.0);
        for (int j = 0; j < n; ++j) {
            const double weight = static_cast<double>(n - j);
            const double e = std::exp(2.0 * v[j]) / weight;
            val += e;
            if (g) (*g)[j] = 2.0 * e;
        }
        return val;
    };

    double value = smooth_objective(u, &grad);
    double step = 0.25;
    const int budget = 100000;
    const double move_tol =
        (1.0 + std::abs(level) / n) * std::clamp(tol, 1e-15, 1e-8);
    int iter = 0;
    bool converged = false;
    for (; iter < budget; ++iter) {
        // Backtracking projected gradient step.
        double moved = 0.0;
        for (;;) {
            for (int j = 0; j < n; ++j) trial[j] = u[j] - step * grad[j];
            project(trial);
            double trial_value = smooth_objective(trial, nullptr);
            double decrease = 0.0;
            for (int j = 0; j < n; ++j) {
                double dj = trial[j] - u[j];
                decrease += grad[j] * dj + (dj * dj) / (2.0 * step);
            }
            if (trial_value <= value + decrease + 1e-18 * std::abs(value)) {
                moved = 0.0;
                for (int j = 0; j < n; ++j)
                    moved = std::max(moved, std::abs(trial[j] - u[j]));
                u.swap(trial);
                value = smooth_objective(u, &grad);
                step = std::min(step * 1.5, 4.0);
                break;
            }
            step *= 0.5;
            if (step < 1e-18) {
                moved = 0.0;
                break;
            }
        }
        if (moved <= move_tol) {
            converged = true;
            break;
        }
    }

    OptSolution sol;
    sol.x.resize(n);
    for (int j = 0; j < n; ++j) sol.x[j] = std::exp(u[j]);
    sol.value = objective(problem, sol.x, nullptr);
    // Multiplier from stationarity: grad f_j = lambda n! g(x)/x_j.
    std::vector<double> gc;
    constraint(problem, sol.x, &gc);
    double lambda = 0.0;
    for (int j = 0; j < n; ++j) lambda += (2.0 * sol.x[j] / (n - j)) / (-gc[j]);
    sol.multiplier = lambda / n;
    sol.kkt_residual = kkt_residual(problem, sol.x, sol.multiplier);
    sol.iterations = iter;

    if (!converged)
        throw NoConvergence("projected gradient exhausted its budget at value " +
                                std::to_string(sol.value) + " (kkt residual " +
                                std::to_string(sol.kkt_residual) + ")",
                            sol);
    return sol;
}

ConvexityReport convexity_probe(const OptProblem& problem, int trials,
                                StreamKey key) {
    const int n = problem.n;
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    GaussianStream stream(key);
    auto positive = [&]() {
        std::vector<double> x(n);
        for (int j = 0; j < n; ++j) x[j] = std::exp(0.7 * stream.next());
        return x;
    };
    auto g_value = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s -= std::log(v);
        return std::exp(s);
    };

    ConvexityReport report;
    report.trials = trials;
    std::vector<double> mid(n);
    for (int trial = 0; trial < trials; ++trial) {
        auto x = positive();
        auto y = positive();
        double t = normal_cdf(stream.next());
        for (int j = 0; j < n; ++j) mid[j] = t * x[j] + (1.0 - t) * y[j];
        double lhs_f = objective(problem, mid, nullptr);
        double rhs_f = t * objective(problem, x, nullptr) +
                       (1.0 - t) * objective(problem, y, nullptr);
        if (lhs_f > rhs_f + 1e-12) ++report.violations_f;
        double lhs_g = g_value(mid);
        double rhs_g = t * g_value(x) + (1.0 - t) * g_value(y);
        if (lhs_g > rhs_g + 1e-12) ++report.violations_g;
    }

    // Hessian of g: h_jj = 2 g/x_j^2, h_jk = g/(x_j x_k); the quadratic form
    // collapses to g (sum z_j^2/x_j^2 + (sum z_j/x_j)^2).
    const int hess_trials = std::min(trials, 32);
    for (int trial = 0; trial < hess_trials; ++trial) {
        auto x = positive();
        const double g = g_value(x);
        std::vector<double> z(n);
        for (int j = 0; j < n; ++j) z[j] = stream.next();

        double quad_entries = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double h = j == k ? 2.0 * g / (x[j] * x[j]) : g / (x[j] * x[k]);
                quad_entries += z[j] * h * z[k];
            }
        double sum_sq = 0.0, sum_lin = 0.0;
        for (int j = 0; j < n; ++j) {
            sum_sq += z[j] * z[j] / (x[j] * x[j]);
            sum_lin += z[j] / x[j];
        }
        double quad_closed = g * (sum_sq + sum_lin * sum_lin);
        double rel = std::abs(quad_entries - quad_closed) /
                     std::max(1e-300, std::abs(quad_closed));
        report.hessian_identity_max_rel_err =
            std::max(report.hessian_identity_max_rel_err, rel);

        // Central finite differences of g against the analytic entries.
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double hj = 1e-3 * x[j], hk = 1e-3 * x[k];
                double fd;
                if (j == k) {
                    auto xp = x, xm = x;
                    xp[j] += hj;
                    xm[j] -= hj;
                    fd = (g_value(xp) - 2.0 * g + g_value(xm)) / (hj * hj);
                } else {
                    auto xpp = x, xpm = x, xmp = x, xmm = x;
                    xpp[j] += hj; xpp[k] += hk;
                    xpm[j] += hj; xpm[k] -= hk;
                    xmp[j] -= hj; xmp[k] += hk;
                    xmm[j] -= hj; xmm[k] -= hk;
                    fd = (g_value(xpp) - g_value(xpm) - g_value(xmp) + g_value(xmm)) /
                         (4.0 * hj * hk);
                }
                double analytic = j == k ? 2.0 * g / (x[j] * x[j]) : g / (x[j] * x[k]);
                double rel_fd = std::abs(fd - analytic) / std::max(1e-300, std::abs(analytic));
                report.hessian_fd_max_rel_err =
                    std::max(report.hessian_fd_max_rel_err, rel_fd);
            }
    }
    return report;
}

}  // namespace bmhull
