#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

namespace kiq {

/// Thrown when a nonlinear fit cannot produce a usable result
/// (degenerate data, no convergence). CLI maps this to exit code 3.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LevMarOptions {
    int max_iterations = 500;
    double param_tol = 1e-10;      // relative step size convergence
    double lambda0 = 1e-3;         // initial damping
    Eigen::VectorXd step_scales;   // per-parameter magnitude floor for the
                                   // numeric Jacobian and convergence test
    std::function<void(Eigen::VectorXd&)> project;  // optional box projection
};

struct LevMarResult {
    Eigen::VectorXd params;
    Eigen::MatrixXd covariance;  // chi2/(m-n) * (J^T J)^-1
    bool converged = false;
    int iterations = 0;
    double chi2 = 0.0;
};

/// Dense Levenberg-Marquardt with a central-difference Jacobian.
/// Deliberately small: the toolkit's fits have at most 7 parameters.
LevMarResult levenberg_marquardt(const ResidualFn& residuals,
                                 const Eigen::VectorXd& initial,
                                 const LevMarOptions& opts = {});

/// Runs LM from each start and keeps the lowest chi2.
LevMarResult best_of_starts(const ResidualFn& residuals,
                            const std::vector<Eigen::VectorXd>& starts,
                            const LevMarOptions& opts = {});

/// Weighted linear least squares: minimizes sum_i w_i (y_i - X_i p)^2.
Eigen::VectorXd weighted_linear_lsq(const Eigen::MatrixXd& design,
                                    const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& weights);

}  // namespace kiq
