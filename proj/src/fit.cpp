#include "kiq/fit.hpp"

#include <cmath>
#include <limits>

namespace kiq {

namespace {

Eigen::MatrixXd numeric_jacobian(const ResidualFn& residuals,
                                 const Eigen::VectorXd& p,
                                 const Eigen::VectorXd& scales) {
    const Eigen::VectorXd r0 = residuals(p);
    Eigen::MatrixXd jac(r0.size(), p.size());
    for (int j = 0; j < p.size(); ++j) {
        const double h = 1e-6 * std::max(std::abs(p[j]), scales[j]);
        Eigen::VectorXd pp = p, pm = p;
        pp[j] += h;
        pm[j] -= h;
        jac.col(j) = (residuals(pp) - residuals(pm)) / (2.0 * h);
    }
    return jac;
}

}  // namespace

LevMarResult levenberg_marquardt(const ResidualFn& residuals,
                                 const Eigen::VectorXd& initial,
                                 const LevMarOptions& opts) {
    const int n = static_cast<int>(initial.size());
    Eigen::VectorXd scales = opts.step_scales.size() == n
                                 ? opts.step_scales
                                 : Eigen::VectorXd::Ones(n);
    LevMarResult out;
    out.params = initial;
    if (opts.project) opts.project(out.params);

    Eigen::VectorXd r = residuals(out.params);
    double chi2 = r.squaredNorm();
    double lambda = opts.lambda0;

    for (out.iterations = 1; out.iterations <= opts.max_iterations; ++out.iterations) {
        const Eigen::MatrixXd jac = numeric_jacobian(residuals, out.params, scales);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * r;

        bool stepped = false;
        Eigen::VectorXd step;
        for (int attempt = 0; attempt < 25; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            for (int i = 0; i < n; ++i)
                damped(i, i) += lambda * std::max(jtj(i, i), 1e-30);
            step = damped.ldlt().solve(-jtr);
            Eigen::VectorXd trial = out.params + step;
            if (opts.project) opts.project(trial);
            const Eigen::VectorXd r_trial = residuals(trial);
            const double chi2_trial = r_trial.squaredNorm();
            if (std::isfinite(chi2_trial) && chi2_trial <= chi2) {
                step = trial - out.params;
                out.params = trial;
                r = r_trial;
                chi2 = chi2_trial;
                lambda = std::max(lambda / 3.0, 1e-14);
                stepped = true;
                break;
            }
            lambda *= 5.0;
        }
        if (!stepped) break;  // no downhill step found at any damping

        double rel_step = 0.0;
        for (int j = 0; j < n; ++j)
            rel_step = std::max(rel_step, std::abs(step[j]) /
                                              std::max(std::abs(out.params[j]), scales[j]));
        if (rel_step < opts.param_tol) {
            out.converged = true;
            break;
        }
    }

    out.chi2 = chi2;
    // covariance from the final Jacobian; guard the rank-deficient case
    const Eigen::MatrixXd jac = numeric_jacobian(residuals, out.params, scales);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const int dof = std::max<int>(1, static_cast<int>(r.size()) - n);
    const double sigma2 = chi2 / dof;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
    out.covariance = lu.isInvertible()
                         ? Eigen::MatrixXd(sigma2 * lu.inverse())
                         : Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
    return out;
}

LevMarResult best_of_starts(const ResidualFn& residuals,
                            const std::vector<Eigen::VectorXd>& starts,
                            const LevMarOptions& opts) {
    if (starts.empty()) throw FitError("best_of_starts: no starting points");
    LevMarResult best;
    bool have = false;
    for (const auto& p0 : starts) {
        LevMarResult r = levenberg_marquardt(residuals, p0, opts);
        if (!have || r.chi2 < best.chi2) {
            best = r;
            have = true;
        }
    }
    return best;
}

Eigen::VectorXd weighted_linear_lsq(const Eigen::MatrixXd& design,
                                    const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& weights) {
    if (design.rows() != y.size() || design.rows() != weights.size())
        throw std::invalid_argument("weighted_linear_lsq: size mismatch");
    const Eigen::VectorXd s = weights.cwiseSqrt();
    const Eigen::MatrixXd xs = s.asDiagonal() * design;
    const Eigen::VectorXd ys = s.cwiseProduct(y);
    return xs.colPivHouseholderQr().solve(ys);
}

}  // namespace kiq
