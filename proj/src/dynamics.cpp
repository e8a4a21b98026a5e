#include "kiq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kiq/constants.hpp"
#include "kiq/fit.hpp"
#include "kiq/parallel.hpp"
#include "kiq/physics.hpp"

namespace kiq {

void RateModelParams::validate() const {
    if (!(kappa_hz > 0.0))
        throw std::invalid_argument("RateModelParams: kappa must be > 0");
    if (!(t1_s > 0.0))
        throw std::invalid_argument("RateModelParams: T1 must be > 0");
    if (!(stretch_beta > 0.0) || stretch_beta > 1.0)
        throw std::invalid_argument("RateModelParams: stretch_beta must be in (0, 1]");
    if (drive_strength_per_s < 0.0)
        throw std::invalid_argument("RateModelParams: drive_strength must be >= 0");
}

TwoToneMap steady_state_map(const EnsembleParams& ensemble,
                            const RateModelParams& rates,
                            std::span<const double> f_drive_grid_hz,
                            std::span<const double> b_grid_t, int n_threads) {
    ensemble.validate();
    rates.validate();
    if (f_drive_grid_hz.empty() || b_grid_t.empty())
        throw std::invalid_argument("steady_state_map: empty grid");

    TwoToneMap map;
    map.f_drive_hz.assign(f_drive_grid_hz.begin(), f_drive_grid_hz.end());
    map.b_par_t.assign(b_grid_t.begin(), b_grid_t.end());
    map.values.assign(map.f_drive_hz.size() * map.b_par_t.size(), 0.0);

    const double gamma = 1.0 / (2.0 * rates.t1_s);
    parallel_for(map.f_drive_hz.size(), n_threads, [&](std::size_t i) {
        const double fd = map.f_drive_hz[i];
        const double u = 2.0 * (fd - rates.f_drive_res_hz) / rates.kappa_hz;
        const double lor = 1.0 / (1.0 + u * u);
        for (std::size_t j = 0; j < map.b_par_t.size(); ++j) {
            const double f_spin = ensemble.g * constants::mu_b * map.b_par_t[j] /
                                  constants::planck;
            const double z = (fd - f_spin) / ensemble.sigma_inh_hz;
            const double gauss = std::exp(-0.5 * z * z);
            const double pump = rates.drive_strength_per_s * lor * gauss;
            const double m_eq = paramagnetic_magnetization(map.b_par_t[j], ensemble.g,
                                                           ensemble.t_s_k, ensemble.m_s) /
                                ensemble.m_s;
            map.values[i * map.b_par_t.size() + j] = pump / (pump + gamma) * m_eq;
        }
    });
    return map;
}

std::vector<double> simulate_excitation(const RateModelParams& rates,
                                        double pump_rate_per_s,
                                        std::span<const double> t_grid_s,
                                        double m_eq_over_ms) {
    rates.validate();
    if (pump_rate_per_s < 0.0)
        throw std::invalid_argument("simulate_excitation: W must be >= 0");
    for (std::size_t i = 0; i < t_grid_s.size(); ++i)
        if ((i == 0 && t_grid_s[i] < 0.0) || (i > 0 && t_grid_s[i] <= t_grid_s[i - 1]))
            throw std::invalid_argument("simulate_excitation: t grid must increase from 0");

    const double ss = pump_rate_per_s / (pump_rate_per_s + 1.0 / (2.0 * rates.t1_s)) *
                      m_eq_over_ms;
    const double rate = pump_rate_per_s + 1.0 / rates.t1_s;
    std::vector<double> out;
    out.reserve(t_grid_s.size());
    for (const double t : t_grid_s) out.push_back(ss * (1.0 - std::exp(-t * rate)));
    return out;
}

std::vector<double> simulate_decay(const RateModelParams& rates,
                                   std::span<const double> t_grid_s) {
    rates.validate();
    for (std::size_t i = 0; i < t_grid_s.size(); ++i)
        if ((i == 0 && t_grid_s[i] < 0.0) || (i > 0 && t_grid_s[i] <= t_grid_s[i - 1]))
            throw std::invalid_argument("simulate_decay: t grid must increase from 0");
    std::vector<double> out;
    out.reserve(t_grid_s.size());
    for (const double t : t_grid_s)
        out.push_back(std::exp(-std::pow(t / rates.t1_s, rates.stretch_beta)));
    return out;
}

DecayFit fit_decay_tau(std::span<const TimeSample> samples) {
    if (samples.size() < 8)
        throw std::invalid_argument("fit_decay_tau: need at least 8 samples");
    double vmin = samples[0].value, vmax = samples[0].value;
    double t_max = 0.0;
    for (const auto& s : samples) {
        vmin = std::min(vmin, s.value);
        vmax = std::max(vmax, s.value);
        t_max = std::max(t_max, s.t_s);
    }
    if (vmax - vmin < 1e-9 * std::max(std::abs(vmax), 1e-30))
        throw FitError("fit_decay_tau: no decay in input (constant samples)");

    // params: (ln tau, beta), beta boxed into (0, 1]
    auto residuals = [&](const Eigen::VectorXd& p) {
        const double tau = std::exp(p[0]);
        const double beta = p[1];
        Eigen::VectorXd r(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double model =
                samples[i].t_s <= 0.0
                    ? 1.0
                    : std::exp(-std::pow(samples[i].t_s / tau, beta));
            r[i] = samples[i].value - model;
        }
        return r;
    };
    LevMarOptions opts;
    opts.project = [](Eigen::VectorXd& p) {
        p[1] = std::clamp(p[1], 0.05, 1.0);
    };
    std::vector<Eigen::VectorXd> starts;
    for (const double frac : {0.03, 0.1, 0.3, 0.6, 1.0})
        for (const double beta0 : {0.7, 1.0}) {
            Eigen::VectorXd p0(2);
            p0 << std::log(std::max(frac * t_max, 1e-12)), beta0;
            starts.push_back(p0);
        }
    const LevMarResult fit = best_of_starts(residuals, starts, opts);

    DecayFit out;
    out.tau_1e_s = std::exp(fit.params[0]);  // 1/e crossing == tau_s by construction
    out.stretch_beta = fit.params[1];
    out.converged = fit.converged;
    out.rms = std::sqrt(fit.chi2 / samples.size());
    out.extrapolated = out.tau_1e_s > t_max || out.tau_1e_s < samples[0].t_s;
    if (!fit.converged && fit.iterations >= 500)
        throw FitError("fit_decay_tau: no convergence after 500 iterations");
    return out;
}

}  // namespace kiq
