#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kiq/ensemble.hpp"

namespace kiq {

/// Drive/relaxation parameters of the two-tone and decay rate model.
struct RateModelParams {
    double f_drive_res_hz = 9.84e9;    // Nb drive-resonator frequency
    double kappa_hz = 2e6;             // drive-resonator linewidth (FWHM)
    double drive_strength_per_s = 200; // peak pump rate
    double t1_s = 0.38;                // relaxation time constant
    double stretch_beta = 1.0;         // stretching exponent in (0, 1]

    void validate() const;
};

/// Row-major map of delta M / M_S over (f_drive, B_par).
struct TwoToneMap {
    std::vector<double> f_drive_hz;
    std::vector<double> b_par_t;
    std::vector<double> values;  // values[i_f * n_b + j_b]

    double at(std::size_t i_f, std::size_t j_b) const {
        return values[i_f * b_par_t.size() + j_b];
    }
};

/// Steady state of the pumped ensemble. Per cell:
///   W = drive_strength * Lor(f_d; f_drive_res, kappa)
///                      * Gauss(f_d - g mu_B B / h; sigma_inh)
///   delta M / M_S = W / (W + 1/(2 T1)) * M_eq/M_S
/// with unit-peak Lorentzian (FWHM kappa) and Gaussian (sd sigma_inh).
TwoToneMap steady_state_map(const EnsembleParams& ensemble,
                            const RateModelParams& rates,
                            std::span<const double> f_drive_grid_hz,
                            std::span<const double> b_grid_t,
                            int n_threads = 1);

/// Saturation transient delta M(t) = dM_ss (1 - exp(-t (W + 1/T1))),
/// dM_ss = W/(W + 1/(2 T1)) * m_eq_over_ms.
std::vector<double> simulate_excitation(const RateModelParams& rates,
                                        double pump_rate_per_s,
                                        std::span<const double> t_grid_s,
                                        double m_eq_over_ms = 1.0);

/// Stretched-exponential decay exp(-(t/T1)^stretch_beta), normalized to 1
/// at t = 0. The 1/e crossing sits at t = T1 for every stretch_beta.
std::vector<double> simulate_decay(const RateModelParams& rates,
                                   std::span<const double> t_grid_s);

struct TimeSample {
    double t_s;
    double value;
};

struct DecayFit {
    double tau_1e_s = 0;
    double stretch_beta = 0;
    bool extrapolated = false;  // 1/e crossing outside the sampled range
    bool converged = false;
    double rms = 0;
};

/// Least-squares stretched-exponential fit; tau_1e is the model's 1/e
/// crossing. Throws FitError on degenerate (non-decaying) input.
DecayFit fit_decay_tau(std::span<const TimeSample> samples);

}  // namespace kiq
