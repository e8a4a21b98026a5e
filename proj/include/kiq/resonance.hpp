#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kiq/ensemble.hpp"

namespace kiq {

/// Notch (side-coupled) resonator line shape parameters.
struct ResonanceModel {
    double f_r_hz = 7.8e9;
    double q_i = 1e5;
    double q_c = 2.5e4;
    double phi0_rad = 0.0;  // impedance-mismatch phase
    double amp = 1.0;       // off-resonant amplitude
    double delay_s = 0.0;   // cable delay

    double q_loaded() const { return 1.0 / (1.0 / q_i + 1.0 / q_c); }
    void validate() const;
};

/// S21 samples on a strictly increasing frequency axis.
struct ComplexTrace {
    std::vector<double> freq_hz;
    std::vector<std::complex<double>> s21;

    void validate() const;
};

/// S21(f) = amp e^{-2 pi i f delay} [1 - (Q_l/Q_c) e^{i phi0}
///                                      / (1 + 2 i Q_l (f/f_r - 1))].
std::complex<double> s21_model(const ResonanceModel& m, double f_hz);

/// Covariance-based 1-sigma uncertainties. These ignore Fano-interference
/// systematics, which are out of scope and understate the true Q_i error.
struct ResonanceUncertainty {
    double f_r_hz = 0, q_i = 0, q_c = 0, phi0_rad = 0, amp = 0, delay_s = 0;
};

struct ResonanceFit {
    ResonanceModel model;
    ResonanceUncertainty sigma;
    double global_phase_rad = 0;  // nuisance absorbing overall rotation
    bool converged = false;
    int iterations = 0;
    double rms = 0;
};

/// Complex least squares on stacked (Re, Im) residuals, self-initialized
/// from the |S21| dip when no guess is given. Throws FitError when no dip
/// is detected or the fit does not converge in 500 iterations.
ResonanceFit fit_resonance(const ComplexTrace& trace,
                           const std::optional<ResonanceModel>& guess = {});

struct TrackFailure {
    std::size_t index;
    double b_par_t;
    std::string error;
};

struct TrackedSweep {
    SweepTrace trace;  // delta_f(B) = f_r(B) - f_r(B0) with uncertainties
    std::vector<TrackFailure> failures;
};

/// Fits every (B, trace) pair, warm-starting from the previous field point
/// (per worker chunk when n_threads > 1; chunk heads cold-start).
/// Throws if the first trace cannot be fit.
TrackedSweep track_frequency(
    std::span<const std::pair<double, ComplexTrace>> traces, int n_threads = 1);

}  // namespace kiq
