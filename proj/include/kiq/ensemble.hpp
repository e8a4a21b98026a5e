#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace kiq {

/// Spin-ensemble parameters of the field-sweep forward model
///   delta_f(B) = c2 B^2 - beta f_r0 (M(B)/M_S)^2 + artifacts + noise.
struct EnsembleParams {
    double g = 1.8;               // gyromagnetic factor
    double t_s_k = 0.070;         // spin temperature [K]
    double m_s = 1.0;             // saturation magnetization (normalized)
    double beta = 1.282051282051282e-4;  // delta_f_M(sat) = -beta * f_r0
    double c2_hz_per_t2 = -5.0e6;        // bare-resonator parabola curvature
    double sigma_inh_hz = 0.5e6;         // inhomogeneous ESR linewidth

    void validate() const;
};

struct FieldPoint {
    double b_par_t;
    double delta_f_hz;
    double sigma_f_hz;
};

/// Frequency-shift sweep vs parallel field. B strictly increasing.
struct SweepTrace {
    std::vector<FieldPoint> points;
    double f_r0_hz = 7.8e9;

    void validate() const;
};

/// Phenomenological avoided-crossing feature: a dispersive two-mode pull of
/// strength g_perp centered at the field where g_factor spins cross f_r0.
struct CrossingArtifact {
    double g_factor = 2.0;
    double g_perp_hz = 3e4;
};

SweepTrace synthesize_sweep(const EnsembleParams& params, double f_r0_hz,
                            std::span<const double> b_grid_t,
                            double noise_sigma_hz, std::uint64_t seed,
                            std::span<const CrossingArtifact> artifacts = {});

struct MagnetizationPoint {
    double b_par_t;
    double m_over_ms;
    double sigma;
    bool excluded;
};

struct ExtractionOptions {
    double tail_start_t = 0.32;
    std::optional<std::pair<double, double>> exclusion_t =
        std::pair<double, double>{0.244, 0.302};
    double g_reference = 1.8;  // from ESR; the tanh shape fixes only g/T_S
    bool refine = true;        // iterate the pipeline to self-consistency
    int max_rounds = 64;
};

struct ExtractionResult {
    double c2_fit_hz_per_t2 = 0;
    double offset_fit_hz = 0;  // delta_f_M at saturation (c0, a red shift)
    double baseline_const_hz = 0;  // constant absorbed from the trace
    std::vector<MagnetizationPoint> curve;
    double t_s_fit_k = 0;
    double g_fit = 0;
    std::optional<std::pair<double, double>> excluded_window_t;
    bool degenerate = false;  // fitted c0 >= 0: no magnetization signal
    int rounds_used = 0;
    double reduced_chi2 = 0;  // of the weighted tanh stage
};

/// Inverse of the forward model: parabola tail fit, baseline removal,
/// M = sqrt(clamped delta_f_M / c0), weighted tanh fit for T_S.
/// Throws std::invalid_argument when fewer than 5 points lie beyond
/// tail_start.
ExtractionResult extract_magnetization(const SweepTrace& trace,
                                       const ExtractionOptions& opts = {});

}  // namespace kiq
