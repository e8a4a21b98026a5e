#include "kiq/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kiq/constants.hpp"
#include "kiq/fit.hpp"
#include "kiq/physics.hpp"
#include "kiq/rng.hpp"

namespace kiq {

void EnsembleParams::validate() const {
    if (!(g > 0.0) || !(t_s_k > 0.0) || !(beta > 0.0) || !(sigma_inh_hz > 0.0))
        throw std::invalid_argument("EnsembleParams: g, T_S, beta, sigma_inh must be > 0");
    if (!(m_s > 0.0))
        throw std::invalid_argument("EnsembleParams: M_S must be > 0");
    if (!(c2_hz_per_t2 < 0.0))
        throw std::invalid_argument("EnsembleParams: c2 must be < 0");
}

void SweepTrace::validate() const {
    if (!(f_r0_hz > 0.0))
        throw std::invalid_argument("SweepTrace: f_r0 must be > 0");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0 && !(points[i].b_par_t > points[i - 1].b_par_t))
            throw std::invalid_argument("SweepTrace: B_par must be strictly increasing at row " +
                                        std::to_string(i));
        if (points[i].sigma_f_hz < 0.0)
            throw std::invalid_argument("SweepTrace: sigma_f must be >= 0 at row " +
                                        std::to_string(i));
    }
}

namespace {

// Resonator-like branch deviation of a two-mode avoided crossing:
// pushed up below the crossing, down above, +-g_perp jump at it.
double crossing_pull(double detuning_hz, double g_perp_hz) {
    const double half = 0.5 * std::abs(detuning_hz);
    const double split = std::sqrt(half * half + g_perp_hz * g_perp_hz) - half;
    return detuning_hz <= 0.0 ? split : -split;
}

}  // namespace

SweepTrace synthesize_sweep(const EnsembleParams& params, double f_r0_hz,
                            std::span<const double> b_grid_t,
                            double noise_sigma_hz, std::uint64_t seed,
                            std::span<const CrossingArtifact> artifacts) {
    params.validate();
    if (!(f_r0_hz > 0.0))
        throw std::invalid_argument("synthesize_sweep: f_r0 must be > 0");
    for (std::size_t i = 1; i < b_grid_t.size(); ++i)
        if (!(b_grid_t[i] > b_grid_t[i - 1]))
            throw std::invalid_argument("synthesize_sweep: B grid must be increasing");

    GaussianSampler rng(seed);
    SweepTrace trace;
    trace.f_r0_hz = f_r0_hz;
    trace.points.reserve(b_grid_t.size());
    for (const double b : b_grid_t) {
        const double m_rel =
            paramagnetic_magnetization(b, params.g, params.t_s_k, params.m_s) / params.m_s;
        double df = params.c2_hz_per_t2 * b * b - params.beta * f_r0_hz * m_rel * m_rel;
        for (const auto& a : artifacts) {
            const double f_spin = esr_frequency(std::max(b, 1e-300), a.g_factor);
            df += crossing_pull(f_spin - f_r0_hz, a.g_perp_hz);
        }
        if (noise_sigma_hz > 0.0) df += noise_sigma_hz * rng.gaussian();
        trace.points.push_back({b, df, noise_sigma_hz});
    }
    return trace;
}

namespace {

struct PipelineState {
    double baseline_const = 0.0;  // constant absorbed from the trace
    double c0 = 0.0;              // saturation magnetization shift (< 0)
    double c2 = 0.0;              // parabola curvature
    double slope = 0.0;           // a in M = tanh(a B)
};

// Weighted fit of the tanh slope; multi-start on a T_S log grid per the
// documented convention, Gauss-Newton inside the shared LM helper.
double fit_tanh_slope(const std::vector<double>& b, const std::vector<double>& m,
                      const std::vector<double>& w, double g_reference,
                      double warm_start) {
    auto residuals = [&](const Eigen::VectorXd& p) {
        const double a = std::exp(p[0]);
        Eigen::VectorXd r(b.size());
        for (std::size_t i = 0; i < b.size(); ++i)
            r[i] = std::sqrt(w[i]) * (m[i] - std::tanh(a * b[i]));
        return r;
    };
    std::vector<Eigen::VectorXd> starts;
    if (warm_start > 0.0)
        starts.push_back(Eigen::VectorXd::Constant(1, std::log(warm_start)));
    for (const double t_s : {0.010, 0.030, 0.100, 0.300, 1.000}) {
        const double a0 = g_reference * constants::mu_b / (2.0 * constants::k_b * t_s);
        starts.push_back(Eigen::VectorXd::Constant(1, std::log(a0)));
    }
    const LevMarResult fit = best_of_starts(residuals, starts);
    return std::exp(fit.params[0]);
}

}  // namespace

ExtractionResult extract_magnetization(const SweepTrace& trace,
                                       const ExtractionOptions& opts) {
    trace.validate();
    const std::size_t n = trace.points.size();
    std::vector<double> b(n), df(n), sigma(n);
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = trace.points[i].b_par_t;
        df[i] = trace.points[i].delta_f_hz;
        sigma[i] = trace.points[i].sigma_f_hz;
    }
    const bool weighted =
        std::any_of(sigma.begin(), sigma.end(), [](double s) { return s > 0.0; });
    std::vector<double> w(n, 1.0);
    if (weighted)
        for (std::size_t i = 0; i < n; ++i)
            w[i] = sigma[i] > 0.0 ? 1.0 / (sigma[i] * sigma[i]) : 1.0;

    std::size_t tail_count = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (b[i] >= opts.tail_start_t) ++tail_count;
    if (tail_count < 5)
        throw std::invalid_argument(
            "extract_magnetization: fewer than 5 points beyond tail_start");

    // clip the exclusion window to the sweep range
    std::optional<std::pair<double, double>> window;
    if (opts.exclusion_t) {
        const double lo = std::max(opts.exclusion_t->first, b.front());
        const double hi = std::min(opts.exclusion_t->second, b.back());
        if (lo < hi) window = {lo, hi};
    }
    auto in_window = [&](double field) {
        return window && field >= window->first && field <= window->second;
    };

    PipelineState st;
    const int rounds = opts.refine ? opts.max_rounds : 1;
    int rounds_used = 0;
    std::vector<double> m_val(n), m_sig(n);

    for (int round = 0; round < rounds; ++round) {
        ++rounds_used;
        // (1) weighted fit of the baseline model. First round: the spec's
        // parabola-plus-offset fit on the saturated tail. Refined rounds:
        // the same model with the saturation shape tanh^2(aB) made explicit
        // and an explicit constant, over all non-excluded points.
        if (round == 0) {
            std::size_t rows = tail_count;
            Eigen::MatrixXd design(rows, 2);
            Eigen::VectorXd y(rows), wt(rows);
            std::size_t r = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (b[i] < opts.tail_start_t) continue;
                design(r, 0) = 1.0;
                design(r, 1) = b[i] * b[i];
                y(r) = df[i];
                wt(r) = w[i];
                ++r;
            }
            const Eigen::VectorXd p = weighted_linear_lsq(design, y, wt);
            st.baseline_const = 0.0;
            st.c0 = p[0];
            st.c2 = p[1];
        } else {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < n; ++i)
                if (!in_window(b[i])) idx.push_back(i);
            Eigen::MatrixXd design(idx.size(), 3);
            Eigen::VectorXd y(idx.size()), wt(idx.size());
            for (std::size_t r = 0; r < idx.size(); ++r) {
                const std::size_t i = idx[r];
                const double t = std::tanh(st.slope * b[i]);
                design(r, 0) = 1.0;
                design(r, 1) = t * t;
                design(r, 2) = b[i] * b[i];
                y(r) = df[i];
                wt(r) = w[i];
            }
            const Eigen::VectorXd p = weighted_linear_lsq(design, y, wt);
            st.baseline_const = p[0];
            st.c0 = p[1];
            st.c2 = p[2];
        }

        if (!(st.c0 < 0.0)) break;  // degenerate; flagged below

        // (2)-(4) remove the baseline and map to a magnetization curve
        for (std::size_t i = 0; i < n; ++i) {
            const double df_m = df[i] - st.baseline_const - st.c2 * b[i] * b[i];
            const double ratio = df_m / st.c0;
            const double sig_ratio = sigma[i] / std::abs(st.c0);
            if (ratio <= 0.0) {
                m_val[i] = 0.0;  // noise pushed delta_f_M past zero; clamp
                m_sig[i] = std::sqrt(sig_ratio);
            } else {
                m_val[i] = std::sqrt(ratio);
                m_sig[i] = m_val[i] > std::sqrt(sig_ratio)
                               ? sig_ratio / (2.0 * m_val[i])
                               : std::sqrt(sig_ratio);
            }
        }

        // (5)-(6) weighted tanh fit outside the exclusion window
        std::vector<double> fb, fm, fw;
        for (std::size_t i = 0; i < n; ++i) {
            if (in_window(b[i])) continue;
            fb.push_back(b[i]);
            fm.push_back(m_val[i]);
            fw.push_back(weighted ? 1.0 / (m_sig[i] * m_sig[i]) : 1.0);
        }
        const double prev = st.slope;
        st.slope = fit_tanh_slope(fb, fm, fw, opts.g_reference, st.slope);
        if (round > 0 && std::abs(st.slope - prev) < 1e-13 * st.slope) break;
    }

    ExtractionResult out;
    out.c2_fit_hz_per_t2 = st.c2;
    out.offset_fit_hz = st.c0;
    out.baseline_const_hz = st.baseline_const;
    out.excluded_window_t = window;
    out.rounds_used = rounds_used;
    out.g_fit = opts.g_reference;
    if (!(st.c0 < 0.0)) {
        out.degenerate = true;  // no red shift: nothing to take a sqrt of
        return out;
    }
    out.t_s_fit_k =
        opts.g_reference * constants::mu_b / (2.0 * constants::k_b * st.slope);

    out.curve.reserve(n);
    double chi2 = 0.0;
    std::size_t fitted = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool excluded = in_window(b[i]);
        out.curve.push_back({b[i], m_val[i], m_sig[i], excluded});
        if (!excluded) {
            const double r = m_val[i] - std::tanh(st.slope * b[i]);
            chi2 += (weighted ? 1.0 / (m_sig[i] * m_sig[i]) : 1.0) * r * r;
            ++fitted;
        }
    }
    out.reduced_chi2 = fitted > 1 ? chi2 / (fitted - 1) : 0.0;
    return out;
}

}  // namespace kiq
