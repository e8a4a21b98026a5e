#include "kiq/fluxonium.hpp"

#include <cmath>
#include <stdexcept>

namespace kiq {

void FluxoniumParams::validate() const {
    if (!(e_j_hz >= 0.0))
        throw std::invalid_argument("FluxoniumParams: E_J must be >= 0");
    if (!(e_c_hz > 0.0) || !(e_l_hz > 0.0))
        throw std::invalid_argument("FluxoniumParams: E_C and E_L must be > 0");
    if (!std::isfinite(phi_ext_frac))
        throw std::invalid_argument("FluxoniumParams: phi_ext_frac must be finite");
}

namespace {

// Matrix elements <m|cos(lam(a+a^dag))|n> and <m|sin(...)|n> from the
// displacement-operator closed form
//   <m|D(i lam)|n> = e^{-lam^2/2} (i lam)^{m-n} sqrt(n!/m!) L_n^{(m-n)}(lam^2),
// m >= n. Even |m-n| feeds cos, odd feeds sin. The prefactor
// e^{-lam^2/2} lam^k sqrt(n!/(n+k)!) is carried as a running product so
// nothing overflows; the Laguerre recurrence runs upward in n at fixed k.
void displacement_cos_sin(int dim, double lam, Eigen::MatrixXd& cos_m,
                          Eigen::MatrixXd& sin_m) {
    const double x = lam * lam;
    cos_m.setZero(dim, dim);
    sin_m.setZero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double log_pref = -0.5 * x + k * std::log(lam) - 0.5 * std::lgamma(k + 1.0);
        double pref = log_pref > -700.0 ? std::exp(log_pref) : 0.0;
        double l_prev = 0.0, l_cur = 1.0;  // L_0^{(k)}(x) = 1
        for (int n = 0; n + k < dim; ++n) {
            if (n == 1) {
                l_prev = l_cur;
                l_cur = 1.0 + k - x;
            } else if (n > 1) {
                const double l_next =
                    ((2.0 * (n - 1) + k + 1.0 - x) * l_cur - (n - 1.0 + k) * l_prev) / n;
                l_prev = l_cur;
                l_cur = l_next;
            }
            if (n >= 1) pref *= std::sqrt(static_cast<double>(n) / (n + k));
            const int m = n + k;
            const double val = pref * l_cur;
            if (k % 2 == 0) {
                const double sgn = (k / 2) % 2 ? -1.0 : 1.0;
                cos_m(m, n) = cos_m(n, m) = sgn * val;
            } else {
                const double sgn = ((k - 1) / 2) % 2 ? -1.0 : 1.0;
                sin_m(m, n) = sin_m(n, m) = sgn * val;
            }
        }
    }
}

}  // namespace

Eigen::MatrixXd fluxonium_hamiltonian(const FluxoniumParams& p, int basis_dim) {
    p.validate();
    if (basis_dim < 2)
        throw std::invalid_argument("fluxonium_hamiltonian: basis_dim must be >= 2");

    // Oscillator of the quadratic part, phase measured from the flux-displaced
    // minimum: phi' = lam (a + a^dag), lam = (2 E_C/E_L)^{1/4}, and the
    // quadratic part is exactly omega (a^dag a + 1/2), omega = sqrt(8 E_C E_L).
    const double lam = std::pow(2.0 * p.e_c_hz / p.e_l_hz, 0.25);
    const double omega = std::sqrt(8.0 * p.e_c_hz * p.e_l_hz);
    const double phi_ext = 2.0 * M_PI * p.phi_ext_frac;

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis_dim, basis_dim);
    for (int i = 0; i < basis_dim; ++i) h(i, i) = omega * (i + 0.5);

    if (p.e_j_hz != 0.0) {
        Eigen::MatrixXd cos_m, sin_m;
        displacement_cos_sin(basis_dim, lam, cos_m, sin_m);
        // cos(phi) = cos(phi') cos(phi_ext) - sin(phi') sin(phi_ext)
        h.noalias() -= p.e_j_hz * std::cos(phi_ext) * cos_m;
        h.noalias() += p.e_j_hz * std::sin(phi_ext) * sin_m;
    }
    return h;
}

namespace {

std::vector<double> eigenvalues(const FluxoniumParams& p, int dim) {
    const Eigen::MatrixXd h = fluxonium_hamiltonian(p, dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

Spectrum solve_fluxonium(const FluxoniumParams& p, int basis_dim) {
    if (basis_dim < 20)
        throw std::invalid_argument("solve_fluxonium: basis_dim must be >= 20");
    Spectrum s;
    s.eigenvalues_hz = eigenvalues(p, basis_dim);
    s.basis_dim = basis_dim;
    const std::vector<double> check = eigenvalues(p, basis_dim + 20);
    const double fq = s.f_q_hz();
    const double fq_check = check[1] - check[0];
    s.convergence_rel = std::abs(fq - fq_check) / std::abs(fq);
    s.converged = s.convergence_rel < 1e-9;
    return s;
}

}  // namespace kiq
