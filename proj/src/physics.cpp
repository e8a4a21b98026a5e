#include "kiq/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace kiq {

void DipoleMoment::validate() const {
    if (!(magnitude_mu_b > 0.0))
        throw std::invalid_argument("DipoleMoment: magnitude must be > 0");
    if (std::abs(axis.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("DipoleMoment: axis must be unit length");
    if (polarity != 1 && polarity != -1)
        throw std::invalid_argument("DipoleMoment: polarity must be +1 or -1");
}

Vec3 DipoleMoment::moment_si() const {
    return magnitude_mu_b * constants::mu_b * static_cast<double>(polarity) * axis;
}

void MaterialParams::validate() const {
    if (!(b_c_t > 0.0) || !(l_kin0_h > 0.0) || !(i_star_a > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("MaterialParams: all parameters must be > 0");
    if (alpha > 1.0)
        throw std::invalid_argument("MaterialParams: alpha must be <= 1");
}

Vec3 dipole_field(const DipoleMoment& m, const Vec3& displacement_m) {
    m.validate();
    const double r = displacement_m.norm();
    if (!(r > 0.0))
        throw std::domain_error("dipole_field: dipole singularity (|r| = 0)");
    const Vec3 rhat = displacement_m / r;
    const Vec3 mom = m.moment_si();
    const double prefactor = constants::mu_0 / (4.0 * M_PI) / (r * r * r);
    return prefactor * (3.0 * mom.dot(rhat) * rhat - mom);
}

double gap_suppression_ratio(const Vec3& b_total_t, double b_c_t) {
    if (!(b_c_t > 0.0))
        throw std::invalid_argument("gap_suppression_ratio: B_c must be > 0");
    const double ratio = b_total_t.norm() / b_c_t;
    if (ratio > 1.0)
        throw std::domain_error("gap_suppression_ratio: field exceeds critical field");
    return std::sqrt(1.0 - ratio * ratio);
}

KineticInductanceResult kinetic_inductance(double persistent_current_a,
                                           const MaterialParams& mat) {
    mat.validate();
    const double x = persistent_current_a / mat.i_star_a;
    return {mat.l_kin0_h * (1.0 + x * x), std::abs(persistent_current_a) > mat.i_star_a};
}

double paramagnetic_magnetization(double b_par_t, double g, double t_s_k,
                                  double m_s) {
    if (!(t_s_k > 0.0))
        throw std::domain_error("paramagnetic_magnetization: T_S must be > 0");
    if (!(m_s > 0.0))
        throw std::domain_error("paramagnetic_magnetization: M_S must be > 0");
    const double x = g * constants::mu_b * b_par_t / (2.0 * constants::k_b * t_s_k);
    return m_s * std::tanh(x);
}

double esr_field(double f_hz, double g) {
    if (!(f_hz > 0.0) || !(g > 0.0))
        throw std::domain_error("esr_field: f and g must be > 0");
    return constants::planck * f_hz / (g * constants::mu_b);
}

double esr_frequency(double b_t, double g) {
    if (!(b_t > 0.0) || !(g > 0.0))
        throw std::domain_error("esr_frequency: B and g must be > 0");
    return g * constants::mu_b * b_t / constants::planck;
}

}  // namespace kiq
