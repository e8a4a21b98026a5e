#pragma once

#include <Eigen/Dense>

#include "kiq/constants.hpp"

namespace kiq {

/// Magnetic field (or any 3-vector quantity) in the chip frame.
/// Convention used throughout: x = in-plane along the strip (direction of
/// B_par), z = out-of-plane. Vectors carry no frame metadata.
using Vec3 = Eigen::Vector3d;

/// Point magnetic dipole. The physical moment is
/// magnitude_mu_b * mu_B * polarity * axis.
struct DipoleMoment {
    double magnitude_mu_b = 10.0;  // moment in multiples of mu_B
    Vec3 axis = Vec3::UnitX();     // unit vector
    int polarity = +1;             // +1 (up) or -1 (down)

    void validate() const;
    Vec3 moment_si() const;  // [A m^2]
};

/// grAl film parameters entering the kinetic-inductance and gap laws.
struct MaterialParams {
    double b_c_t = 1.5;       // critical field [T]
    double l_kin0_h = 1e-9;   // unperturbed kinetic inductance [H]
    double i_star_a = 1e-3;   // nonlinearity current scale [A]
    double alpha = 1.0;       // kinetic inductance fraction, in [0, 1]

    void validate() const;
};

/// L_kin(I_p) with an out-of-regime flag instead of an error so fitting
/// loops stay smooth across the |I_p| = I* boundary.
struct KineticInductanceResult {
    double value_h;
    bool beyond_perturbative;
};

/// Field of a point dipole at displacement r from it (SI).
/// Throws std::domain_error on zero displacement.
Vec3 dipole_field(const DipoleMoment& m, const Vec3& displacement_m);

/// Delta(B)/Delta(0) = sqrt(1 - (|B|/B_c)^2). Throws std::domain_error
/// when |B| > B_c (the expression turns imaginary there).
double gap_suppression_ratio(const Vec3& b_total_t, double b_c_t);

KineticInductanceResult kinetic_inductance(double persistent_current_a,
                                           const MaterialParams& mat);

/// M(B) = M_S tanh(g mu_B B / 2 k_B T_S) for a spin-1/2 ensemble.
double paramagnetic_magnetization(double b_par_t, double g, double t_s_k,
                                  double m_s);

/// ESR condition h f = g mu_B B, both directions.
double esr_field(double f_hz, double g);
double esr_frequency(double b_t, double g);

/// g_z = delta_omega / 2.
inline double longitudinal_coupling(double delta_omega) {
    return 0.5 * delta_omega;
}

}  // namespace kiq
