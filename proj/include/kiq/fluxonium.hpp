#pragma once

#include <Eigen/Dense>
#include <vector>

namespace kiq {

/// Circuit energies of H = 4 E_C n^2 + E_L (phi - 2 pi Phi_ext/Phi_0)^2 / 2
///                        - E_J cos(phi).
/// All energies are stored as frequencies E/h in Hz. E_J = 0 is allowed
/// (pure displaced oscillator); E_C and E_L must be positive.
struct FluxoniumParams {
    double e_j_hz = 25e9;
    double e_c_hz = 12e9;
    double e_l_hz = 1e9;
    double phi_ext_frac = 0.5;  // Phi_ext / Phi_0

    void validate() const;
};

/// Eigenvalues (E/h, ascending, Hz) plus the basis-truncation diagnostics.
struct Spectrum {
    std::vector<double> eigenvalues_hz;
    int basis_dim = 0;
    bool converged = false;      // |f_q(dim) - f_q(dim+20)| / f_q < 1e-9
    double convergence_rel = 0;  // the measured relative change

    double f_q_hz() const { return eigenvalues_hz[1] - eigenvalues_hz[0]; }
};

/// Hamiltonian in the eigenbasis of the quadratic part (oscillator basis,
/// level spacing sqrt(8 E_L E_C)). cos(phi) enters through the exact
/// Gaussian-factor matrix elements of the displacement operator.
Eigen::MatrixXd fluxonium_hamiltonian(const FluxoniumParams& p, int basis_dim);

/// Diagonalize at basis_dim and at basis_dim + 20; the convergence flag
/// compares f_q between the two sizes. Requires basis_dim >= 20.
Spectrum solve_fluxonium(const FluxoniumParams& p, int basis_dim = 120);

}  // namespace kiq
