#pragma once

#include <span>
#include <string>
#include <vector>

#include "kiq/fluxonium.hpp"
#include "kiq/physics.hpp"

namespace kiq {

/// grAl nanojunction volume, integrated on a grid_n^3 midpoint grid.
struct NanojunctionGeometry {
    double edge_m = 20e-9;
    Vec3 center_m = Vec3::Zero();
    int grid_n = 16;

    void validate() const;
};

/// One spin above one nanojunction inside a fluxonium circuit.
/// The spin sits at height d above the cube's top face (+z), centered
/// laterally unless lateral_offset_m says otherwise; its moment is aligned
/// with the in-plane bias field B_par (+x), polarity aside.
struct SpinReadoutScenario {
    DipoleMoment moment;
    double distance_d_m = 10e-9;
    double b_par_t = 0.2;
    MaterialParams mat;
    FluxoniumParams circuit;  // nominal E_J at this B_par, spin at infinity
    NanojunctionGeometry junction;
    Eigen::Vector2d lateral_offset_m = Eigen::Vector2d::Zero();
    int basis_dim = 120;

    void validate() const;
    Vec3 spin_position() const;
};

/// Spin-state-dependent Josephson energy [Hz*h]:
/// E_J = E_J_nominal * <Delta(B_dip(r) + B_par)/Delta(B_par)> over the cube.
/// Normalized so a spin at infinite distance returns E_J_nominal exactly.
/// Throws std::domain_error naming the grid node if the local field
/// exceeds B_c anywhere.
double nanojunction_ej(const SpinReadoutScenario& scenario, int spin_polarity);

/// delta f_q = f_q(E_J, spin up) - f_q(E_J, spin down) at the scenario's
/// flux bias.
double spin_flip_shift(const SpinReadoutScenario& scenario);

struct Fig4Row {
    double d_m = 0;
    double b_par_t = 0;
    double delta_fq_hz = 0;
    bool ok = false;
    std::string error;
};

/// One row per (d, B_par) pair, ordered by (d index, B_par index).
/// Per-row failures are recorded in the row, not thrown.
std::vector<Fig4Row> fig4c_sweep(const SpinReadoutScenario& scenario_template,
                                 std::span<const double> d_list_m,
                                 std::span<const double> b_par_list_t,
                                 int n_threads = 1);

}  // namespace kiq
