#include "kiq/nanojunction.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kiq/parallel.hpp"

namespace kiq {

void NanojunctionGeometry::validate() const {
    if (!(edge_m > 0.0))
        throw std::invalid_argument("NanojunctionGeometry: edge must be > 0");
    if (grid_n < 2)
        throw std::invalid_argument("NanojunctionGeometry: grid_n must be >= 2");
    if (!center_m.allFinite())
        throw std::invalid_argument("NanojunctionGeometry: center must be finite");
}

void SpinReadoutScenario::validate() const {
    moment.validate();
    mat.validate();
    circuit.validate();
    junction.validate();
    if (!(distance_d_m >= 0.0))
        throw std::invalid_argument("SpinReadoutScenario: distance d must be >= 0");
    if (!(std::abs(b_par_t) < mat.b_c_t))
        throw std::invalid_argument("SpinReadoutScenario: |B_par| must be < B_c");
}

Vec3 SpinReadoutScenario::spin_position() const {
    return junction.center_m +
           Vec3(lateral_offset_m.x(), lateral_offset_m.y(),
                0.5 * junction.edge_m + distance_d_m);
}

double nanojunction_ej(const SpinReadoutScenario& scenario, int spin_polarity) {
    scenario.validate();
    if (spin_polarity != 1 && spin_polarity != -1)
        throw std::invalid_argument("nanojunction_ej: spin_polarity must be +1 or -1");

    DipoleMoment moment = scenario.moment;
    moment.polarity = spin_polarity;

    const auto& junction = scenario.junction;
    const int n = junction.grid_n;
    const double edge = junction.edge_m;
    const Vec3 spin_pos = scenario.spin_position();
    const Vec3 bias(scenario.b_par_t, 0.0, 0.0);

    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const Vec3 node =
                    junction.center_m +
                    Vec3((i + 0.5) / n - 0.5, (j + 0.5) / n - 0.5, (k + 0.5) / n - 0.5) *
                        edge;
                const Vec3 b_local = bias + dipole_field(moment, node - spin_pos);
                const double b_norm = b_local.norm();
                if (b_norm > scenario.mat.b_c_t) {
                    std::ostringstream os;
                    os << "nanojunction_ej: field exceeds critical field at grid node ("
                       << i << "," << j << "," << k << "): |B| = " << b_norm
                       << " T > B_c = " << scenario.mat.b_c_t << " T";
                    throw std::domain_error(os.str());
                }
                sum += std::sqrt(1.0 - (b_norm / scenario.mat.b_c_t) *
                                           (b_norm / scenario.mat.b_c_t));
            }
        }
    }
    const double mean_ratio = sum / (static_cast<double>(n) * n * n);
    const double bias_ratio = std::sqrt(
        1.0 - (scenario.b_par_t / scenario.mat.b_c_t) * (scenario.b_par_t / scenario.mat.b_c_t));
    return scenario.circuit.e_j_hz * mean_ratio / bias_ratio;
}

double spin_flip_shift(const SpinReadoutScenario& scenario) {
    const double ej_up = nanojunction_ej(scenario, +1);
    const double ej_down = nanojunction_ej(scenario, -1);
    FluxoniumParams p_up = scenario.circuit;
    p_up.e_j_hz = ej_up;
    FluxoniumParams p_down = scenario.circuit;
    p_down.e_j_hz = ej_down;
    const Spectrum s_up = solve_fluxonium(p_up, scenario.basis_dim);
    const Spectrum s_down = solve_fluxonium(p_down, scenario.basis_dim);
    return s_up.f_q_hz() - s_down.f_q_hz();
}

std::vector<Fig4Row> fig4c_sweep(const SpinReadoutScenario& scenario_template,
                                 std::span<const double> d_list_m,
                                 std::span<const double> b_par_list_t,
                                 int n_threads) {
    if (d_list_m.empty() || b_par_list_t.empty())
        throw std::invalid_argument("fig4c_sweep: empty sweep axis");

    std::vector<Fig4Row> rows(d_list_m.size() * b_par_list_t.size());
    parallel_for(rows.size(), n_threads, [&](std::size_t idx) {
        const std::size_t di = idx / b_par_list_t.size();
        const std::size_t bi = idx % b_par_list_t.size();
        Fig4Row& row = rows[idx];
        row.d_m = d_list_m[di];
        row.b_par_t = b_par_list_t[bi];
        try {
            SpinReadoutScenario s = scenario_template;
            s.distance_d_m = row.d_m;
            s.b_par_t = row.b_par_t;
            row.delta_fq_hz = spin_flip_shift(s);
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
    });
    return rows;
}

}  // namespace kiq
