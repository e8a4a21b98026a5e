#pragma once

// CODATA-2018 fundamental constants, SI units. Fixed at build time and
// never user-configurable, so every derived number is reproducible.
namespace kiq::constants {

inline constexpr double mu_b = 9.2740100783e-24;      // Bohr magneton [J/T]
inline constexpr double k_b = 1.380649e-23;           // Boltzmann constant [J/K]
inline constexpr double planck = 6.62607015e-34;      // Planck constant [J s]
inline constexpr double mu_0 = 1.25663706212e-6;      // vacuum permeability [T m/A]
inline constexpr double e_charge = 1.602176634e-19;   // elementary charge [C]
inline constexpr double phi_0 = planck / (2.0 * e_charge);  // flux quantum [Wb]

}  // namespace kiq::constants
