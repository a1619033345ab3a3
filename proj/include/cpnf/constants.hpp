#pragma once

// CODATA 2018 values, SI units.

#include <numbers>

namespace cpnf::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double c = 299792458.0;                   // m/s
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double h_planck = 6.62607015e-34;         // J s
inline constexpr double eps0 = 8.8541878128e-12;           // F/m
inline constexpr double e_charge = 1.602176634e-19;        // C
inline constexpr double bohr_radius = 5.29177210903e-11;   // m
inline constexpr double k_boltzmann = 1.380649e-23;        // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

/// e a0, the atomic unit of electric dipole moment (C m).
inline constexpr double dipole_au = e_charge * bohr_radius;
/// 4 pi eps0 a0^3, the atomic unit of polarizability (C m^2 / V).
inline constexpr double polarizability_au = 4.0 * pi * eps0 * bohr_radius * bohr_radius * bohr_radius;

}  // namespace cpnf::constants
