#pragma once

// CODATA 2018 values. Single source of truth for every module; all
// quantities strict SI unless the name says otherwise.

namespace qkdjam::constants {

inline constexpr double speed_of_light_m_per_s = 299792458.0;        // exact
inline constexpr double vacuum_permittivity_F_per_m = 8.8541878128e-12;
inline constexpr double electron_charge_C = 1.602176634e-19;         // exact
inline constexpr double avogadro_per_mol = 6.02214076e23;            // exact

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double tsirelson_bound = 2.8284271247461903;        // 2*sqrt(2)
inline constexpr double chsh_classical_limit = 2.0;

} // namespace qkdjam::constants
