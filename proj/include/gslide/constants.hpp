// constants.hpp — physical constants and unit conversions
//
// All internal energies and rates are stored in eV (hbar = 1); SI constants
// enter only when computing dipole moments, couplings, currents and powers.

#pragma once

namespace gslide::constants {

inline constexpr double hbar_ev_s = 6.582119569e-16;   // eV s
inline constexpr double hbar_j_s = 1.054571817e-34;    // J s
inline constexpr double c_m_s = 2.99792458e8;          // m / s
inline constexpr double eps0_f_m = 8.8541878128e-12;   // F / m
inline constexpr double e_c = 1.602176634e-19;         // C
inline constexpr double kb_ev_k = 8.617333262e-5;      // eV / K

inline constexpr double joule_to_ev(double j) { return j / e_c; }
inline constexpr double ev_to_joule(double ev) { return ev * e_c; }

// rate in eV -> angular rate in 1/s
inline constexpr double rate_ev_to_hz(double ev) { return ev / hbar_ev_s; }

}  // namespace gslide::constants
