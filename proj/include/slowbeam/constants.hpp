#pragma once

// Physical constants (CODATA 2018) and unit conversions.
// All computation inside the library is in SI; user-facing units (amu,
// Angstrom^3, eV, ...) are converted at the boundary with the helpers below.

namespace slowbeam {
namespace constants {

inline constexpr double k_B = 1.380649e-23;          // J/K
inline constexpr double h = 6.62607015e-34;          // J s
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double c = 299792458.0;             // m/s
inline constexpr double eps0 = 8.8541878128e-12;     // F/m
inline constexpr double amu = 1.66053906660e-27;     // kg
inline constexpr double R_gas = 8.314462618;         // J/(mol K)
inline constexpr double q_e = 1.602176634e-19;       // C (also J per eV)
inline constexpr double debye = 3.33564e-30;         // C m
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double g_earth = 9.80665;           // m/s^2

}  // namespace constants

namespace units {

inline constexpr double amu_to_kg(double m_amu) { return m_amu * constants::amu; }
inline constexpr double kg_to_amu(double m_kg) { return m_kg / constants::amu; }

// Volumetric polarizability: 1 A^3 = 1e-30 m^3.
inline constexpr double A3_to_m3(double a3) { return a3 * 1e-30; }
inline constexpr double m3_to_A3(double m3) { return m3 * 1e30; }

inline constexpr double eV_to_J(double ev) { return ev * constants::q_e; }
inline constexpr double J_to_eV(double j) { return j / constants::q_e; }
inline constexpr double meV_to_J(double mev) { return mev * 1e-3 * constants::q_e; }
inline constexpr double J_to_meV(double j) { return j / constants::q_e * 1e3; }

inline constexpr double debye_to_Cm(double d) { return d * constants::debye; }

}  // namespace units
}  // namespace slowbeam
