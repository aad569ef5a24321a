#pragma once

#include <stdexcept>

#include "slowbeam/constants.hpp"

// Elementary kinematics shared by all modules.

namespace slowbeam {

// 1/2 m v^2. Negative v is fine (squared).
inline double kinetic_energy(double mass_kg, double v_mps) {
    if (!(mass_kg > 0.0)) throw std::invalid_argument("kinetic_energy: mass must be > 0");
    return 0.5 * mass_kg * v_mps * v_mps;
}

// h / (m v)
inline double de_broglie_wavelength(double mass_kg, double v_mps) {
    if (!(mass_kg > 0.0))
        throw std::invalid_argument("de_broglie_wavelength: mass must be > 0");
    if (v_mps == 0.0)
        throw std::domain_error("de_broglie_wavelength: infinite wavelength at v = 0");
    if (v_mps < 0.0)
        throw std::domain_error("de_broglie_wavelength: v must be > 0");
    return constants::h / (mass_kg * v_mps);
}

// SI polarizability from the volumetric convention: alpha_SI = 4 pi eps0 alpha_vol.
inline double polarizability_si(double alpha_vol_m3) {
    if (alpha_vol_m3 < 0.0)
        throw std::invalid_argument("polarizability_si: alpha_vol must be >= 0");
    return 4.0 * constants::pi * constants::eps0 * alpha_vol_m3;
}

}  // namespace slowbeam
