#pragma once

#include <cmath>
#include <stdexcept>

#include "slowbeam/constants.hpp"
#include "slowbeam/vec3.hpp"

// Closed-form optical-manipulation estimators for a polarizable particle in
// a far-detuned Gaussian beam.

namespace slowbeam {

struct GaussianBeam {
    double power = 0.0;       // W
    double waist = 100e-6;    // m, w0
    double wavelength = 1064e-9;  // m
    Vec3 focus{0.0, 0.0, 0.0};
    Vec3 axis{1.0, 0.0, 0.0};     // unit vector
    double rayleigh_override = 0.0;  // m; <= 0 means derived

    double rayleigh() const {
        if (rayleigh_override > 0.0) return rayleigh_override;
        return constants::pi * waist * waist / wavelength;
    }

    void validate() const {
        if (power < 0.0) throw std::invalid_argument("GaussianBeam: power must be >= 0");
        if (!(waist > 0.0)) throw std::invalid_argument("GaussianBeam: waist must be > 0");
        if (!(wavelength > 0.0))
            throw std::invalid_argument("GaussianBeam: wavelength must be > 0");
        if (std::fabs(norm(axis) - 1.0) > 1e-9)
            throw std::invalid_argument("GaussianBeam: axis must be a unit vector");
    }
};

struct LaserPulse {
    double energy = 0.0;    // J
    double duration = 0.0;  // s
    GaussianBeam beam;      // beam.power is derived from energy/duration

    double peak_power() const { return energy / duration; }

    void validate() const {
        if (!(energy > 0.0)) throw std::invalid_argument("LaserPulse: energy must be > 0");
        if (!(duration > 0.0)) throw std::invalid_argument("LaserPulse: duration must be > 0");
        beam.validate();
    }
};

// Well depth U = 2 alpha_SI P / (eps0 c pi w0^2) = 8 alpha_vol P / (c w0^2).
inline double dipole_potential_depth(double alpha_vol_m3, double power_W, double waist_m) {
    if (alpha_vol_m3 < 0.0 || power_W < 0.0)
        throw std::invalid_argument("dipole_potential_depth: negative input");
    if (!(waist_m > 0.0))
        throw std::invalid_argument("dipole_potential_depth: waist must be > 0");
    return 8.0 * alpha_vol_m3 * power_W / (constants::c * waist_m * waist_m);
}

// N_abs = I0 sigma tau / (h nu) = 2 P sigma tau / (pi w0^2 h nu)
inline double photons_absorbed(double power_W, double sigma_abs_m2, double tau_s,
                               double waist_m, double wavelength_m) {
    if (power_W < 0.0 || sigma_abs_m2 < 0.0)
        throw std::invalid_argument("photons_absorbed: negative input");
    if (!(tau_s > 0.0) || !(waist_m > 0.0) || !(wavelength_m > 0.0))
        throw std::invalid_argument("photons_absorbed: tau, waist, wavelength must be > 0");
    double photon_energy = constants::h * constants::c / wavelength_m;
    return 2.0 * power_W * sigma_abs_m2 * tau_s /
           (constants::pi * waist_m * waist_m * photon_energy);
}

// Power whose well depth equals E_kin; inverse of dipole_potential_depth.
inline double stopping_power(double e_kin_J, double alpha_vol_m3, double waist_m) {
    if (e_kin_J < 0.0) throw std::invalid_argument("stopping_power: energy must be >= 0");
    if (!(alpha_vol_m3 > 0.0) || !(waist_m > 0.0))
        throw std::invalid_argument("stopping_power: alpha and waist must be > 0");
    return e_kin_J * constants::c * waist_m * waist_m / (8.0 * alpha_vol_m3);
}

// Energy-exchange slowing on a potential hill of height U.
// Returns v if the molecule is brought to rest (2U/m >= v^2).
inline double pulsed_deceleration(double v_mps, double potential_J, double mass_kg) {
    if (!(mass_kg > 0.0)) throw std::invalid_argument("pulsed_deceleration: mass must be > 0");
    if (!(v_mps > 0.0)) throw std::invalid_argument("pulsed_deceleration: v must be > 0");
    if (potential_J < 0.0)
        throw std::invalid_argument("pulsed_deceleration: potential must be >= 0");
    double rem = v_mps * v_mps - 2.0 * potential_J / mass_kg;
    if (rem <= 0.0) return v_mps;
    return v_mps - std::sqrt(rem);
}

// sqrt(2U/m): largest transverse speed still bound by a well of depth U.
inline double transverse_capture_speed(double potential_J, double mass_kg) {
    if (!(mass_kg > 0.0))
        throw std::invalid_argument("transverse_capture_speed: mass must be > 0");
    if (potential_J < 0.0)
        throw std::invalid_argument("transverse_capture_speed: potential must be >= 0");
    return std::sqrt(2.0 * potential_J / mass_kg);
}

// Photons absorbed crossing the waist on a straight diametral path at speed v:
// N = sigma P sqrt(2/pi) / (h nu w0 v).
inline double transit_photon_dose(double power_W, double waist_m, double v_mps,
                                  double sigma_abs_m2, double wavelength_m) {
    if (power_W < 0.0 || sigma_abs_m2 < 0.0)
        throw std::invalid_argument("transit_photon_dose: negative input");
    if (!(waist_m > 0.0) || !(v_mps > 0.0) || !(wavelength_m > 0.0))
        throw std::invalid_argument("transit_photon_dose: waist, v, wavelength must be > 0");
    double photon_energy = constants::h * constants::c / wavelength_m;
    return sigma_abs_m2 * power_W * std::sqrt(2.0 / constants::pi) /
           (photon_energy * waist_m * v_mps);
}

}  // namespace slowbeam
