#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "slowbeam/constants.hpp"
#include "slowbeam/molecule.hpp"

// Semiclassical coupled particle-field dynamics for transverse-pump cavity
// cooling with collective self-organization. Motion is simulated along the
// cavity axis; the pump is perpendicular to both the cavity axis and the
// molecular beam, so every particle carries the same pump phase.
//
//   field:     da/dt = [i (Delta_c - U0 S2) - kappa] a + i eta S1
//   particles: m dv_j/dt = hbar k [ U0 |a|^2 sin(2 k x_j) - eta (a + a*) sin(k x_j) ]
//   with S1 = sum_j cos(k x_j), S2 = sum_j cos^2(k x_j).
//
// The eta force term is the gradient of +hbar eta (a+a*) cos(k x) with the
// sign that makes bunching at the pumped antinodes self-reinforcing; with the
// opposite pairing the feedback frustrates itself and no threshold exists.

namespace slowbeam {

struct CavityGeometry {
    double length = 0.01;         // m
    double waist = 400e-6;        // m
    double wavelength = 1064e-9;  // m

    double mode_volume() const {  // L * pi w^2 / 4 (~1.26 mm^3 for the defaults)
        return length * constants::pi * waist * waist / 4.0;
    }
    double omega() const { return 2.0 * constants::pi * constants::c / wavelength; }
    double wavenumber() const { return 2.0 * constants::pi / wavelength; }
};

struct CavityPump {
    double kappa = 2.0 * constants::pi * 1e6;     // rad/s, field decay
    double detuning = -2.0 * constants::pi * 1e6; // rad/s, Delta_c (pump - cavity)
    double wavenumber = 2.0 * constants::pi / 1064e-9;  // 1/m
    double U0 = 0.0;       // rad/s, per-particle dispersive shift (< 0)
    double eta = 0.0;      // rad/s, per-particle effective pump rate
    double waist = 400e-6; // m
    double rescale = 1.0;  // interaction multiplier standing in for the real density

    void validate() const;
};

// Pump-rate calibration: eta(P) = eta_cal sqrt(P / P_ref). eta_cal places the
// reference ensemble (N = 1000, 5000 amu, 10 +- 1.5 m/s) at the
// self-organization threshold near P_ref.
struct CouplingCalibration {
    double eta_cal = 1.2124e8;  // rad/s at P_ref
    double P_ref = 1000.0;      // W
};

// U0 = -alpha_SI omega_c / (4 eps0 V_mode); eta from the calibration. Both are
// multiplied by rescale.
CavityPump coupling_from_power(double power_W, const CavityGeometry& geom,
                               const Molecule& molecule,
                               const CouplingCalibration& cal = {}, double rescale = 1.0);

struct CoolingEnsemble {
    std::size_t n = 1000;
    double mass = 5000.0 * constants::amu;  // kg
    std::vector<double> x;  // m, along the cavity axis
    std::vector<double> v;  // m/s, along the cavity axis
    double v_mean = 10.0;   // m/s
    double v_spread = 1.5;  // m/s half-width
    std::uint64_t seed = 1;

    void validate() const;
    double mean_kinetic_energy() const;  // J
};

// Uniform positions over +-extent/2, uniform velocities v_mean +- v_spread.
CoolingEnsemble make_cooling_ensemble(std::size_t n, double mass_kg, double v_mean,
                                      double v_spread, std::uint64_t seed,
                                      double extent_m = 0.01);

// Adiabatic field for frozen positions:
// a_ss = i eta S1 / (kappa - i (Delta_c - U0 S2)).
std::complex<double> steady_state_field(const std::vector<double>& x, const CavityPump& p);

// Theta = |sum cos(k x_j)| / n.
double order_parameter(const std::vector<double>& x, double wavenumber);

struct CoolingTrace {
    std::vector<double> time;          // s
    std::vector<double> mean_ke;       // J, axial
    std::vector<double> photon_number; // |a|^2
    std::vector<double> order_param;   // Theta in [0, 1]

    // mean Theta over the trailing 10% of the trace
    double theta_late() const;
};

struct EvolveOptions {
    std::size_t record_stride = 1000;    // steps between trace rows
    double interaction_cutoff = 0.0;     // s; > 0 switches the coupling off after transit
};

struct EvolveResult {
    CoolingTrace trace;
    CoolingEnsemble final_state;
    std::complex<double> final_field;
};

// Fixed-step integration: the field's linear part is propagated by its exact
// exponential over dt (the kappa stiffness drops out), particles by
// velocity-Verlet with the field held across the half-kicks. Throws
// std::invalid_argument with a suggested dt when dt is too coarse, and
// IntegrationError if the state degenerates.
EvolveResult evolve(const CoolingEnsemble& e, const CavityPump& p, double t_end, double dt,
                    const EvolveOptions& opts = {});

struct ThresholdScan {
    std::vector<double> powers;      // W, as scanned (sorted ascending)
    std::vector<double> theta_late;  // per power
    std::vector<double> ke_ratio;    // final/initial mean axial KE per power
    double detected_power = 0.0;     // smallest power with theta_late > 0.5
    double bracket_low = 0.0;        // threshold lies in [bracket_low, detected_power]
    double bracket_high = 0.0;
};

// Maps power to a fully populated pump (kappa, detuning, coupling).
using PumpFactory = std::function<CavityPump(double power_W)>;

// Runs evolve per power (fresh ensemble, same seed). Throws NumericError
// ("threshold above scan range") when no scanned power organizes.
ThresholdScan detect_threshold(const std::vector<double>& powers_W,
                               const CoolingEnsemble& ensemble, const PumpFactory& factory,
                               double t_end, double dt, const EvolveOptions& opts = {});

}  // namespace slowbeam
