#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slowbeam/molecule.hpp"
#include "slowbeam/optics.hpp"
#include "slowbeam/vec3.hpp"

// Ensemble trajectory simulation of molecules through focused Gaussian
// fields: an optical lens / collimator for the molecular beam.
//
// Geometry convention: the molecular beamline is +z (vertical fountain), the
// source square sits in the (x, y) plane at z = -source_distance, and the
// collimation beam crosses the beamline horizontally (axis x, focus at the
// origin). A second, orthogonal beam (axis y) collimates the remaining
// transverse direction. Beam axes and foci are free, so co-axial (guiding)
// configurations can be set up through the same interface.

namespace slowbeam {

struct ParticleState {
    Vec3 position;  // m
    Vec3 velocity;  // m/s
};

struct FieldSample {
    double potential = 0.0;  // J (<= 0, attractive)
    Vec3 force;              // N
    double intensity = 0.0;  // W/m^2
};

// Off-axis dipole potential of one beam and its analytic gradient:
// U(rho, s) = -U0 (w0/w(s))^2 exp(-2 rho^2 / w(s)^2), w(s) = w0 sqrt(1+(s/zR)^2).
FieldSample gaussian_field(const Vec3& pos, const GaussianBeam& beam, double alpha_vol_m3);

// Sum over several beams.
FieldSample total_field(const Vec3& pos, std::span<const GaussianBeam> beams,
                        double alpha_vol_m3);

struct EnsembleSpec {
    std::size_t n_particles = 10000;
    double source_side = 50e-6;      // m, square emitter edge
    double source_distance = 3e-3;   // m below the beam focus
    double v_mean = 50.0;            // m/s along the beamline
    double v_spread = 1.0;           // m/s half-width, longitudinal and transverse
    std::uint64_t seed = 1;

    void validate() const;
};

struct DetectorSpec {
    double distance = 0.4;      // m along the beamline, measured from the focus
    double half_width = 2.5e-3; // m, square transverse acceptance

    void validate() const;
};

struct SimOptions {
    double dt = 1e-7;            // s
    bool gravity = false;        // -z
    // Integration switches to free flight once z exceeds this (the crossing
    // fields are exponentially dead there). Set it to the detector distance
    // when a beam runs along the beamline.
    double field_cutoff_z = 3e-3;
    std::size_t record_stride = 0;     // trajectory decimation; 0 = do not record
    std::size_t record_particles = 0;  // how many leading particles to record
};

struct Trajectory {
    std::vector<double> time;
    std::vector<ParticleState> states;
    double photon_dose = 0.0;  // absorbed photons accumulated along the path
};

// Velocity-Verlet integration in the summed beam field. Throws
// IntegrationError (with step index) if the state leaves the realm of finite
// floating point.
Trajectory integrate_trajectory(const ParticleState& s0, std::span<const GaussianBeam> beams,
                                const Molecule& molecule, double dt, double t_end,
                                const SimOptions& opts = {});

struct EnsembleResult {
    EnsembleSpec spec;
    DetectorSpec detector;
    std::size_t hits = 0;
    double hit_fraction = 0.0;
    // state at the detector plane, and whether it fell inside the acceptance
    std::vector<ParticleState> finals;
    std::vector<bool> accepted;
    std::vector<double> photon_dose;            // per particle
    double dose_p50 = 0.0, dose_p90 = 0.0, dose_max = 0.0;
    std::vector<Trajectory> recorded;           // decimated sample trajectories
};

EnsembleResult simulate_ensemble(const EnsembleSpec& spec, std::span<const GaussianBeam> beams,
                                 const Molecule& molecule, const DetectorSpec& detector,
                                 const SimOptions& opts = {});

// Ratio of hit fractions (field on / field off). Both runs must share the
// ensemble spec and detector. Throws NumericError on a zero baseline.
double forward_gain(const EnsembleResult& with_field, const EnsembleResult& without_field);

}  // namespace slowbeam
