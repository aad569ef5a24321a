#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "slowbeam/cavity_cool.hpp"
#include "slowbeam/focus_sim.hpp"
#include "slowbeam/molecule.hpp"
#include "slowbeam/selector.hpp"
#include "slowbeam/source.hpp"
#include "slowbeam/sublimation.hpp"

// Line-oriented configuration: `[section]` headers and `key = value` pairs,
// full-line comments with '#' or ';'. Every key has a default, unknown keys
// are rejected, and a parsed config serializes back (the run manifest) such
// that loading the manifest reproduces the config exactly.

namespace slowbeam {

struct MoleculeConfig {
    std::string name = "perfluoroC60-n7";
    // overrides; NaN means "take from the catalogue entry"
    double mass_amu = -1.0;
    double alpha_A3 = -1.0;
    double sigma_abs_m2 = -1.0;
    double sigma_ion_m2 = -1.0;
    double dipole_D = -1.0;

    bool operator==(const MoleculeConfig&) const = default;
};

struct SourceConfig {
    double temperature_K = 302.0;
    double drift_mps = 51.0;
    std::uint64_t n_samples = 100000;
    double hist_min_mps = 0.0;
    double hist_max_mps = 150.0;
    std::uint64_t hist_bins = 150;
    double count_rate_cps = 7.5e5;
    double detection_efficiency = 1e-4;
    double detector_area_cm2 = 0.075;
    double distance_detector_m = 0.8;
    double mean_speed_mps = 44.0;
    double density_query_mm = 3.0;
    double density_override_cm3 = 0.0;  // 0 disables the override

    bool operator==(const SourceConfig&) const = default;
};

struct SelectorConfig {
    double calibration_mps_per_hz = 1.08;
    double fwhm_rel = 0.05;
    double rotor_freq_hz = 47.2;
    double freq_stability = 1e-3;
    bool jitter = false;
    std::string shape = "triangle";  // triangle | gaussian

    bool operator==(const SelectorConfig&) const = default;
};

struct SublimationConfig {
    double T0_K = 540.0;
    double T_end_K = 563.0;
    double heating_rate_K_per_min = 0.7;
    double dt_s = 1.0;
    double delta_H_kJmol = 222.0;
    double prefactor_cps = 3.3e26;
    double noise_rel = 0.02;
    std::string noise_model = "gaussian";  // gaussian | poisson

    bool operator==(const SublimationConfig&) const = default;
};

struct OpticsConfig {
    double power_W = 1.0;
    double waist_um = 100.0;
    double wavelength_nm = 1064.0;
    double pulse_energy_mJ = 75.0;
    double pulse_duration_ns = 5.0;
    double sigma_scale = 1.0;  // gas-phase absorption cross-section caveat knob

    bool operator==(const OpticsConfig&) const = default;
};

struct FocusConfig {
    std::vector<double> powers_W = {60000.0, 240000.0};
    double waist_um = 100.0;
    double wavelength_nm = 1064.0;
    double source_side_um = 50.0;
    double source_distance_mm = 3.0;
    double v_mean_mps = 50.0;
    double v_spread_mps = 1.0;
    std::uint64_t n_particles = 10000;
    double dt_us = 0.1;
    double detector_distance_m = 0.4;
    double detector_half_width_mm = 2.5;
    bool dual = false;
    bool gravity = false;
    double field_cutoff_mm = 3.0;
    std::uint64_t traj_particles = 20;
    std::uint64_t traj_stride = 20;

    bool operator==(const FocusConfig&) const = default;
};

struct CoolingConfig {
    std::uint64_t n = 1000;
    double mass_amu = 5000.0;
    double v_mean_mps = 10.0;
    double v_spread_mps = 1.5;
    double kappa_rad_per_s = 2.0 * constants::pi * 1e6;
    double detuning_rad_per_s = -2.0 * constants::pi * 1e6;
    double wavelength_nm = 1064.0;
    double waist_um = 400.0;
    double cavity_length_cm = 1.0;
    std::vector<double> powers_W = {1000.0 / 3.0, 1000.0, 3000.0};
    double rescale = 1.0;
    double eta_cal = 1.2124e8;
    double P_ref_W = 1000.0;
    double t_end_us = 800.0;
    double dt_ns = 2.0;
    std::uint64_t record_stride = 2000;
    double extent_cm = 1.0;
    double interaction_cutoff_us = 0.0;  // 0 disables the transit cutoff

    bool operator==(const CoolingConfig&) const = default;
};

struct OutputConfig {
    std::string dir = "out";
    bool quiet = false;
    bool json_summary = false;

    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    std::uint64_t seed = 12345;
    MoleculeConfig molecule;
    SourceConfig source;
    SelectorConfig selector;
    SublimationConfig sublimation;
    OpticsConfig optics;
    FocusConfig focus;
    CoolingConfig cooling;
    OutputConfig output;

    bool operator==(const RunConfig&) const = default;

    // Throws ConfigError(Invariant) naming the offending field.
    void validate() const;

    // --- resolved module inputs ---
    Molecule resolve_molecule() const;
    SourceParams source_params() const;
    FluxReport flux_report() const;
    SelectorParams selector_params() const;
    EnsembleSpec focus_ensemble() const;
    DetectorSpec focus_detector() const;
    SimOptions focus_options() const;
    std::vector<GaussianBeam> focus_beams(double power_W) const;
    Molecule focus_molecule() const;   // [molecule] resolved (shared with optics)
    CavityGeometry cooling_geometry() const;
    CoolingEnsemble cooling_ensemble() const;
    CouplingCalibration cooling_calibration() const;
    // Pump at a given power with the configured kappa/detuning/rescale applied.
    CavityPump cooling_pump(double power_W) const;
    EvolveOptions cooling_evolve_options() const;
    double cooling_t_end() const { return cooling.t_end_us * 1e-6; }
    double cooling_dt() const { return cooling.dt_ns * 1e-9; }
};

// Parse from file / text. Errors: ConfigError with Kind MissingFile, Syntax
// (with line), UnknownKey (with line), Invariant.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");

// Full serialization including defaults; starts with a version comment.
std::string serialize_config(const RunConfig& cfg);

void write_manifest(const std::filesystem::path& run_dir, const RunConfig& cfg);

}  // namespace slowbeam
