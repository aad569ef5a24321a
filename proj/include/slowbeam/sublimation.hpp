#pragma once

#include <cstdint>
#include <vector>

// Sublimation-enthalpy extraction: Arrhenius count-rate model, synthetic
// temperature ramps, and the ln(rate) vs 1/T fit.

namespace slowbeam {

// Experimental decomposition temperature of the nanosphere family; ramps are
// refused beyond it.
inline constexpr double kDecompositionTemperature = 650.0;  // K

enum class RampNoise { Gaussian, Poisson };

struct RampSeries {
    std::vector<double> time;         // s, strictly increasing
    std::vector<double> temperature;  // K
    std::vector<double> count_rate;   // 1/s, >= 0

    void validate() const;
};

// prefactor * exp(-delta_H / (R T))
double arrhenius_rate(double temperature_K, double delta_H_J_per_mol, double prefactor_hz);

// T(t) = T0 + rate t, sampled every dt; counts carry multiplicative Gaussian
// noise (or Poisson when selected). Deterministic per seed. Throws
// std::domain_error when the ramp would exceed the decomposition temperature.
RampSeries synthesize_ramp(double T0_K, double heating_rate_K_per_s, double duration_s,
                           double delta_H_J_per_mol, double prefactor_hz, double noise_rel,
                           std::uint64_t seed, double dt_s = 1.0,
                           RampNoise noise = RampNoise::Gaussian);

struct EnthalpyResult {
    double delta_H = 0.0;       // J/mol
    double stderr_delta_H = 0.0;  // J/mol
    double prefactor_ln = 0.0;  // ln(1/s)
    double window_low = 0.0;    // K
    double window_high = 0.0;   // K
    std::size_t points_used = 0;
};

// Ordinary least squares of ln(count_rate) against 1/T; delta_H = -slope R.
// Points with nonpositive counts are excluded; fewer than 10 usable points is
// a FitError.
EnthalpyResult fit_enthalpy(const RampSeries& series);

}  // namespace slowbeam
