#pragma once

#include <cstdint>
#include <vector>

// Helical velocity-selector model. The empirical calibration (m/s per Hz of
// rotor frequency) is primary; transmission is a band-pass around the
// setpoint with a configurable line shape.

namespace slowbeam {

enum class SelectorShape { Triangle, Gaussian };

struct SelectorParams {
    double calibration = 1.08;     // (m/s)/Hz
    double fwhm_rel = 0.05;        // FWHM as a fraction of the setpoint
    double rotor_freq = 0.0;       // Hz
    double freq_stability = 1e-3;  // relative rotor jitter (stroboscopic lock)
    bool jitter_enabled = false;   // per-shot Gaussian blur of the setpoint
    SelectorShape shape = SelectorShape::Triangle;

    void validate() const;
};

// Mean transmitted velocity: calibration * rotor_freq.
double selector_setpoint(const SelectorParams& p);

// Acceptance probability in [0, 1]; peak 1 at the setpoint, FWHM
// fwhm_rel * setpoint. The triangle vanishes outside twice the FWHM base.
double transmission(double v_mps, const SelectorParams& p);

// Monte-Carlo acceptance using transmission(); per-sample RNG streams are
// derived from (seed, index) so the filter can be mapped in parallel.
std::vector<double> apply_selector(const std::vector<double>& samples,
                                   const SelectorParams& p, std::uint64_t seed);

}  // namespace slowbeam
