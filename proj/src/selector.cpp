#include "slowbeam/selector.hpp"

#include <cmath>
#include <stdexcept>

#include "slowbeam/rng.hpp"

namespace slowbeam {

void SelectorParams::validate() const {
    if (!(calibration > 0.0)) throw std::invalid_argument("selector: calibration must be > 0");
    if (!(fwhm_rel > 0.0 && fwhm_rel < 1.0))
        throw std::invalid_argument("selector: fwhm_rel must be in (0, 1)");
    if (rotor_freq < 0.0) throw std::invalid_argument("selector: rotor_freq must be >= 0");
    if (freq_stability < 0.0)
        throw std::invalid_argument("selector: freq_stability must be >= 0");
}

double selector_setpoint(const SelectorParams& p) {
    p.validate();
    return p.calibration * p.rotor_freq;
}

namespace {

double transmission_at(double v, double setpoint, const SelectorParams& p) {
    double fwhm = p.fwhm_rel * setpoint;
    double d = std::fabs(v - setpoint);
    if (p.shape == SelectorShape::Gaussian) {
        double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
        return std::exp(-0.5 * d * d / (sigma * sigma));
    }
    // Triangle with peak 1 and half-maximum at fwhm/2: zero at |v - s| >= fwhm.
    return d >= fwhm ? 0.0 : 1.0 - d / fwhm;
}

}  // namespace

double transmission(double v_mps, const SelectorParams& p) {
    p.validate();
    if (v_mps < 0.0) throw std::invalid_argument("transmission: v must be >= 0");
    if (!(p.rotor_freq > 0.0))
        throw std::domain_error("transmission: rotor_freq = 0, no pass band defined");
    return transmission_at(v_mps, p.calibration * p.rotor_freq, p);
}

std::vector<double> apply_selector(const std::vector<double>& samples,
                                   const SelectorParams& p, std::uint64_t seed) {
    p.validate();
    if (!(p.rotor_freq > 0.0))
        throw std::domain_error("apply_selector: rotor_freq = 0, no pass band defined");
    double setpoint = p.calibration * p.rotor_freq;
    std::vector<double> kept;
    kept.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        Rng rng(derive_stream(seed, "selector", i));
        double s = setpoint;
        if (p.jitter_enabled) s *= 1.0 + p.freq_stability * rng.normal();
        double t = transmission_at(samples[i], s, p);
        if (rng.uniform() < t) kept.push_back(samples[i]);
    }
    return kept;
}

}  // namespace slowbeam
