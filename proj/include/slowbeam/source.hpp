#pragma once

#include <cstdint>
#include <vector>

#include "slowbeam/molecule.hpp"

// Thermal-source statistics: shifted ("floating") Maxwell-Boltzmann speed
// density f(v) ~ v^2 exp(-m (v - v_d)^2 / (2 kB T)), sampling, histogram
// fitting and flux/number-density bookkeeping.

namespace slowbeam {

struct SourceParams {
    double temperature = 302.0;  // K
    double drift = 51.0;         // m/s, shift parameter v_d
    double mass = 0.0;           // kg

    void validate() const;       // throws std::domain_error / invalid_argument
};

// Normalized density over v in [0, inf). The normalization constant is
// computed once by adaptive quadrature on construction.
class FloatingMB {
public:
    explicit FloatingMB(const SourceParams& p);

    double pdf(double v) const;       // s/m, 0 for v < 0
    double mode() const;              // analytic: (v_d + sqrt(v_d^2 + 8 kB T/m))/2
    double mean() const;              // numerical first moment
    double thermal_width() const { return width_; }  // sqrt(kB T / m)
    double support_upper() const { return upper_; }  // integration cutoff

private:
    SourceParams p_;
    double width_ = 0.0;  // sqrt(kB T / m)
    double norm_ = 1.0;   // normalization constant A
    double upper_ = 0.0;  // v_d + 12 width
};

inline double floating_mb_pdf(double v, const SourceParams& p) {
    return FloatingMB(p).pdf(v);
}

// sqrt(2 kB T / m): mode of the zero-drift effusive density.
double effusive_most_probable_speed(double mass_kg, double temperature_K);

// i.i.d. draws by rejection sampling under a flat envelope covering
// [0, v_d + 8 sqrt(kB T / m)]. Deterministic for a fixed seed.
std::vector<double> sample_velocities(std::size_t n, const SourceParams& p,
                                      std::uint64_t seed);

struct VelocityHistogram {
    std::vector<double> bin_edges;  // m/s, strictly increasing, size = counts.size() + 1
    std::vector<double> counts;     // >= 0

    void validate() const;
    std::size_t nonempty_bins() const;
};

VelocityHistogram make_histogram(const std::vector<double>& samples, double v_min,
                                 double v_max, std::size_t n_bins);

struct FloatingMbFit {
    double amplitude = 0.0;
    double drift = 0.0;        // m/s
    double temperature = 0.0;  // K
    double stderr_amplitude = 0.0;
    double stderr_drift = 0.0;
    double stderr_temperature = 0.0;
    double mode = 0.0;         // m/s, density mode at the fitted parameters
    double chi2 = 0.0;
    int iterations = 0;
};

// Weighted (Poisson: sigma = sqrt(max(count,1))) Levenberg-Marquardt fit of
// counts against A v^2 exp(-m (v - v_d)^2 / (2 kB T)) at the bin centers.
// Throws FitError when the iteration does not converge, std::invalid_argument
// when fewer than 5 bins are nonempty.
FloatingMbFit fit_floating_mb(const VelocityHistogram& hist, double mass_kg);

struct FluxReport {
    double count_rate = 7.5e5;            // 1/s
    double detection_efficiency = 1e-4;   // dimensionless
    double detector_area = 0.075e-4;      // m^2 (default 0.075 cm^2)
    double distance_detector = 0.8;       // m
    double mean_speed = 44.0;             // m/s

    void validate() const;
};

struct FluxDensity {
    double flux = 0.0;            // 1/(m^2 s) at the detector
    double number_density = 0.0;  // 1/m^3 at the queried distance
};

// F = rate / (efficiency * area); n(d) = (F / mean_speed) (D/d)^2.
FluxDensity beam_flux_density(const FluxReport& report, double distance_query_m);

}  // namespace slowbeam
