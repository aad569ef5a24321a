#include "slowbeam/sublimation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "slowbeam/constants.hpp"
#include "slowbeam/errors.hpp"
#include "slowbeam/rng.hpp"

namespace slowbeam {

void RampSeries::validate() const {
    if (time.size() != temperature.size() || time.size() != count_rate.size())
        throw std::invalid_argument("RampSeries: columns must have equal length");
    for (std::size_t i = 0; i + 1 < time.size(); ++i)
        if (!(time[i] < time[i + 1]))
            throw std::invalid_argument("RampSeries: time must be strictly increasing");
    for (std::size_t i = 0; i < temperature.size(); ++i) {
        if (!(temperature[i] > 0.0) || temperature[i] > kDecompositionTemperature)
            throw std::invalid_argument("RampSeries: temperature outside (0, 650] K");
        if (count_rate[i] < 0.0 || !std::isfinite(count_rate[i]))
            throw std::invalid_argument("RampSeries: count_rate must be finite and >= 0");
    }
}

double arrhenius_rate(double temperature_K, double delta_H_J_per_mol, double prefactor_hz) {
    if (!(temperature_K > 0.0))
        throw std::domain_error("arrhenius_rate: temperature must be > 0");
    return prefactor_hz * std::exp(-delta_H_J_per_mol / (constants::R_gas * temperature_K));
}

RampSeries synthesize_ramp(double T0_K, double heating_rate_K_per_s, double duration_s,
                           double delta_H_J_per_mol, double prefactor_hz, double noise_rel,
                           std::uint64_t seed, double dt_s, RampNoise noise) {
    if (!(T0_K > 0.0)) throw std::invalid_argument("synthesize_ramp: T0 must be > 0");
    if (heating_rate_K_per_s < 0.0)
        throw std::invalid_argument("synthesize_ramp: heating rate must be >= 0");
    if (!(duration_s > 0.0) || !(dt_s > 0.0))
        throw std::invalid_argument("synthesize_ramp: duration and dt must be > 0");
    double T_end = T0_K + heating_rate_K_per_s * duration_s;
    if (T_end > kDecompositionTemperature)
        throw std::domain_error(
            "synthesize_ramp: ramp to " + std::to_string(T_end) +
            " K exceeds decomposition temperature 650 K");

    Rng rng(derive_stream(seed, "sublimation"));
    RampSeries s;
    for (double t = 0.0; t <= duration_s + 1e-9; t += dt_s) {
        double T = T0_K + heating_rate_K_per_s * t;
        double rate = arrhenius_rate(T, delta_H_J_per_mol, prefactor_hz);
        double observed;
        if (noise == RampNoise::Poisson) {
            observed = rng.poisson(rate);
        } else {
            observed = rate * (1.0 + noise_rel * rng.normal());
            if (observed < 0.0) observed = 0.0;
        }
        s.time.push_back(t);
        s.temperature.push_back(T);
        s.count_rate.push_back(observed);
    }
    return s;
}

EnthalpyResult fit_enthalpy(const RampSeries& series) {
    series.validate();
    // x = 1/T, y = ln(rate); OLS slope = -delta_H / R.
    std::vector<double> x, y;
    double T_lo = kDecompositionTemperature, T_hi = 0.0;
    for (std::size_t i = 0; i < series.count_rate.size(); ++i) {
        if (series.count_rate[i] <= 0.0) continue;
        x.push_back(1.0 / series.temperature[i]);
        y.push_back(std::log(series.count_rate[i]));
        T_lo = std::min(T_lo, series.temperature[i]);
        T_hi = std::max(T_hi, series.temperature[i]);
    }
    const std::size_t n = x.size();
    if (n < 10)
        throw FitError("fit_enthalpy: fewer than 10 points with positive counts",
                       static_cast<double>(n));

    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw FitError("fit_enthalpy: degenerate temperature window", 0.0);
    double slope = sxy / sxx;
    double intercept = my - slope * mx;

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (intercept + slope * x[i]);
        rss += r * r;
    }
    double sigma2 = n > 2 ? rss / static_cast<double>(n - 2) : 0.0;
    double slope_err = std::sqrt(sigma2 / sxx);

    EnthalpyResult res;
    res.delta_H = -slope * constants::R_gas;
    res.stderr_delta_H = slope_err * constants::R_gas;
    res.prefactor_ln = intercept;
    res.window_low = T_lo;
    res.window_high = T_hi;
    res.points_used = n;
    return res;
}

}  // namespace slowbeam
