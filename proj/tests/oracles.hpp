#pragma once

// Test-side oracles, deliberately independent of the library's numerics:
// fixed-grid composite Simpson integration, central finite differences, and
// a Kolmogorov-Smirnov distance. Keep these dumb and obviously correct.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Composite Simpson on a uniform grid (n even panels, plain summation).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n = 20000) {
    if (n % 2) ++n;
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// KS distance between samples and an analytic CDF.
inline double ks_distance(std::vector<double> samples,
                          const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double c = cdf(samples[i]);
        d = std::max(d, std::fabs(c - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(c - static_cast<double>(i + 1) / n));
    }
    return d;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
    double m = mean(v), s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

}  // namespace oracles
