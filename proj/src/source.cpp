#include "slowbeam/source.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slowbeam/constants.hpp"
#include "slowbeam/errors.hpp"
#include "slowbeam/quadrature.hpp"
#include "slowbeam/rng.hpp"

namespace slowbeam {

void SourceParams::validate() const {
    if (!(temperature > 0.0)) throw std::domain_error("source: temperature must be > 0");
    if (drift < 0.0) throw std::domain_error("source: drift must be >= 0");
    if (!(mass > 0.0)) throw std::invalid_argument("source: mass must be > 0");
}

namespace {

inline double shape(double v, double drift, double inv_2kT_over_m) {
    double d = v - drift;
    return v * v * std::exp(-d * d * inv_2kT_over_m);
}

}  // namespace

FloatingMB::FloatingMB(const SourceParams& p) : p_(p) {
    p_.validate();
    width_ = std::sqrt(constants::k_B * p_.temperature / p_.mass);
    upper_ = p_.drift + 12.0 * width_;
    double inv = 1.0 / (2.0 * width_ * width_);
    double raw = integrate(
        [&](double v) { return shape(v, p_.drift, inv); }, 0.0, upper_, 1e-12);
    norm_ = 1.0 / raw;
}

double FloatingMB::pdf(double v) const {
    if (v < 0.0) return 0.0;
    double inv = 1.0 / (2.0 * width_ * width_);
    return norm_ * shape(v, p_.drift, inv);
}

double FloatingMB::mode() const {
    // v (v - v_d) = 2 kB T / m at the maximum of v^2 exp(...).
    double vd = p_.drift;
    return 0.5 * (vd + std::sqrt(vd * vd + 8.0 * width_ * width_));
}

double FloatingMB::mean() const {
    return integrate([&](double v) { return v * pdf(v); }, 0.0, upper_, 1e-12);
}

double effusive_most_probable_speed(double mass_kg, double temperature_K) {
    if (!(mass_kg > 0.0))
        throw std::invalid_argument("effusive_most_probable_speed: mass must be > 0");
    if (!(temperature_K > 0.0))
        throw std::domain_error("effusive_most_probable_speed: temperature must be > 0");
    return std::sqrt(2.0 * constants::k_B * temperature_K / mass_kg);
}

std::vector<double> sample_velocities(std::size_t n, const SourceParams& p,
                                      std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_velocities: n must be >= 1");
    FloatingMB dist(p);
    double hi = p.drift + 8.0 * dist.thermal_width();
    double peak = dist.pdf(dist.mode()) * 1.0000001;  // flat envelope height
    Rng rng(derive_stream(seed, "source"));
    std::vector<double> out;
    out.reserve(n);
    while (out.size() < n) {
        double v = rng.uniform(0.0, hi);
        double u = rng.uniform() * peak;
        if (u <= dist.pdf(v)) out.push_back(v);
    }
    return out;
}

void VelocityHistogram::validate() const {
    if (bin_edges.size() != counts.size() + 1)
        throw std::invalid_argument("histogram: need len(edges) = len(counts) + 1");
    for (std::size_t i = 0; i + 1 < bin_edges.size(); ++i)
        if (!(bin_edges[i] < bin_edges[i + 1]))
            throw std::invalid_argument("histogram: bin edges must be strictly increasing");
    for (double c : counts)
        if (c < 0.0 || !std::isfinite(c))
            throw std::invalid_argument("histogram: counts must be finite and >= 0");
}

std::size_t VelocityHistogram::nonempty_bins() const {
    std::size_t k = 0;
    for (double c : counts)
        if (c > 0.0) ++k;
    return k;
}

VelocityHistogram make_histogram(const std::vector<double>& samples, double v_min,
                                 double v_max, std::size_t n_bins) {
    if (!(v_max > v_min) || n_bins == 0)
        throw std::invalid_argument("make_histogram: bad binning");
    VelocityHistogram h;
    h.bin_edges.resize(n_bins + 1);
    h.counts.assign(n_bins, 0.0);
    double w = (v_max - v_min) / static_cast<double>(n_bins);
    for (std::size_t i = 0; i <= n_bins; ++i)
        h.bin_edges[i] = v_min + w * static_cast<double>(i);
    for (double v : samples) {
        if (v < v_min || v >= v_max) continue;
        auto idx = static_cast<std::size_t>((v - v_min) / w);
        if (idx >= n_bins) idx = n_bins - 1;
        h.counts[idx] += 1.0;
    }
    return h;
}

namespace {

struct MbModel {
    double mass;
    double half_width;  // bin half-width for the 3-point Gauss bin average

    double point(double v, const double q[3], double grad[3]) const {
        double A = q[0], vd = q[1], T = q[2];
        double kT = constants::k_B * T;
        double d = v - vd;
        double e = std::exp(-mass * d * d / (2.0 * kT));
        double f = A * v * v * e;
        grad[0] = v * v * e;
        grad[1] = f * mass * d / kT;
        grad[2] = f * mass * d * d / (2.0 * kT * T);
        return f;
    }

    // Counts are integrals over bins; averaging the model across the bin
    // (3-point Gauss-Legendre) removes the center-evaluation bias that
    // matters once bins are wide compared to the curvature scale.
    double eval(double center, const double q[3], double grad[3]) const {
        const double off = half_width * 0.7745966692414834;  // sqrt(3/5)
        double g0[3], g1[3], g2[3];
        double f = 8.0 * point(center, q, g0) + 5.0 * point(center - off, q, g1) +
                   5.0 * point(center + off, q, g2);
        for (int a = 0; a < 3; ++a) grad[a] = (8.0 * g0[a] + 5.0 * (g1[a] + g2[a])) / 18.0;
        return f / 18.0;
    }
};

bool solve3(double a[3][3], double b[3], double x[3]) {
    int idx[3] = {0, 1, 2};
    for (int c = 0; c < 3; ++c) {
        int p = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::fabs(a[idx[r]][c]) > std::fabs(a[idx[p]][c])) p = r;
        std::swap(idx[c], idx[p]);
        double piv = a[idx[c]][c];
        if (std::fabs(piv) < 1e-300) return false;
        for (int r = c + 1; r < 3; ++r) {
            double m = a[idx[r]][c] / piv;
            for (int k = c; k < 3; ++k) a[idx[r]][k] -= m * a[idx[c]][k];
            b[idx[r]] -= m * b[idx[c]];
        }
    }
    for (int c = 2; c >= 0; --c) {
        double s = b[idx[c]];
        for (int k = c + 1; k < 3; ++k) s -= a[idx[c]][k] * x[k];
        x[c] = s / a[idx[c]][c];
    }
    return true;
}

bool invert3(const double a[3][3], double inv[3][3]) {
    double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                 a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                 a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if (std::fabs(det) < 1e-300) return false;
    double id = 1.0 / det;
    inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) * id;
    inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) * id;
    inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) * id;
    inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) * id;
    inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) * id;
    inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) * id;
    inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) * id;
    inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) * id;
    inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) * id;
    return true;
}

}  // namespace

FloatingMbFit fit_floating_mb(const VelocityHistogram& hist, double mass_kg) {
    hist.validate();
    if (!(mass_kg > 0.0)) throw std::invalid_argument("fit_floating_mb: mass must be > 0");
    if (hist.nonempty_bins() < 5)
        throw std::invalid_argument("fit_floating_mb: need at least 5 nonempty bins");

    const std::size_t nb = hist.counts.size();
    std::vector<double> v(nb), y(nb), w(nb);  // centers, counts, weights 1/sigma^2
    double y_max = 0.0, v_at_max = 0.0, mean = 0.0, m2 = 0.0, total = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
        v[i] = 0.5 * (hist.bin_edges[i] + hist.bin_edges[i + 1]);
        y[i] = hist.counts[i];
        w[i] = 1.0 / std::max(y[i], 1.0);  // Poisson seed weights, floor 1
        if (y[i] > y_max) { y_max = y[i]; v_at_max = v[i]; }
        mean += y[i] * v[i];
        total += y[i];
    }
    mean /= total;
    for (std::size_t i = 0; i < nb; ++i) m2 += y[i] * (v[i] - mean) * (v[i] - mean);
    m2 /= total;

    // Moment-based start: histogram variance sets T, peak position sets v_d
    // (backed off by the v^2 skew term).
    double T0 = std::max(1.0, mass_kg * m2 / constants::k_B);
    double vd0 = std::max(0.0, v_at_max - 2.0 * constants::k_B * T0 /
                                   (mass_kg * std::max(v_at_max, 1.0)));
    MbModel model{mass_kg, 0.5 * (hist.bin_edges[1] - hist.bin_edges[0])};
    double q[3] = {1.0, vd0, T0};
    {
        double g[3];
        double f_at_peak = model.eval(v_at_max, q, g);
        if (f_at_peak > 0.0) q[0] = y_max / f_at_peak;
    }

    auto chi2_of = [&](const double qq[3]) {
        double s = 0.0, g[3];
        for (std::size_t i = 0; i < nb; ++i) {
            double r = y[i] - model.eval(v[i], qq, g);
            s += w[i] * r * r;
        }
        return s;
    };

    // Poisson variances are taken from the model prediction (iteratively
    // reweighted), not from the observed counts: data-based weights correlate
    // with the fluctuations and bias the fit.
    auto reweight = [&](const double qq[3]) {
        double g[3];
        for (std::size_t i = 0; i < nb; ++i) w[i] = 1.0 / std::max(model.eval(v[i], qq, g), 1.0);
    };

    double lambda = 1e-3;
    double chi2 = chi2_of(q);
    const int max_iter = 200;
    int it = 0;
    bool converged = false;
    for (; it < max_iter; ++it) {
        reweight(q);
        chi2 = chi2_of(q);
        double JtJ[3][3] = {{0}}, Jtr[3] = {0};
        double g[3];
        for (std::size_t i = 0; i < nb; ++i) {
            double r = y[i] - model.eval(v[i], q, g);
            for (int a = 0; a < 3; ++a) {
                Jtr[a] += w[i] * g[a] * r;
                for (int b = 0; b < 3; ++b) JtJ[a][b] += w[i] * g[a] * g[b];
            }
        }
        double A[3][3], rhs[3], step[3];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) A[a][b] = JtJ[a][b];
            A[a][a] *= (1.0 + lambda);
            rhs[a] = Jtr[a];
        }
        if (!solve3(A, rhs, step))
            throw FitError("fit_floating_mb: singular normal equations", chi2);
        double trial[3] = {q[0] + step[0], q[1] + step[1], q[2] + step[2]};
        bool valid = trial[2] > 0.0 && trial[0] > 0.0 && trial[1] >= 0.0;
        double chi2_trial = valid ? chi2_of(trial) : chi2 * 2.0;
        if (valid && chi2_trial <= chi2) {
            double rel = std::fabs(chi2 - chi2_trial) / std::max(chi2, 1e-300);
            double step_rel = 0.0;
            for (int a = 0; a < 3; ++a)
                step_rel = std::max(step_rel,
                                    std::fabs(step[a]) / std::max(std::fabs(trial[a]), 1e-300));
            for (int a = 0; a < 3; ++a) q[a] = trial[a];
            chi2 = chi2_trial;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (rel < 1e-14 || step_rel < 1e-10) { converged = true; break; }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12)
                throw FitError("fit_floating_mb: no downhill step found", chi2);
        }
    }
    if (!converged && it == max_iter)
        throw FitError("fit_floating_mb: did not converge", chi2);

    // Standard errors from the Jacobian at the optimum (Fisher information
    // with the model-based Poisson weights).
    reweight(q);
    chi2 = chi2_of(q);
    double JtJ[3][3] = {{0}};
    double g[3];
    for (std::size_t i = 0; i < nb; ++i) {
        model.eval(v[i], q, g);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) JtJ[a][b] += w[i] * g[a] * g[b];
    }
    double cov[3][3];
    FloatingMbFit out;
    if (invert3(JtJ, cov)) {
        out.stderr_amplitude = std::sqrt(std::max(0.0, cov[0][0]));
        out.stderr_drift = std::sqrt(std::max(0.0, cov[1][1]));
        out.stderr_temperature = std::sqrt(std::max(0.0, cov[2][2]));
    }
    out.amplitude = q[0];
    out.drift = q[1];
    out.temperature = q[2];
    out.chi2 = chi2;
    out.iterations = it + 1;
    double kT = constants::k_B * out.temperature;
    out.mode = 0.5 * (out.drift + std::sqrt(out.drift * out.drift + 8.0 * kT / mass_kg));
    return out;
}

void FluxReport::validate() const {
    if (!(count_rate > 0.0) || !(detection_efficiency > 0.0) || !(detector_area > 0.0) ||
        !(distance_detector > 0.0) || !(mean_speed > 0.0))
        throw std::invalid_argument("FluxReport: all fields must be > 0");
    if (detection_efficiency > 1.0)
        throw std::invalid_argument("FluxReport: detection_efficiency must be <= 1");
}

FluxDensity beam_flux_density(const FluxReport& report, double distance_query_m) {
    report.validate();
    if (!(distance_query_m > 0.0))
        throw std::domain_error("beam_flux_density: query distance must be > 0");
    FluxDensity fd;
    fd.flux = report.count_rate / (report.detection_efficiency * report.detector_area);
    double ratio = report.distance_detector / distance_query_m;
    fd.number_density = fd.flux / report.mean_speed * ratio * ratio;
    return fd;
}

}  // namespace slowbeam
