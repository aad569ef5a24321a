#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "slowbeam/constants.hpp"
#include "slowbeam/errors.hpp"
#include "slowbeam/source.hpp"

using namespace slowbeam;

namespace {

SourceParams fig3_params() {
    SourceParams p;
    p.temperature = 302.0;
    p.drift = 51.0;
    p.mass = units::amu_to_kg(5053.0);
    return p;
}

// oracle: unnormalized density for independent integration
double raw_density(double v, const SourceParams& p) {
    double d = v - p.drift;
    return v * v * std::exp(-p.mass * d * d / (2.0 * constants::k_B * p.temperature));
}

}  // namespace

TEST_CASE("pdf normalizes to 1 against an independent Simpson oracle") {
    SourceParams p = fig3_params();
    FloatingMB dist(p);
    double upper = p.drift + 12.0 * dist.thermal_width();
    double total = oracles::simpson([&](double v) { return dist.pdf(v); }, 0.0, upper, 40000);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));

    SourceParams q;
    q.temperature = 585.0;
    q.drift = 0.0;
    q.mass = units::amu_to_kg(3815.0);
    FloatingMB dist2(q);
    double up2 = 12.0 * dist2.thermal_width();
    CHECK(oracles::simpson([&](double v) { return dist2.pdf(v); }, 0.0, up2, 40000) ==
          doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("pdf shape facts for the measured beam parameters") {
    SourceParams p = fig3_params();
    FloatingMB dist(p);
    // the v^2 prefactor pushes the density mode above the drift parameter
    CHECK(dist.mode() > p.drift);
    // analytic mode solves v (v - v_d) = 2 kB T / m; cross-check numerically
    double m = dist.mode();
    CHECK(m * (m - p.drift) ==
          doctest::Approx(2.0 * constants::k_B * p.temperature / p.mass).epsilon(1e-9));
    CHECK(dist.pdf(m) > dist.pdf(m - 1.0));
    CHECK(dist.pdf(m) > dist.pdf(m + 1.0));
    // slow tail remains measurable down to the slowest observed molecules
    CHECK(dist.pdf(11.0) > 0.0);
    CHECK(dist.pdf(-1.0) == 0.0);
}

TEST_CASE("zero drift reduces to the effusive-density form") {
    SourceParams p;
    p.temperature = 585.0;
    p.drift = 0.0;
    p.mass = units::amu_to_kg(5053.0);
    FloatingMB dist(p);
    CHECK(dist.mode() ==
          doctest::Approx(effusive_most_probable_speed(p.mass, p.temperature)).epsilon(1e-12));
}

TEST_CASE("effusive most probable speed") {
    CHECK(effusive_most_probable_speed(units::amu_to_kg(5053.0), 585.0) ==
          doctest::Approx(43.88).epsilon(0.002));
    CHECK(effusive_most_probable_speed(units::amu_to_kg(5672.0), 585.0) ==
          doctest::Approx(41.41).epsilon(0.002));
    // quadrupled temperature doubles the speed
    CHECK(effusive_most_probable_speed(1e-24, 400.0) ==
          doctest::Approx(2.0 * effusive_most_probable_speed(1e-24, 100.0)).epsilon(1e-12));
    CHECK_THROWS_AS(effusive_most_probable_speed(1e-24, 0.0), std::domain_error);
}

TEST_CASE("sampler: determinism, mean, KS distance") {
    SourceParams p = fig3_params();
    auto s1 = sample_velocities(100000, p, 42);
    auto s2 = sample_velocities(100000, p, 42);
    CHECK(s1 == s2);
    auto s3 = sample_velocities(1000, p, 43);
    CHECK(s1[0] != s3[0]);

    FloatingMB dist(p);
    // pdf mean by the independent quadrature oracle
    double upper = p.drift + 12.0 * dist.thermal_width();
    double mu = oracles::simpson([&](double v) { return v * dist.pdf(v); }, 0.0, upper, 40000) /
                oracles::simpson([&](double v) { return dist.pdf(v); }, 0.0, upper, 40000);
    double se = std::sqrt(oracles::variance(s1) / static_cast<double>(s1.size()));
    CHECK(std::fabs(oracles::mean(s1) - mu) < 3.0 * se);

    // KS distance against the CDF from the independent Simpson oracle
    double ks = oracles::ks_distance(s1, [&](double v) {
        return v <= 0.0 ? 0.0 : oracles::simpson([&](double u) { return dist.pdf(u); }, 0.0, v, 2000);
    });
    CHECK(ks < 0.01);
}

TEST_CASE("sampler reproduces the effusive mode at the source temperature") {
    SourceParams p;
    p.temperature = 585.0;
    p.drift = 0.0;
    p.mass = units::amu_to_kg(5053.0);
    auto s = sample_velocities(300000, p, 7);
    auto h = make_histogram(s, 0.0, 150.0, 150);
    std::size_t imax = 1;
    for (std::size_t i = 1; i + 1 < h.counts.size(); ++i)
        if (h.counts[i] > h.counts[imax]) imax = i;
    // vertex of a least-squares parabola through the 7 bins around the peak
    double sx = 0, sx2 = 0, sx3 = 0, sx4 = 0, sy = 0, sxy = 0, sx2y = 0, n = 0;
    for (int d = -3; d <= 3; ++d) {
        double x = static_cast<double>(d);
        double y = h.counts[imax + d];
        sx += x; sx2 += x * x; sx3 += x * x * x; sx4 += x * x * x * x;
        sy += y; sxy += x * y; sx2y += x * x * y;
        n += 1.0;
    }
    // normal equations for y = a + b x + c x^2 with symmetric x (sx = sx3 = 0)
    double c = (n * sx2y - sx2 * sy) / (n * sx4 - sx2 * sx2);
    double b = sxy / sx2;
    double vertex = -b / (2.0 * c);
    double mode_est = 0.5 * (h.bin_edges[imax] + h.bin_edges[imax + 1]) + vertex;
    CHECK(std::fabs(mode_est - 43.88) < 2.0);
}

TEST_CASE("fit recovers the sampler parameters") {
    SourceParams p = fig3_params();
    auto s = sample_velocities(200000, p, 11);
    auto h = make_histogram(s, 0.0, 160.0, 160);
    FloatingMbFit fit = fit_floating_mb(h, p.mass);
    CHECK(std::fabs(fit.drift - 51.0) < 1.0);
    CHECK(std::fabs(fit.temperature - 302.0) < 10.0);
    CHECK(fit.mode > fit.drift);
}

TEST_CASE("noise-free histogram refits exactly") {
    SourceParams p = fig3_params();
    FloatingMB dist(p);
    VelocityHistogram h;
    const int nb = 120;
    for (int i = 0; i <= nb; ++i) h.bin_edges.push_back(1.0 + 140.0 * i / nb);
    for (int i = 0; i < nb; ++i) {
        // a histogram records bin integrals of the density
        h.counts.push_back(1e6 * oracles::simpson([&](double v) { return dist.pdf(v); },
                                                  h.bin_edges[i], h.bin_edges[i + 1], 64));
    }
    FloatingMbFit fit = fit_floating_mb(h, p.mass);
    CHECK(fit.drift == doctest::Approx(51.0).epsilon(1e-4));
    CHECK(fit.temperature == doctest::Approx(302.0).epsilon(1e-4));
}

TEST_CASE("degenerate histograms are rejected, not silently fitted") {
    VelocityHistogram h;
    h.bin_edges = {0.0, 10.0};
    h.counts = {100.0};
    CHECK_THROWS_AS(fit_floating_mb(h, units::amu_to_kg(5053.0)), std::invalid_argument);
}

TEST_CASE("fit/sample loop recovers within quoted errors in >= 95% of seeded trials") {
    SourceParams p = fig3_params();
    int good_drift = 0, good_temp = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        auto s = sample_velocities(20000, p, 1000 + t);
        auto h = make_histogram(s, 0.0, 160.0, 80);
        FloatingMbFit fit = fit_floating_mb(h, p.mass);
        if (std::fabs(fit.drift - p.drift) < 2.0 * fit.stderr_drift) ++good_drift;
        if (std::fabs(fit.temperature - p.temperature) < 2.0 * fit.stderr_temperature)
            ++good_temp;
    }
    CHECK(good_drift >= 90);  // 2 sigma ~ 95%, with binomial slack
    CHECK(good_temp >= 90);
}

TEST_CASE("flux and number density bookkeeping") {
    FluxReport r;  // defaults: 7.5e5 cps, eta 1e-4, 0.075 cm^2, 0.8 m, 44 m/s
    FluxDensity fd = beam_flux_density(r, 3e-3);
    CHECK(fd.flux * 1e-4 == doctest::Approx(1e11).epsilon(1e-9));  // per cm^2 s
    CHECK(fd.number_density * 1e-6 == doctest::Approx(1.616e12).epsilon(0.001));  // per cm^3

    // linear in count rate, exactly inverse-square in distance
    FluxReport r2 = r;
    r2.count_rate *= 3.0;
    CHECK(beam_flux_density(r2, 3e-3).flux == doctest::Approx(3.0 * fd.flux));
    CHECK(beam_flux_density(r, 6e-3).number_density ==
          doctest::Approx(fd.number_density / 4.0).epsilon(1e-12));
    CHECK_THROWS_AS(beam_flux_density(r, 0.0), std::domain_error);
}

TEST_CASE("parameter validation") {
    SourceParams p = fig3_params();
    p.temperature = -1.0;
    CHECK_THROWS_AS(FloatingMB{p}, std::domain_error);
    FluxReport r;
    r.detection_efficiency = 1.5;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}
