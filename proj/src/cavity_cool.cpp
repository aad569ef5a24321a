#include "slowbeam/cavity_cool.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "slowbeam/errors.hpp"
#include "slowbeam/physics.hpp"
#include "slowbeam/rng.hpp"

namespace slowbeam {

void CavityPump::validate() const {
    if (!(kappa > 0.0)) throw std::invalid_argument("CavityPump: kappa must be > 0");
    if (!(wavenumber > 0.0)) throw std::invalid_argument("CavityPump: wavenumber must be > 0");
    if (!(rescale > 0.0)) throw std::invalid_argument("CavityPump: rescale must be > 0");
    if (!(waist > 0.0)) throw std::invalid_argument("CavityPump: waist must be > 0");
}

CavityPump coupling_from_power(double power_W, const CavityGeometry& geom,
                               const Molecule& molecule, const CouplingCalibration& cal,
                               double rescale) {
    if (power_W < 0.0) throw std::invalid_argument("coupling_from_power: power must be >= 0");
    if (!(rescale > 0.0)) throw std::invalid_argument("coupling_from_power: rescale must be > 0");
    molecule.validate();
    CavityPump p;
    p.wavenumber = geom.wavenumber();
    p.waist = geom.waist;
    p.rescale = rescale;
    double alpha_si = polarizability_si(molecule.alpha_vol);
    p.U0 = -alpha_si * geom.omega() / (4.0 * constants::eps0 * geom.mode_volume()) * rescale;
    p.eta = cal.eta_cal * std::sqrt(power_W / cal.P_ref) * rescale;
    return p;
}

void CoolingEnsemble::validate() const {
    if (n < 2) throw std::invalid_argument("CoolingEnsemble: n must be >= 2");
    if (!(mass > 0.0)) throw std::invalid_argument("CoolingEnsemble: mass must be > 0");
    if (x.size() != n || v.size() != n)
        throw std::invalid_argument("CoolingEnsemble: arrays must have length n");
}

double CoolingEnsemble::mean_kinetic_energy() const {
    double s = 0.0;
    for (double vi : v) s += vi * vi;
    return 0.5 * mass * s / static_cast<double>(n);
}

CoolingEnsemble make_cooling_ensemble(std::size_t n, double mass_kg, double v_mean,
                                      double v_spread, std::uint64_t seed, double extent_m) {
    CoolingEnsemble e;
    e.n = n;
    e.mass = mass_kg;
    e.v_mean = v_mean;
    e.v_spread = v_spread;
    e.seed = seed;
    e.x.resize(n);
    e.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(derive_stream(seed, "cooling", i));
        e.x[i] = rng.uniform(-0.5 * extent_m, 0.5 * extent_m);
        e.v[i] = v_mean + rng.uniform(-v_spread, v_spread);
    }
    e.validate();
    return e;
}

std::complex<double> steady_state_field(const std::vector<double>& x, const CavityPump& p) {
    p.validate();
    double s1 = 0.0, s2 = 0.0;
    for (double xi : x) {
        double c = std::cos(p.wavenumber * xi);
        s1 += c;
        s2 += c * c;
    }
    std::complex<double> denom{p.kappa, -(p.detuning - p.U0 * s2)};
    return std::complex<double>{0.0, p.eta * s1} / denom;
}

double order_parameter(const std::vector<double>& x, double wavenumber) {
    if (x.empty()) throw std::invalid_argument("order_parameter: need n >= 1");
    double s1 = 0.0;
    for (double xi : x) s1 += std::cos(wavenumber * xi);
    return std::fabs(s1) / static_cast<double>(x.size());
}

double CoolingTrace::theta_late() const {
    if (order_param.empty()) return 0.0;
    std::size_t n = order_param.size();
    std::size_t first = n - std::max<std::size_t>(1, n / 10);
    double s = 0.0;
    for (std::size_t i = first; i < n; ++i) s += order_param[i];
    return s / static_cast<double>(n - first);
}

namespace {

double suggested_dt(const CoolingEnsemble& e, const CavityPump& p) {
    double v_max = std::fabs(e.v_mean) + e.v_spread;
    double bound = std::min(0.5 / p.kappa, 0.2 / (p.wavenumber * std::max(v_max, 0.1)));
    // organized-lattice frequency estimate from the saturated field
    double well = 2.0 * constants::hbar * p.eta * p.eta * static_cast<double>(e.n) / p.kappa;
    if (well > 0.0) {
        double omega_lat = p.wavenumber * std::sqrt(well / e.mass);
        if (omega_lat > 0.0) bound = std::min(bound, 0.6 / omega_lat);
    }
    return bound;
}

}  // namespace

EvolveResult evolve(const CoolingEnsemble& e, const CavityPump& p, double t_end, double dt,
                    const EvolveOptions& opts) {
    e.validate();
    p.validate();
    if (!(dt > 0.0) || !(t_end > dt))
        throw std::invalid_argument("evolve: need 0 < dt < t_end");
    double dt_max = suggested_dt(e, p);
    if (dt > dt_max)
        throw std::invalid_argument("evolve: dt too coarse for kappa/lattice dynamics; use dt <= " +
                                    std::to_string(dt_max) + " s");

    const std::size_t n = e.n;
    const double k = p.wavenumber;
    const double hbark = constants::hbar * k;
    const double inv_m = 1.0 / e.mass;
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt));
    const std::size_t stride = std::max<std::size_t>(1, opts.record_stride);
    const double decay = std::exp(-p.kappa * dt);

    std::vector<double> x = e.x, v = e.v, F(n, 0.0), sin_kx(n), cos_kx(n);
    std::complex<double> a{0.0, 0.0};

    CoolingTrace trace;
    auto record = [&](double t) {
        double ke = 0.0, s1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ke += v[i] * v[i];
            s1 += std::cos(k * x[i]);
        }
        trace.time.push_back(t);
        trace.mean_ke.push_back(0.5 * e.mass * ke / static_cast<double>(n));
        trace.photon_number.push_back(std::norm(a));
        trace.order_param.push_back(std::fabs(s1) / static_cast<double>(n));
    };
    record(0.0);

    for (std::size_t step = 0; step < n_steps; ++step) {
        bool coupled = opts.interaction_cutoff <= 0.0 ||
                       static_cast<double>(step) * dt < opts.interaction_cutoff;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] += 0.5 * dt * F[i] * inv_m;
            x[i] += dt * v[i];
        }
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = std::sin(k * x[i]);
            double c = std::cos(k * x[i]);
            sin_kx[i] = s;
            cos_kx[i] = c;
            s1 += c;
            s2 += c * c;
        }
        // exact exponential of the linear field equation over dt, sums frozen
        double eta_now = coupled ? p.eta : 0.0;
        double delta_eff = p.detuning - p.U0 * s2;
        std::complex<double> lambda{-p.kappa, delta_eff};
        std::complex<double> a_ss =
            std::complex<double>{0.0, eta_now * s1} / std::complex<double>{p.kappa, -delta_eff};
        std::complex<double> rot{std::cos(delta_eff * dt), std::sin(delta_eff * dt)};
        a = (a - a_ss) * (decay * rot) + a_ss;

        double aa = std::norm(a);
        double re2 = 2.0 * a.real();
        double cU = coupled ? hbark * p.U0 * aa : 0.0;
        double cE = coupled ? hbark * eta_now * re2 : 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            F[i] = cU * 2.0 * sin_kx[i] * cos_kx[i] - cE * sin_kx[i];
            v[i] += 0.5 * dt * F[i] * inv_m;
        }

        if ((step + 1) % stride == 0 || step + 1 == n_steps) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) ||
                !std::isfinite(x[0]) || !std::isfinite(v[0]))
                throw IntegrationError("evolve: non-finite state at t = " +
                                           std::to_string((step + 1) * dt) + " s",
                                       step + 1);
            record(static_cast<double>(step + 1) * dt);
        }
    }

    EvolveResult res;
    res.trace = std::move(trace);
    res.final_state = e;
    res.final_state.x = std::move(x);
    res.final_state.v = std::move(v);
    res.final_field = a;
    return res;
}

ThresholdScan detect_threshold(const std::vector<double>& powers_W,
                               const CoolingEnsemble& ensemble, const PumpFactory& factory,
                               double t_end, double dt, const EvolveOptions& opts) {
    if (powers_W.size() < 3)
        throw std::invalid_argument("detect_threshold: need at least 3 powers");
    ThresholdScan scan;
    scan.powers = powers_W;
    std::sort(scan.powers.begin(), scan.powers.end());

    double ke0 = ensemble.mean_kinetic_energy();
    for (double P : scan.powers) {
        CavityPump pump = factory(P);
        EvolveResult r = evolve(ensemble, pump, t_end, dt, opts);
        scan.theta_late.push_back(r.trace.theta_late());
        scan.ke_ratio.push_back(ke0 > 0.0 ? r.trace.mean_ke.back() / ke0 : 1.0);
    }
    for (std::size_t i = 0; i < scan.powers.size(); ++i) {
        if (scan.theta_late[i] > 0.5) {
            scan.detected_power = scan.powers[i];
            scan.bracket_low = i == 0 ? 0.0 : scan.powers[i - 1];
            scan.bracket_high = scan.powers[i];
            return scan;
        }
    }
    double best_theta = 0.0, best_p = 0.0;
    for (std::size_t i = 0; i < scan.powers.size(); ++i)
        if (scan.theta_late[i] > best_theta) {
            best_theta = scan.theta_late[i];
            best_p = scan.powers[i];
        }
    throw NumericError(
        "detect_threshold: threshold above scan range (best late-time Theta = " +
        std::to_string(best_theta) + " at " + std::to_string(best_p) +
        " W; a longer t_end, higher powers, or a stronger density rescale may be needed)");
}

}  // namespace slowbeam
