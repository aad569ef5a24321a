#include "slowbeam/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "slowbeam/csv.hpp"
#include "slowbeam/errors.hpp"
#include "slowbeam/rng.hpp"
#include "slowbeam/physics.hpp"
#include "slowbeam/version.hpp"

namespace slowbeam::run {

namespace fs = std::filesystem;

namespace {

void prepare(const RunConfig& cfg, const fs::path& out) {
    cfg.validate();
    fs::create_directories(out);
    write_manifest(out, cfg);
}

GaussianBeam optics_beam(const RunConfig& cfg) {
    GaussianBeam b;
    b.power = cfg.optics.power_W;
    b.waist = cfg.optics.waist_um * 1e-6;
    b.wavelength = cfg.optics.wavelength_nm * 1e-9;
    return b;
}

SeriesTable histogram_table(const VelocityHistogram& h, const std::string& name) {
    SeriesTable t;
    t.name = name;
    t.columns = {"v_mps", "count"};
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        t.rows.push_back({0.5 * (h.bin_edges[i] + h.bin_edges[i + 1]), h.counts[i]});
    return t;
}

VelocityHistogram table_to_histogram(const SeriesTable& t) {
    expect_columns(t, {"v_mps", "count"});
    if (t.rows.size() < 2) throw std::invalid_argument("histogram table needs >= 2 rows");
    VelocityHistogram h;
    double w = t.rows[1][0] - t.rows[0][0];
    if (!(w > 0.0)) throw std::invalid_argument("histogram centers must increase");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        h.bin_edges.push_back(t.rows[i][0] - 0.5 * w);
        h.counts.push_back(t.rows[i][1]);
    }
    h.bin_edges.push_back(t.rows.back()[0] + 0.5 * w);
    h.validate();
    return h;
}

}  // namespace

Summary potential(const RunConfig& cfg, const fs::path& out) {
    prepare(cfg, out);
    Molecule m = cfg.resolve_molecule();
    double U = dipole_potential_depth(m.alpha_vol, cfg.optics.power_W,
                                      cfg.optics.waist_um * 1e-6);
    return {{"U_J", U}, {"U_eV", units::J_to_eV(U)}, {"U_neV_per_W",
             cfg.optics.power_W > 0.0 ? units::J_to_eV(U) / cfg.optics.power_W * 1e9 : 0.0}};
}

Summary absorption(const RunConfig& cfg, const fs::path& out) {
    prepare(cfg, out);
    Molecule m = cfg.resolve_molecule();
    LaserPulse pulse;
    pulse.energy = cfg.optics.pulse_energy_mJ * 1e-3;
    pulse.duration = cfg.optics.pulse_duration_ns * 1e-9;
    pulse.beam = optics_beam(cfg);
    pulse.beam.power = pulse.peak_power();
    pulse.validate();
    double sigma = m.sigma_abs * cfg.optics.sigma_scale;
    double n = photons_absorbed(pulse.beam.power, sigma, pulse.duration, pulse.beam.waist,
                                pulse.beam.wavelength);
    return {{"P_W", pulse.beam.power}, {"N_abs", n}};
}

Summary stop_power(const RunConfig& cfg, const fs::path& out, double e_kin_J,
                   double speed_mps) {
    prepare(cfg, out);
    Molecule m = cfg.resolve_molecule();
    double e = speed_mps > 0.0 ? kinetic_energy(m.mass, speed_mps) : e_kin_J;
    double p = stopping_power(e, m.alpha_vol, cfg.optics.waist_um * 1e-6);
    return {{"E_kin_J", e}, {"E_kin_meV", units::J_to_meV(e)}, {"P_W", p}};
}

Summary pulse_slow(const RunConfig& cfg, const fs::path& out, double v_mps) {
    prepare(cfg, out);
    Molecule m = cfg.resolve_molecule();
    double peak = cfg.optics.pulse_energy_mJ * 1e-3 / (cfg.optics.pulse_duration_ns * 1e-9);
    double U = dipole_potential_depth(m.alpha_vol, peak, cfg.optics.waist_um * 1e-6);
    double dv = pulsed_deceleration(v_mps, U, m.mass);
    double sigma = m.sigma_abs * cfg.optics.sigma_scale;
    double n = photons_absorbed(peak, sigma, cfg.optics.pulse_duration_ns * 1e-9,
                                cfg.optics.waist_um * 1e-6, cfg.optics.wavelength_nm * 1e-9);
    return {{"P_W", peak},
            {"U_meV", units::J_to_meV(U)},
            {"delta_v_mps", dv},
            {"N_abs", n}};
}

Summary capture(const RunConfig& cfg, const fs::path& out, double speed_mps) {
    prepare(cfg, out);
    Molecule m = cfg.resolve_molecule();
    double U = dipole_potential_depth(m.alpha_vol, cfg.optics.power_W,
                                      cfg.optics.waist_um * 1e-6);
    double vc = transverse_capture_speed(U, m.mass);
    double sigma = m.sigma_abs * cfg.optics.sigma_scale;
    double dose = transit_photon_dose(cfg.optics.power_W, cfg.optics.waist_um * 1e-6,
                                      speed_mps, sigma, cfg.optics.wavelength_nm * 1e-9);
    return {{"U_meV", units::J_to_meV(U)}, {"v_capture_mps", vc}, {"transit_photons", dose}};
}

Summary sample_source(const RunConfig& cfg, const fs::path& out) {
    prepare(cfg, out);
    SourceParams p = cfg.source_params();
    auto samples = sample_velocities(cfg.source.n_samples, p, derive_stream(cfg.seed, "run-source"));

    SeriesTable st;
    st.name = "samples";
    st.columns = {"v_mps"};
    for (double v : samples) st.rows.push_back({v});
    write_csv(out / "samples.csv", st);

    auto hist = make_histogram(samples, cfg.source.hist_min_mps, cfg.source.hist_max_mps,
                               cfg.source.hist_bins);
    write_csv(out / "histogram.csv", histogram_table(hist, "histogram"));

    FloatingMB dist(p);
    FluxDensity fd = beam_flux_density(cfg.flux_report(), cfg.source.density_query_mm * 1e-3);
    double density_cm3 = cfg.source.density_override_cm3 > 0.0
                             ? cfg.source.density_override_cm3
                             : fd.number_density * 1e-6;
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(samples.size());
    return {{"n_samples", static_cast<double>(samples.size())},
            {"sample_mean_mps", mean},
            {"pdf_mode_mps", dist.mode()},
            {"pdf_mean_mps", dist.mean()},
            {"flux_per_cm2_s", fd.flux * 1e-4},
            {"density_per_cm3", density_cm3}};
}

Summary fit_velocity(const RunConfig& cfg, const fs::path& out,
                     const fs::path& histogram_csv) {
    prepare(cfg, out);
    auto hist = table_to_histogram(read_csv(histogram_csv));
    Molecule m = cfg.resolve_molecule();
    FloatingMbFit fit = fit_floating_mb(hist, m.mass);

    SeriesTable t;
    t.name = "fit_velocity";
    t.columns = {"drift_mps", "drift_err", "temperature_K", "temperature_err", "amplitude",
                 "amplitude_err", "mode_mps", "chi2"};
    t.rows.push_back({fit.drift, fit.stderr_drift, fit.temperature, fit.stderr_temperature,
                      fit.amplitude, fit.stderr_amplitude, fit.mode, fit.chi2});
    write_csv(out / "fit_velocity.csv", t);

    std::ofstream txt(out / "fit_velocity.txt");
    txt << "floating Maxwell-Boltzmann fit (" << m.name << ", "
        << units::kg_to_amu(m.mass) << " amu)\n"
        << "  drift       " << fit.drift << " +- " << fit.stderr_drift << " m/s\n"
        << "  temperature " << fit.temperature << " +- " << fit.stderr_temperature << " K\n"
        << "  density mode " << fit.mode << " m/s (v^2 weighting shifts it above the drift)\n";

    return {{"drift_mps", fit.drift},
            {"drift_err_mps", fit.stderr_drift},
            {"temperature_K", fit.temperature},
            {"temperature_err_K", fit.stderr_temperature},
            {"mode_mps", fit.mode}};
}

Summary selector_filter(const RunConfig& cfg, const fs::path& out,
                        const fs::path& samples_csv) {
    prepare(cfg, out);
    SeriesTable t = read_csv(samples_csv);
    expect_columns(t, {"v_mps"});
    std::vector<double> samples;
    samples.reserve(t.rows.size());
    for (const auto& r : t.rows) samples.push_back(r[0]);

    SelectorParams p = cfg.selector_params();
    auto kept = apply_selector(samples, p, derive_stream(cfg.seed, "run-selector"));

    SeriesTable ot;
    ot.name = "selected";
    ot.columns = {"v_mps"};
    for (double v : kept) ot.rows.push_back({v});
    write_csv(out / "selected.csv", ot);

    return {{"setpoint_mps", selector_setpoint(p)},
            {"n_in", static_cast<double>(samples.size())},
            {"n_out", static_cast<double>(kept.size())},
            {"kept_fraction",
             samples.empty() ? 0.0
                             : static_cast<double>(kept.size()) /
                                   static_cast<double>(samples.size())}};
}

Summary synth_ramp(const RunConfig& cfg, const fs::path& out) {
    prepare(cfg, out);
    const auto& s = cfg.sublimation;
    double rate = s.heating_rate_K_per_min / 60.0;
    double duration = (s.T_end_K - s.T0_K) / rate;
    RampSeries ramp = synthesize_ramp(
        s.T0_K, rate, duration, s.delta_H_kJmol * 1e3, s.prefactor_cps, s.noise_rel,
        derive_stream(cfg.seed, "run-ramp"), s.dt_s,
        s.noise_model == "poisson" ? RampNoise::Poisson : RampNoise::Gaussian);

    SeriesTable t;
    t.name = "ramp";
    t.columns = {"t_s", "T_K", "rate_cps"};
    for (std::size_t i = 0; i < ramp.time.size(); ++i)
        t.rows.push_back({ramp.time[i], ramp.temperature[i], ramp.count_rate[i]});
    write_csv(out / "ramp.csv", t);

    return {{"n_points", static_cast<double>(ramp.time.size())},
            {"T_first_K", ramp.temperature.front()},
            {"T_last_K", ramp.temperature.back()},
            {"rate_first_cps", ramp.count_rate.front()},
            {"rate_last_cps", ramp.count_rate.back()}};
}

Summary fit_arrhenius(const RunConfig& cfg, const fs::path& out, const fs::path& ramp_csv) {
    prepare(cfg, out);
    SeriesTable t = read_csv(ramp_csv);
    expect_columns(t, {"t_s", "T_K", "rate_cps"});
    RampSeries ramp;
    for (const auto& r : t.rows) {
        ramp.time.push_back(r[0]);
        ramp.temperature.push_back(r[1]);
        ramp.count_rate.push_back(r[2]);
    }
    EnthalpyResult res = fit_enthalpy(ramp);

    Molecule m = cfg.resolve_molecule();
    SeriesTable rt;
    rt.name = "arrhenius_fit";
    rt.label_column = "molecule";
    rt.labels = {m.name};
    rt.columns = {"mass_amu", "dH_kJmol", "err_kJmol"};
    rt.rows.push_back({units::kg_to_amu(m.mass), res.delta_H * 1e-3, res.stderr_delta_H * 1e-3});
    write_csv(out / "arrhenius_fit.csv", rt);

    return {{"dH_kJmol", res.delta_H * 1e-3},
            {"err_kJmol", res.stderr_delta_H * 1e-3},
            {"ln_prefactor", res.prefactor_ln},
            {"points_used", static_cast<double>(res.points_used)}};
}

Summary focus_sim(const RunConfig& cfg, const fs::path& out) {
    prepare(cfg, out);
    Molecule mol = cfg.focus_molecule();
    EnsembleSpec spec = cfg.focus_ensemble();
    DetectorSpec det = cfg.focus_detector();
    SimOptions opts = cfg.focus_options();

    auto beams0 = cfg.focus_beams(0.0);
    EnsembleResult baseline = simulate_ensemble(spec, beams0, mol, det, opts);

    SeriesTable summary;
    summary.name = "summary";
    summary.columns = {"power_W", "hit_fraction", "gain", "dose_p50", "dose_p90", "dose_max"};
    summary.rows.push_back(
        {0.0, baseline.hit_fraction, 1.0, baseline.dose_p50, baseline.dose_p90,
         baseline.dose_max});

    SeriesTable finals;
    finals.name = "final_velocities";
    finals.columns = {"power_W", "vx_mps", "vy_mps", "vz_mps"};
    for (const auto& st : baseline.finals)
        finals.rows.push_back({0.0, st.velocity.x, st.velocity.y, st.velocity.z});

    Summary s;
    bool wrote_traj = false;
    for (std::size_t pi = 0; pi < cfg.focus.powers_W.size(); ++pi) {
        double P = cfg.focus.powers_W[pi];
        auto beams = cfg.focus_beams(P);
        EnsembleResult r = simulate_ensemble(spec, beams, mol, det, opts);
        double gain = forward_gain(r, baseline);
        summary.rows.push_back(
            {P, r.hit_fraction, gain, r.dose_p50, r.dose_p90, r.dose_max});
        for (const auto& st : r.finals)
            finals.rows.push_back({P, st.velocity.x, st.velocity.y, st.velocity.z});
        if (!wrote_traj && !r.recorded.empty()) {
            SeriesTable traj;
            traj.name = "trajectories";
            traj.columns = {"id", "t", "x", "y", "z", "vx", "vy", "vz"};
            for (std::size_t id = 0; id < r.recorded.size(); ++id)
                for (std::size_t k = 0; k < r.recorded[id].time.size(); ++k) {
                    const auto& st = r.recorded[id].states[k];
                    traj.rows.push_back({static_cast<double>(id), r.recorded[id].time[k],
                                         st.position.x, st.position.y, st.position.z,
                                         st.velocity.x, st.velocity.y, st.velocity.z});
                }
            write_csv(out / "trajectories.csv", traj);
            wrote_traj = true;
        }
        s.emplace_back("gain_P" + std::to_string(pi + 1), gain);
    }
    write_csv(out / "summary.csv", summary);
    write_csv(out / "final_velocities.csv", finals);
    s.emplace_back("baseline_fraction", baseline.hit_fraction);
    s.emplace_back("dual", cfg.focus.dual ? 1.0 : 0.0);
    return s;
}

namespace {

SeriesTable velocity_histogram_table(const std::vector<double>& v, const std::string& name,
                                     double lo, double hi, std::size_t bins) {
    auto hist = make_histogram(v, lo, hi, bins);
    SeriesTable t;
    t.name = name;
    t.columns = {"v_mps", "count"};
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
        t.rows.push_back({0.5 * (hist.bin_edges[i] + hist.bin_edges[i + 1]), hist.counts[i]});
    return t;
}

}  // namespace

Summary cool_sim(const RunConfig& cfg, const fs::path& out) {
    prepare(cfg, out);
    CoolingEnsemble ens = cfg.cooling_ensemble();
    double lo = -(cfg.cooling.v_spread_mps + 5.0);
    double hi = cfg.cooling.v_mean_mps + cfg.cooling.v_spread_mps + 5.0;
    write_csv(out / "initial_velocities.csv",
              velocity_histogram_table(ens.v, "initial_velocities", lo, hi, 200));

    SeriesTable summary;
    summary.name = "summary";
    summary.columns = {"power_W", "ke_initial_J", "ke_final_J", "ke_ratio", "theta_late",
                       "photon_final"};

    Summary s;
    double ke0 = ens.mean_kinetic_energy();
    for (std::size_t pi = 0; pi < cfg.cooling.powers_W.size(); ++pi) {
        double P = cfg.cooling.powers_W[pi];
        CavityPump pump = cfg.cooling_pump(P);
        EvolveResult r = evolve(ens, pump, cfg.cooling_t_end(), cfg.cooling_dt(),
                                cfg.cooling_evolve_options());

        SeriesTable trace;
        trace.name = "cooling_trace";
        trace.columns = {"t_s", "KE_J", "photon_n", "theta"};
        for (std::size_t k = 0; k < r.trace.time.size(); ++k)
            trace.rows.push_back({r.trace.time[k], r.trace.mean_ke[k],
                                  r.trace.photon_number[k], r.trace.order_param[k]});
        std::string suffix = "_" + std::to_string(pi + 1);
        write_csv(out / ("cooling_trace" + suffix + ".csv"), trace);
        write_csv(out / ("final_velocities" + suffix + ".csv"),
                  velocity_histogram_table(r.final_state.v, "final_velocities", lo, hi, 200));

        double ratio = r.trace.mean_ke.back() / ke0;
        summary.rows.push_back({P, ke0, r.trace.mean_ke.back(), ratio, r.trace.theta_late(),
                                r.trace.photon_number.back()});
        s.emplace_back("ke_ratio_P" + std::to_string(pi + 1), ratio);
        s.emplace_back("theta_late_P" + std::to_string(pi + 1), r.trace.theta_late());
    }
    write_csv(out / "summary.csv", summary);
    return s;
}

Summary threshold_scan(const RunConfig& cfg, const fs::path& out) {
    prepare(cfg, out);
    CoolingEnsemble ens = cfg.cooling_ensemble();
    ThresholdScan scan = detect_threshold(
        cfg.cooling.powers_W, ens, [&](double P) { return cfg.cooling_pump(P); },
        cfg.cooling_t_end(), cfg.cooling_dt(), cfg.cooling_evolve_options());

    SeriesTable t;
    t.name = "threshold";
    t.columns = {"power_W", "theta_late", "ke_ratio"};
    for (std::size_t i = 0; i < scan.powers.size(); ++i)
        t.rows.push_back({scan.powers[i], scan.theta_late[i], scan.ke_ratio[i]});
    write_csv(out / "threshold.csv", t);

    return {{"P_T_W", scan.detected_power},
            {"bracket_low_W", scan.bracket_low},
            {"bracket_high_W", scan.bracket_high}};
}

namespace {

struct Verdict {
    std::string line;
    bool pass;
};

void check_table(const fs::path& p, std::vector<Verdict>& verdicts) {
    try {
        SeriesTable t = read_csv(p);
        t.validate();
        verdicts.push_back({p.filename().string() + ": " + std::to_string(t.n_rows()) +
                                " rows, all finite",
                            true});
    } catch (const std::exception& ex) {
        verdicts.push_back({p.filename().string() + ": INVALID (" + ex.what() + ")", false});
    }
}

}  // namespace

int report(const fs::path& run_dir, std::string& text_out) {
    if (!fs::exists(run_dir / "manifest"))
        throw ConfigError(ConfigError::Kind::MissingFile,
                          "no manifest in " + run_dir.string());
    RunConfig cfg = load_config(run_dir / "manifest");

    std::vector<Verdict> verdicts;
    std::ostringstream md;
    md << "# slowbeam run report\n\n";
    md << "run directory: " << run_dir.string() << "\n";
    md << "tool version: " << kVersion << "\n\n";

    for (const auto& entry : fs::directory_iterator(run_dir)) {
        if (entry.path().extension() == ".csv") check_table(entry.path(), verdicts);
    }

    // focus: forward-gain bands (collimated flux roughly doubles per
    // transverse direction at the collimation power)
    if (fs::exists(run_dir / "summary.csv") && fs::exists(run_dir / "trajectories.csv")) {
        try {
            SeriesTable t = read_csv(run_dir / "summary.csv");
            expect_columns(t, {"power_W", "hit_fraction", "gain", "dose_p50", "dose_p90",
                               "dose_max"});
            double lo = cfg.focus.dual ? 3.0 : 1.5;
            double hi = cfg.focus.dual ? 5.0 : 3.0;
            double best_gain = 0.0, best_p = 0.0;
            for (const auto& r : t.rows) {
                if (r[0] <= 0.0) continue;
                std::ostringstream line;
                line << "beam transport gain at " << r[0] << " W: " << r[2];
                verdicts.push_back({line.str(), true});
                if (r[2] > best_gain) { best_gain = r[2]; best_p = r[0]; }
            }
            if (best_p > 0.0) {
                std::ostringstream line;
                line << "peak gain " << best_gain << " at " << best_p << " W (band [" << lo
                     << ", " << hi << "] at the collimation power)";
                verdicts.push_back({line.str(), best_gain >= lo && best_gain <= hi});
            }
        } catch (const std::exception& ex) {
            verdicts.push_back({std::string("focus summary unreadable: ") + ex.what(), false});
        }
    }

    // cooling: flat below threshold, cooling above, on the configured scan
    if (fs::exists(run_dir / "cooling_trace_1.csv") && fs::exists(run_dir / "summary.csv")) {
        try {
            SeriesTable t = read_csv(run_dir / "summary.csv");
            expect_columns(t, {"power_W", "ke_initial_J", "ke_final_J", "ke_ratio",
                               "theta_late", "photon_final"});
            if (t.rows.size() >= 2) {
                const auto& low = t.rows.front();
                const auto& high = t.rows.back();
                std::ostringstream l1, l2;
                l1 << "below-threshold run (" << low[0] << " W): KE ratio " << low[3]
                   << " (want within 10% of 1)";
                verdicts.push_back({l1.str(), std::fabs(low[3] - 1.0) < 0.10});
                l2 << "above-threshold run (" << high[0] << " W): KE ratio " << high[3]
                   << " (want < 0.8)";
                verdicts.push_back({l2.str(), high[3] < 0.8});
            }
        } catch (const std::exception& ex) {
            verdicts.push_back({std::string("cooling summary unreadable: ") + ex.what(),
                                false});
        }
    }

    // arrhenius: recovery of the generating enthalpy within 3 sigma + 1%
    if (fs::exists(run_dir / "arrhenius_fit.csv")) {
        try {
            SeriesTable t = read_csv(run_dir / "arrhenius_fit.csv");
            const auto& r = t.rows.at(0);
            double truth = cfg.sublimation.delta_H_kJmol;
            double tol = 3.0 * r[2] + 0.01 * truth;
            std::ostringstream line;
            line << "sublimation enthalpy " << r[1] << " +- " << r[2]
                 << " kJ/mol vs configured " << truth;
            verdicts.push_back({line.str(), std::fabs(r[1] - truth) <= tol});
        } catch (const std::exception& ex) {
            verdicts.push_back({std::string("arrhenius fit unreadable: ") + ex.what(), false});
        }
    }

    // velocity fit: recovery of the configured source parameters
    if (fs::exists(run_dir / "fit_velocity.csv")) {
        try {
            SeriesTable t = read_csv(run_dir / "fit_velocity.csv");
            const auto& r = t.rows.at(0);
            std::ostringstream line;
            line << "velocity fit drift " << r[0] << " m/s, T " << r[2]
                 << " K vs configured (" << cfg.source.drift_mps << ", "
                 << cfg.source.temperature_K << ")";
            bool ok = std::fabs(r[0] - cfg.source.drift_mps) <= 1.0 &&
                      std::fabs(r[2] - cfg.source.temperature_K) <= 10.0;
            verdicts.push_back({line.str(), ok});
        } catch (const std::exception& ex) {
            verdicts.push_back({std::string("velocity fit unreadable: ") + ex.what(), false});
        }
    }

    bool all_pass = true;
    md << "## checks\n\n";
    for (const auto& v : verdicts) {
        md << (v.pass ? "- PASS: " : "- FAIL: ") << v.line << "\n";
        if (!v.pass) all_pass = false;
    }
    if (verdicts.empty()) md << "(no recognized outputs)\n";

    text_out = md.str();
    std::ofstream f(run_dir / "report.md");
    f << text_out;
    return all_pass ? 0 : 2;
}

}  // namespace slowbeam::run
