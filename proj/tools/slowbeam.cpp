// slowbeam command-line interface: thermal-beam statistics, selector and
// sublimation analysis, optical-manipulation estimators, and the two cavity
// simulations, all driven by one config file and one seed.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "slowbeam/config.hpp"
#include "slowbeam/errors.hpp"
#include "slowbeam/run.hpp"
#include "slowbeam/version.hpp"

namespace {

using slowbeam::RunConfig;

// "200A3", "100um", "15MW", "5ns", ... -> SI (or the documented bare unit).
double parse_quantity(const std::string& text,
                      const std::vector<std::pair<std::string, double>>& suffixes,
                      double bare_scale, const std::string& what) {
    for (const auto& [suf, scale] : suffixes) {
        if (text.size() > suf.size() &&
            text.compare(text.size() - suf.size(), suf.size(), suf) == 0) {
            std::string num = text.substr(0, text.size() - suf.size());
            try {
                std::size_t used = 0;
                double v = std::stod(num, &used);
                if (used != num.size()) break;
                return v * scale;
            } catch (const std::exception&) {
                break;
            }
        }
    }
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v * bare_scale;
    } catch (const std::exception&) {
        throw slowbeam::ConfigError(slowbeam::ConfigError::Kind::Syntax,
                                    "cannot parse " + what + " value '" + text + "'");
    }
}

const std::vector<std::pair<std::string, double>> kAlpha = {{"A3", 1.0}, {"m3", 1e30}};
const std::vector<std::pair<std::string, double>> kLength = {
    {"nm", 1e-3}, {"um", 1.0}, {"mm", 1e3}, {"cm", 1e4}, {"m", 1e6}};  // -> um
const std::vector<std::pair<std::string, double>> kPower = {
    {"kW", 1e3}, {"MW", 1e6}, {"GW", 1e9}, {"mW", 1e-3}, {"W", 1.0}};
const std::vector<std::pair<std::string, double>> kTime = {
    {"fs", 1e-6}, {"ps", 1e-3}, {"ns", 1.0}, {"us", 1e3}, {"ms", 1e6}, {"s", 1e9}};  // -> ns
const std::vector<std::pair<std::string, double>> kWavelength = {
    {"nm", 1.0}, {"um", 1e3}, {"m", 1e9}};  // -> nm
const std::vector<std::pair<std::string, double>> kEnergyKin = {
    {"meV", 1.0}, {"eV", 1e3}, {"J", 6.241509074460763e21}};  // -> meV
const std::vector<std::pair<std::string, double>> kEnergyPulse = {
    {"uJ", 1e-3}, {"mJ", 1.0}, {"J", 1e3}};  // -> mJ

struct Cli {
    std::string config_path;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool quiet = false;
    bool json_summary = false;
};

void print_summary(const slowbeam::run::Summary& s, const Cli& cli,
                   const std::string& command) {
    if (cli.json_summary) {
        nlohmann::json j;
        j["command"] = command;
        j["version"] = slowbeam::kVersion;
        for (const auto& [k, v] : s) j["values"][k] = v;
        std::cout << j.dump(2) << "\n";
        return;
    }
    for (const auto& [k, v] : s) std::printf("%s=%.9g\n", k.c_str(), v);
}

int dispatch(const std::string& command, RunConfig& cfg, const Cli& cli,
             const std::string& input_file, double ekin_J, double speed_mps) {
    namespace run = slowbeam::run;
    std::filesystem::path out = cfg.output.dir;
    run::Summary s;
    if (command == "potential") s = run::potential(cfg, out);
    else if (command == "absorption") s = run::absorption(cfg, out);
    else if (command == "stop-power") s = run::stop_power(cfg, out, ekin_J, speed_mps);
    else if (command == "pulse-slow") s = run::pulse_slow(cfg, out, speed_mps);
    else if (command == "capture") s = run::capture(cfg, out, speed_mps);
    else if (command == "sample-source") s = run::sample_source(cfg, out);
    else if (command == "fit-velocity") s = run::fit_velocity(cfg, out, input_file);
    else if (command == "selector") s = run::selector_filter(cfg, out, input_file);
    else if (command == "synth-ramp") s = run::synth_ramp(cfg, out);
    else if (command == "fit-arrhenius") s = run::fit_arrhenius(cfg, out, input_file);
    else if (command == "focus-sim") s = run::focus_sim(cfg, out);
    else if (command == "cool-sim") s = run::cool_sim(cfg, out);
    else if (command == "threshold-scan") s = run::threshold_scan(cfg, out);
    else return 1;
    print_summary(s, cli, command);
    if (!cli.quiet)
        std::cerr << "outputs and manifest written to " << out.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slow molecular beam simulation and analysis toolkit"};
    app.set_version_flag("--version", std::string("slowbeam ") + slowbeam::kVersion);
    app.require_subcommand(1);

    Cli cli;
    app.add_option("-c,--config", cli.config_path, "config file ([section] key = value)");
    app.add_option("-o,--output-dir", cli.output_dir, "run output directory");
    auto* seed_opt = app.add_option("-s,--seed", cli.seed, "global seed");
    app.add_flag("-q,--quiet", cli.quiet, "suppress diagnostics on stderr");
    app.add_flag("--json-summary", cli.json_summary, "print results as JSON");

    // per-subcommand quantity flags (unit suffixes allowed, e.g. 200A3, 5ns)
    std::string alpha, waist, power, tau, wavelength, ekin, energy, speed, input;
    std::string rotor, fwhm_rel, calibration;
    bool dual = false;

    auto add_optics_flags = [&](CLI::App* sub, bool pulse) {
        sub->add_option("--alpha", alpha, "polarizability (bare = A^3)");
        sub->add_option("--waist", waist, "beam waist (bare = um)");
        if (pulse) {
            sub->add_option("--energy", energy, "pulse energy (bare = mJ)");
            sub->add_option("--tau", tau, "pulse duration (bare = ns)");
        } else {
            sub->add_option("--power", power, "beam power (bare = W)");
        }
        sub->add_option("--wavelength", wavelength, "wavelength (bare = nm)");
    };

    auto* c_potential = app.add_subcommand("potential", "dipole well depth of a Gaussian beam");
    add_optics_flags(c_potential, false);
    auto* c_absorption = app.add_subcommand("absorption", "photons absorbed during a pulse");
    add_optics_flags(c_absorption, true);
    auto* c_stop = app.add_subcommand("stop-power", "power required to stop a molecule");
    add_optics_flags(c_stop, false);
    c_stop->add_option("--ekin", ekin, "kinetic energy (bare = meV)");
    c_stop->add_option("--speed", speed, "forward speed (m/s), overrides --ekin");
    auto* c_pulse = app.add_subcommand("pulse-slow", "velocity change from one light pulse");
    add_optics_flags(c_pulse, true);
    c_pulse->add_option("--speed", speed, "initial speed (m/s)");
    auto* c_capture = app.add_subcommand("capture", "transverse capture speed and transit dose");
    add_optics_flags(c_capture, false);
    c_capture->add_option("--speed", speed, "forward speed for the transit dose (m/s)");

    auto* c_sample = app.add_subcommand("sample-source", "draw source velocities and flux numbers");
    auto* c_fitv = app.add_subcommand("fit-velocity", "fit a velocity histogram CSV");
    c_fitv->add_option("input", input, "histogram CSV (v_mps,count)")->required();
    auto* c_sel = app.add_subcommand("selector", "filter a velocity sample CSV");
    c_sel->add_option("input", input, "samples CSV (v_mps)")->required();
    c_sel->add_option("--rotor-freq", rotor, "rotor frequency (Hz)");
    c_sel->add_option("--fwhm-rel", fwhm_rel, "relative FWHM of the pass band");
    c_sel->add_option("--calibration", calibration, "calibration ((m/s)/Hz)");
    auto* c_ramp = app.add_subcommand("synth-ramp", "synthesize a sublimation temperature ramp");
    auto* c_fita = app.add_subcommand("fit-arrhenius", "fit a ramp CSV for the enthalpy");
    c_fita->add_option("input", input, "ramp CSV (t_s,T_K,rate_cps)")->required();
    auto* c_focus = app.add_subcommand("focus-sim", "transverse collimation ensemble run");
    c_focus->add_flag("--dual", dual, "add the second, orthogonal cavity field");
    auto* c_cool = app.add_subcommand("cool-sim", "collective cavity-cooling run");
    auto* c_scan = app.add_subcommand("threshold-scan", "self-organization threshold scan");
    auto* c_report = app.add_subcommand("report", "summarize a finished run directory");
    std::string report_dir;
    c_report->add_option("run_dir", report_dir, "run directory with a manifest")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        RunConfig cfg;
        if (!cli.config_path.empty()) cfg = slowbeam::load_config(cli.config_path);
        if (seed_opt->count() > 0) cli.seed_set = true;
        if (cli.seed_set) cfg.seed = cli.seed;
        if (const char* env = std::getenv("SLOWBEAM_OUTPUT_DIR")) cfg.output.dir = env;
        if (!cli.output_dir.empty()) cfg.output.dir = cli.output_dir;
        if (cli.quiet) cfg.output.quiet = true;
        cli.quiet = cfg.output.quiet;
        cli.json_summary = cli.json_summary || cfg.output.json_summary;

        if (!alpha.empty())
            cfg.molecule.alpha_A3 = parse_quantity(alpha, kAlpha, 1.0, "alpha");
        if (!waist.empty())
            cfg.optics.waist_um = parse_quantity(waist, kLength, 1.0, "waist");
        if (!power.empty()) cfg.optics.power_W = parse_quantity(power, kPower, 1.0, "power");
        if (!tau.empty())
            cfg.optics.pulse_duration_ns = parse_quantity(tau, kTime, 1.0, "tau");
        if (!wavelength.empty())
            cfg.optics.wavelength_nm =
                parse_quantity(wavelength, kWavelength, 1.0, "wavelength");
        if (!energy.empty())
            cfg.optics.pulse_energy_mJ = parse_quantity(energy, kEnergyPulse, 1.0, "energy");
        if (!rotor.empty())
            cfg.selector.rotor_freq_hz = parse_quantity(rotor, {}, 1.0, "rotor-freq");
        if (!fwhm_rel.empty())
            cfg.selector.fwhm_rel = parse_quantity(fwhm_rel, {}, 1.0, "fwhm-rel");
        if (!calibration.empty())
            cfg.selector.calibration_mps_per_hz =
                parse_quantity(calibration, {}, 1.0, "calibration");
        if (dual) cfg.focus.dual = true;

        double ekin_J = 0.0;
        if (!ekin.empty())
            ekin_J = parse_quantity(ekin, kEnergyKin, 1.0, "ekin") * 1e-3 *
                     slowbeam::constants::q_e;
        else
            ekin_J = 50e-3 * slowbeam::constants::q_e;  // thermal-beam scale default
        double speed_mps = speed.empty() ? 0.0 : parse_quantity(speed, {}, 1.0, "speed");
        if (speed_mps == 0.0 &&
            (c_pulse->parsed() || c_capture->parsed()))
            speed_mps = 50.0;

        cfg.validate();

        if (c_report->parsed()) {
            std::string text;
            int rc = slowbeam::run::report(report_dir, text);
            std::cout << text;
            return rc;
        }
        std::string command;
        for (auto* sub : {c_potential, c_absorption, c_stop, c_pulse, c_capture, c_sample,
                          c_fitv, c_sel, c_ramp, c_fita, c_focus, c_cool, c_scan})
            if (sub->parsed()) command = sub->get_name();
        return dispatch(command, cfg, cli, input, ekin_J, speed_mps);
    } catch (const slowbeam::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return 1;
    } catch (const slowbeam::NumericError& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
