#include "slowbeam/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "slowbeam/csv.hpp"
#include "slowbeam/errors.hpp"
#include "slowbeam/rng.hpp"
#include "slowbeam/version.hpp"

namespace slowbeam {

namespace {

struct KeySpec {
    std::string section;  // "" for top level
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;  // throws std::invalid_argument
};

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size()) throw std::invalid_argument("trailing characters in '" + s + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& s) {
    double v = parse_double(s);
    if (v < 0.0 || v != std::floor(v) || v > 1.8e19)
        throw std::invalid_argument("'" + s + "' is not a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw std::invalid_argument("'" + s + "' is not a boolean");
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) out.push_back(parse_double(cur));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_full(v[i]);
    return s;
}

#define SB_DOUBLE(sec, name, field)                                              \
    KeySpec{sec, name, [](const RunConfig& c) { return format_full(c.field); },  \
            [](RunConfig& c, const std::string& s) { c.field = parse_double(s); }}
#define SB_UINT(sec, name, field)                                                   \
    KeySpec{sec, name, [](const RunConfig& c) { return std::to_string(c.field); }, \
            [](RunConfig& c, const std::string& s) { c.field = parse_uint(s); }}
#define SB_BOOL(sec, name, field)                                                          \
    KeySpec{sec, name, [](const RunConfig& c) { return c.field ? "true" : "false"; },      \
            [](RunConfig& c, const std::string& s) { c.field = parse_bool(s); }}
#define SB_STRING(sec, name, field)                                   \
    KeySpec{sec, name, [](const RunConfig& c) { return c.field; },    \
            [](RunConfig& c, const std::string& s) { c.field = s; }}
#define SB_LIST(sec, name, field)                                              \
    KeySpec{sec, name, [](const RunConfig& c) { return fmt_list(c.field); },   \
            [](RunConfig& c, const std::string& s) { c.field = parse_list(s); }}

const std::vector<KeySpec>& schema() {
    static const std::vector<KeySpec> keys = {
        SB_UINT("", "seed", seed),

        SB_STRING("molecule", "name", molecule.name),
        SB_DOUBLE("molecule", "mass_amu", molecule.mass_amu),
        SB_DOUBLE("molecule", "alpha_A3", molecule.alpha_A3),
        SB_DOUBLE("molecule", "sigma_abs_m2", molecule.sigma_abs_m2),
        SB_DOUBLE("molecule", "sigma_ion_m2", molecule.sigma_ion_m2),
        SB_DOUBLE("molecule", "dipole_D", molecule.dipole_D),

        SB_DOUBLE("source", "temperature_K", source.temperature_K),
        SB_DOUBLE("source", "drift_mps", source.drift_mps),
        SB_UINT("source", "n_samples", source.n_samples),
        SB_DOUBLE("source", "hist_min_mps", source.hist_min_mps),
        SB_DOUBLE("source", "hist_max_mps", source.hist_max_mps),
        SB_UINT("source", "hist_bins", source.hist_bins),
        SB_DOUBLE("source", "count_rate_cps", source.count_rate_cps),
        SB_DOUBLE("source", "detection_efficiency", source.detection_efficiency),
        SB_DOUBLE("source", "detector_area_cm2", source.detector_area_cm2),
        SB_DOUBLE("source", "distance_detector_m", source.distance_detector_m),
        SB_DOUBLE("source", "mean_speed_mps", source.mean_speed_mps),
        SB_DOUBLE("source", "density_query_mm", source.density_query_mm),
        SB_DOUBLE("source", "density_override_cm3", source.density_override_cm3),

        SB_DOUBLE("selector", "calibration_mps_per_hz", selector.calibration_mps_per_hz),
        SB_DOUBLE("selector", "fwhm_rel", selector.fwhm_rel),
        SB_DOUBLE("selector", "rotor_freq_hz", selector.rotor_freq_hz),
        SB_DOUBLE("selector", "freq_stability", selector.freq_stability),
        SB_BOOL("selector", "jitter", selector.jitter),
        SB_STRING("selector", "shape", selector.shape),

        SB_DOUBLE("sublimation", "T0_K", sublimation.T0_K),
        SB_DOUBLE("sublimation", "T_end_K", sublimation.T_end_K),
        SB_DOUBLE("sublimation", "heating_rate_K_per_min", sublimation.heating_rate_K_per_min),
        SB_DOUBLE("sublimation", "dt_s", sublimation.dt_s),
        SB_DOUBLE("sublimation", "delta_H_kJmol", sublimation.delta_H_kJmol),
        SB_DOUBLE("sublimation", "prefactor_cps", sublimation.prefactor_cps),
        SB_DOUBLE("sublimation", "noise_rel", sublimation.noise_rel),
        SB_STRING("sublimation", "noise_model", sublimation.noise_model),

        SB_DOUBLE("optics", "power_W", optics.power_W),
        SB_DOUBLE("optics", "waist_um", optics.waist_um),
        SB_DOUBLE("optics", "wavelength_nm", optics.wavelength_nm),
        SB_DOUBLE("optics", "pulse_energy_mJ", optics.pulse_energy_mJ),
        SB_DOUBLE("optics", "pulse_duration_ns", optics.pulse_duration_ns),
        SB_DOUBLE("optics", "sigma_scale", optics.sigma_scale),

        SB_LIST("focus", "powers_W", focus.powers_W),
        SB_DOUBLE("focus", "waist_um", focus.waist_um),
        SB_DOUBLE("focus", "wavelength_nm", focus.wavelength_nm),
        SB_DOUBLE("focus", "source_side_um", focus.source_side_um),
        SB_DOUBLE("focus", "source_distance_mm", focus.source_distance_mm),
        SB_DOUBLE("focus", "v_mean_mps", focus.v_mean_mps),
        SB_DOUBLE("focus", "v_spread_mps", focus.v_spread_mps),
        SB_UINT("focus", "n_particles", focus.n_particles),
        SB_DOUBLE("focus", "dt_us", focus.dt_us),
        SB_DOUBLE("focus", "detector_distance_m", focus.detector_distance_m),
        SB_DOUBLE("focus", "detector_half_width_mm", focus.detector_half_width_mm),
        SB_BOOL("focus", "dual", focus.dual),
        SB_BOOL("focus", "gravity", focus.gravity),
        SB_DOUBLE("focus", "field_cutoff_mm", focus.field_cutoff_mm),
        SB_UINT("focus", "traj_particles", focus.traj_particles),
        SB_UINT("focus", "traj_stride", focus.traj_stride),

        SB_UINT("cooling", "n", cooling.n),
        SB_DOUBLE("cooling", "mass_amu", cooling.mass_amu),
        SB_DOUBLE("cooling", "v_mean_mps", cooling.v_mean_mps),
        SB_DOUBLE("cooling", "v_spread_mps", cooling.v_spread_mps),
        SB_DOUBLE("cooling", "kappa_rad_per_s", cooling.kappa_rad_per_s),
        SB_DOUBLE("cooling", "detuning_rad_per_s", cooling.detuning_rad_per_s),
        SB_DOUBLE("cooling", "wavelength_nm", cooling.wavelength_nm),
        SB_DOUBLE("cooling", "waist_um", cooling.waist_um),
        SB_DOUBLE("cooling", "cavity_length_cm", cooling.cavity_length_cm),
        SB_LIST("cooling", "powers_W", cooling.powers_W),
        SB_DOUBLE("cooling", "rescale", cooling.rescale),
        SB_DOUBLE("cooling", "eta_cal", cooling.eta_cal),
        SB_DOUBLE("cooling", "P_ref_W", cooling.P_ref_W),
        SB_DOUBLE("cooling", "t_end_us", cooling.t_end_us),
        SB_DOUBLE("cooling", "dt_ns", cooling.dt_ns),
        SB_UINT("cooling", "record_stride", cooling.record_stride),
        SB_DOUBLE("cooling", "extent_cm", cooling.extent_cm),
        SB_DOUBLE("cooling", "interaction_cutoff_us", cooling.interaction_cutoff_us),

        SB_STRING("output", "dir", output.dir),
        SB_BOOL("output", "quiet", output.quiet),
        SB_BOOL("output", "json_summary", output.json_summary),
    };
    return keys;
}

#undef SB_DOUBLE
#undef SB_UINT
#undef SB_BOOL
#undef SB_STRING
#undef SB_LIST

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(ConfigError::Kind::Syntax,
                                  origin + ":" + std::to_string(line_no) +
                                      ": malformed section header '" + t + "'",
                                  line_no);
            section = trim(t.substr(1, t.size() - 2));
            bool known = false;
            for (const auto& k : schema())
                if (k.section == section) { known = true; break; }
            if (!known)
                throw ConfigError(ConfigError::Kind::UnknownKey,
                                  origin + ":" + std::to_string(line_no) +
                                      ": unknown section '" + section + "'",
                                  line_no);
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(ConfigError::Kind::Syntax,
                              origin + ":" + std::to_string(line_no) +
                                  ": expected 'key = value', got '" + t + "'",
                              line_no);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        const KeySpec* spec = nullptr;
        for (const auto& k : schema())
            if (k.section == section && k.key == key) { spec = &k; break; }
        if (!spec)
            throw ConfigError(ConfigError::Kind::UnknownKey,
                              origin + ":" + std::to_string(line_no) + ": unknown key '" +
                                  (section.empty() ? key : section + "." + key) + "'",
                              line_no);
        try {
            spec->set(cfg, value);
        } catch (const std::exception& ex) {
            throw ConfigError(ConfigError::Kind::Syntax,
                              origin + ":" + std::to_string(line_no) + ": bad value for '" +
                                  key + "': " + ex.what(),
                              line_no);
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(ConfigError::Kind::MissingFile,
                          "config file not found: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "# slowbeam " << kVersion << " run manifest\n";
    std::string last_section = "\n";  // never equal to a real section name
    for (const auto& k : schema()) {
        if (k.section != last_section) {
            if (!k.section.empty()) out << "\n[" << k.section << "]\n";
            last_section = k.section;
        }
        out << k.key << " = " << k.get(cfg) << "\n";
    }
    return out.str();
}

void write_manifest(const std::filesystem::path& run_dir, const RunConfig& cfg) {
    std::filesystem::create_directories(run_dir);
    std::ofstream out(run_dir / "manifest");
    if (!out) throw std::runtime_error("cannot write manifest in " + run_dir.string());
    out << serialize_config(cfg);
}

namespace {

[[noreturn]] void invariant(const std::string& msg) {
    throw ConfigError(ConfigError::Kind::Invariant, "config invariant: " + msg);
}

}  // namespace

void RunConfig::validate() const {
    try {
        resolve_molecule();
        source_params();
        flux_report();
        selector_params();
        focus_ensemble();
        focus_detector();
        if (!(focus.dt_us > 0.0)) invariant("focus.dt_us must be > 0");
        for (double p : focus.powers_W)
            if (p < 0.0) invariant("focus.powers_W entries must be >= 0");
        cooling_ensemble();
        if (!(cooling.kappa_rad_per_s > 0.0)) invariant("cooling.kappa_rad_per_s must be > 0");
        if (!(cooling.rescale > 0.0)) invariant("cooling.rescale must be > 0");
        if (!(cooling.dt_ns > 0.0) || !(cooling.t_end_us > 0.0))
            invariant("cooling.dt_ns and cooling.t_end_us must be > 0");
        for (double p : cooling.powers_W)
            if (p < 0.0) invariant("cooling.powers_W entries must be >= 0");
        if (sublimation.T_end_K <= sublimation.T0_K)
            invariant("sublimation.T_end_K must exceed T0_K");
        if (sublimation.T_end_K > kDecompositionTemperature)
            invariant("sublimation.T_end_K exceeds the decomposition temperature 650 K");
        if (!(sublimation.heating_rate_K_per_min > 0.0))
            invariant("sublimation.heating_rate_K_per_min must be > 0");
        if (sublimation.noise_model != "gaussian" && sublimation.noise_model != "poisson")
            invariant("sublimation.noise_model must be gaussian or poisson");
        if (selector.shape != "triangle" && selector.shape != "gaussian")
            invariant("selector.shape must be triangle or gaussian");
        if (!(optics.power_W >= 0.0) || !(optics.waist_um > 0.0) ||
            !(optics.wavelength_nm > 0.0))
            invariant("optics beam parameters out of range");
        if (!(source.hist_max_mps > source.hist_min_mps) || source.hist_bins == 0)
            invariant("source histogram binning out of range");
        if (output.dir.empty()) invariant("output.dir must not be empty");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        invariant(ex.what());
    }
}

Molecule RunConfig::resolve_molecule() const {
    Molecule m;
    if (molecule.name == "custom") {
        if (molecule.mass_amu <= 0.0)
            throw std::invalid_argument("molecule.name = custom requires molecule.mass_amu");
        m = make_molecule("custom", molecule.mass_amu,
                          molecule.alpha_A3 >= 0.0 ? molecule.alpha_A3 : 0.0,
                          molecule.sigma_abs_m2 >= 0.0 ? molecule.sigma_abs_m2 : 0.0,
                          molecule.sigma_ion_m2 >= 0.0 ? molecule.sigma_ion_m2 : 0.0,
                          molecule.dipole_D >= 0.0 ? molecule.dipole_D : 0.0);
        return m;
    }
    m = find_molecule(molecule.name);
    if (molecule.mass_amu > 0.0) m.mass = units::amu_to_kg(molecule.mass_amu);
    if (molecule.alpha_A3 >= 0.0) m.alpha_vol = units::A3_to_m3(molecule.alpha_A3);
    if (molecule.sigma_abs_m2 >= 0.0) m.sigma_abs = molecule.sigma_abs_m2;
    if (molecule.sigma_ion_m2 >= 0.0) m.sigma_ion = molecule.sigma_ion_m2;
    if (molecule.dipole_D >= 0.0) m.dipole = units::debye_to_Cm(molecule.dipole_D);
    m.validate();
    return m;
}

SourceParams RunConfig::source_params() const {
    SourceParams p;
    p.temperature = source.temperature_K;
    p.drift = source.drift_mps;
    p.mass = resolve_molecule().mass;
    p.validate();
    return p;
}

FluxReport RunConfig::flux_report() const {
    FluxReport r;
    r.count_rate = source.count_rate_cps;
    r.detection_efficiency = source.detection_efficiency;
    r.detector_area = source.detector_area_cm2 * 1e-4;
    r.distance_detector = source.distance_detector_m;
    r.mean_speed = source.mean_speed_mps;
    r.validate();
    return r;
}

SelectorParams RunConfig::selector_params() const {
    SelectorParams p;
    p.calibration = selector.calibration_mps_per_hz;
    p.fwhm_rel = selector.fwhm_rel;
    p.rotor_freq = selector.rotor_freq_hz;
    p.freq_stability = selector.freq_stability;
    p.jitter_enabled = selector.jitter;
    p.shape = selector.shape == "gaussian" ? SelectorShape::Gaussian : SelectorShape::Triangle;
    p.validate();
    return p;
}

EnsembleSpec RunConfig::focus_ensemble() const {
    EnsembleSpec e;
    e.n_particles = focus.n_particles;
    e.source_side = focus.source_side_um * 1e-6;
    e.source_distance = focus.source_distance_mm * 1e-3;
    e.v_mean = focus.v_mean_mps;
    e.v_spread = focus.v_spread_mps;
    e.seed = derive_stream(seed, "focus-ensemble");
    e.validate();
    return e;
}

DetectorSpec RunConfig::focus_detector() const {
    DetectorSpec d;
    d.distance = focus.detector_distance_m;
    d.half_width = focus.detector_half_width_mm * 1e-3;
    d.validate();
    return d;
}

SimOptions RunConfig::focus_options() const {
    SimOptions o;
    o.dt = focus.dt_us * 1e-6;
    o.gravity = focus.gravity;
    o.field_cutoff_z = focus.field_cutoff_mm * 1e-3;
    o.record_stride = focus.traj_stride;
    o.record_particles = focus.traj_particles;
    return o;
}

std::vector<GaussianBeam> RunConfig::focus_beams(double power_W) const {
    std::vector<GaussianBeam> beams;
    if (power_W <= 0.0) return beams;
    GaussianBeam b;
    b.power = power_W;
    b.waist = focus.waist_um * 1e-6;
    b.wavelength = focus.wavelength_nm * 1e-9;
    b.focus = {0.0, 0.0, 0.0};
    b.axis = {1.0, 0.0, 0.0};
    beams.push_back(b);
    if (focus.dual) {
        b.axis = {0.0, 1.0, 0.0};
        beams.push_back(b);
    }
    return beams;
}

Molecule RunConfig::focus_molecule() const { return resolve_molecule(); }

CavityGeometry RunConfig::cooling_geometry() const {
    CavityGeometry g;
    g.length = cooling.cavity_length_cm * 1e-2;
    g.waist = cooling.waist_um * 1e-6;
    g.wavelength = cooling.wavelength_nm * 1e-9;
    return g;
}

CoolingEnsemble RunConfig::cooling_ensemble() const {
    return make_cooling_ensemble(cooling.n, units::amu_to_kg(cooling.mass_amu),
                                 cooling.v_mean_mps, cooling.v_spread_mps,
                                 derive_stream(seed, "cooling-ensemble"),
                                 cooling.extent_cm * 1e-2);
}

CouplingCalibration RunConfig::cooling_calibration() const {
    CouplingCalibration cal;
    cal.eta_cal = cooling.eta_cal;
    cal.P_ref = cooling.P_ref_W;
    return cal;
}

CavityPump RunConfig::cooling_pump(double power_W) const {
    // Coupling uses the shared polarizability/cross-section molecule, with the
    // cooling-section mass standing in for the ensemble.
    Molecule m = resolve_molecule();
    m.mass = units::amu_to_kg(cooling.mass_amu);
    CavityPump p = coupling_from_power(power_W, cooling_geometry(), m,
                                       cooling_calibration(), cooling.rescale);
    p.kappa = cooling.kappa_rad_per_s;
    p.detuning = cooling.detuning_rad_per_s;
    p.validate();
    return p;
}

EvolveOptions RunConfig::cooling_evolve_options() const {
    EvolveOptions o;
    o.record_stride = cooling.record_stride;
    o.interaction_cutoff = cooling.interaction_cutoff_us * 1e-6;
    return o;
}

}  // namespace slowbeam
