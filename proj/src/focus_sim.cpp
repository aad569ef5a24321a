#include "slowbeam/focus_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "slowbeam/constants.hpp"
#include "slowbeam/errors.hpp"
#include "slowbeam/rng.hpp"

namespace slowbeam {

FieldSample gaussian_field(const Vec3& pos, const GaussianBeam& beam, double alpha_vol_m3) {
    beam.validate();
    if (alpha_vol_m3 < 0.0)
        throw std::invalid_argument("gaussian_field: alpha_vol must be >= 0");

    Vec3 d = pos - beam.focus;
    double s = dot(d, beam.axis);          // along the optical axis
    Vec3 rho_vec = d - s * beam.axis;      // transverse part
    double rho2 = dot(rho_vec, rho_vec);

    double w0 = beam.waist;
    double zr = beam.rayleigh();
    double w2 = w0 * w0 * (1.0 + (s / zr) * (s / zr));
    double g = std::exp(-2.0 * rho2 / w2);
    double U0 = dipole_potential_depth(alpha_vol_m3, beam.power, w0);
    double pref = U0 * w0 * w0;

    FieldSample out;
    out.potential = -pref * g / w2;
    // transverse: dU/d(rho_i) = 4 pref g rho_i / w^4
    double ft = -4.0 * pref * g / (w2 * w2);
    // axial: dU/d(w^2) * d(w^2)/ds, d(w^2)/ds = 2 w0^2 s / zR^2
    double dU_dw2 = pref * g * (1.0 - 2.0 * rho2 / w2) / (w2 * w2);
    double fs = -dU_dw2 * 2.0 * w0 * w0 * s / (zr * zr);
    out.force = ft * rho_vec + fs * beam.axis;
    out.intensity = (2.0 * beam.power / (constants::pi * w0 * w0)) * (w0 * w0 / w2) * g;
    return out;
}

FieldSample total_field(const Vec3& pos, std::span<const GaussianBeam> beams,
                        double alpha_vol_m3) {
    FieldSample acc;
    for (const auto& b : beams) {
        FieldSample f = gaussian_field(pos, b, alpha_vol_m3);
        acc.potential += f.potential;
        acc.force += f.force;
        acc.intensity += f.intensity;
    }
    return acc;
}

void EnsembleSpec::validate() const {
    if (n_particles < 1) throw std::invalid_argument("EnsembleSpec: n_particles must be >= 1");
    if (!(source_side > 0.0) || !(source_distance > 0.0) || !(v_mean > 0.0) ||
        !(v_spread > 0.0))
        throw std::invalid_argument("EnsembleSpec: lengths and speeds must be > 0");
}

void DetectorSpec::validate() const {
    if (!(distance > 0.0) || !(half_width > 0.0))
        throw std::invalid_argument("DetectorSpec: distance and half_width must be > 0");
}

namespace {

struct Stepper {
    std::span<const GaussianBeam> beams;
    const Molecule& mol;
    double dt;
    bool gravity;
    double photon_energy;

    // one velocity-Verlet step; returns the photon-dose increment
    double step(ParticleState& st, FieldSample& f) const {
        double inv_m = 1.0 / mol.mass;
        Vec3 a = f.force * inv_m;
        if (gravity) a.z -= constants::g_earth;
        st.velocity += 0.5 * dt * a;
        st.position += dt * st.velocity;
        FieldSample f2 = total_field(st.position, beams, mol.alpha_vol);
        Vec3 a2 = f2.force * inv_m;
        if (gravity) a2.z -= constants::g_earth;
        st.velocity += 0.5 * dt * a2;
        double dose = mol.sigma_abs * 0.5 * (f.intensity + f2.intensity) / photon_energy * dt;
        f = f2;
        return dose;
    }
};

bool finite(const ParticleState& s) {
    return std::isfinite(s.position.x) && std::isfinite(s.position.y) &&
           std::isfinite(s.position.z) && std::isfinite(s.velocity.x) &&
           std::isfinite(s.velocity.y) && std::isfinite(s.velocity.z);
}

}  // namespace

Trajectory integrate_trajectory(const ParticleState& s0, std::span<const GaussianBeam> beams,
                                const Molecule& molecule, double dt, double t_end,
                                const SimOptions& opts) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_trajectory: dt must be > 0");
    if (!(t_end > dt)) throw std::invalid_argument("integrate_trajectory: t_end must exceed dt");
    molecule.validate();

    double photon_energy = constants::h * constants::c / (beams.empty() ? 1064e-9 : beams[0].wavelength);
    Stepper stepper{beams, molecule, dt, opts.gravity, photon_energy};

    Trajectory traj;
    ParticleState st = s0;
    FieldSample f = total_field(st.position, beams, molecule.alpha_vol);
    auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt));
    std::size_t stride = opts.record_stride ? opts.record_stride : 1;
    traj.time.reserve(n_steps / stride + 2);
    traj.states.reserve(n_steps / stride + 2);
    traj.time.push_back(0.0);
    traj.states.push_back(st);
    for (std::size_t i = 0; i < n_steps; ++i) {
        traj.photon_dose += stepper.step(st, f);
        if (!finite(st))
            throw IntegrationError("integrate_trajectory: non-finite state at step " +
                                       std::to_string(i),
                                   i);
        if ((i + 1) % stride == 0 || i + 1 == n_steps) {
            traj.time.push_back(static_cast<double>(i + 1) * dt);
            traj.states.push_back(st);
        }
    }
    return traj;
}

EnsembleResult simulate_ensemble(const EnsembleSpec& spec, std::span<const GaussianBeam> beams,
                                 const Molecule& molecule, const DetectorSpec& detector,
                                 const SimOptions& opts) {
    spec.validate();
    detector.validate();
    molecule.validate();
    for (const auto& b : beams) b.validate();
    if (!(opts.dt > 0.0)) throw std::invalid_argument("simulate_ensemble: dt must be > 0");

    double photon_energy =
        constants::h * constants::c / (beams.empty() ? 1064e-9 : beams[0].wavelength);
    Stepper stepper{beams, molecule, opts.dt, opts.gravity, photon_energy};

    EnsembleResult res;
    res.spec = spec;
    res.detector = detector;
    res.finals.resize(spec.n_particles);
    res.accepted.assign(spec.n_particles, false);
    res.photon_dose.resize(spec.n_particles);

    const double half = 0.5 * spec.source_side;
    const double z_cut = opts.field_cutoff_z;
    const double z_det = detector.distance;
    // hard cap so a mis-configured run cannot spin forever
    const auto max_steps = static_cast<std::size_t>(
        20.0 * (spec.source_distance + std::max(z_cut, 0.0) + 1e-3) /
        (std::max(spec.v_mean - spec.v_spread, 1.0) * opts.dt));

    for (std::size_t i = 0; i < spec.n_particles; ++i) {
        Rng rng(derive_stream(spec.seed, "focus", i));
        ParticleState st;
        st.position = {rng.uniform(-half, half), rng.uniform(-half, half),
                       -spec.source_distance};
        st.velocity = {rng.uniform(-spec.v_spread, spec.v_spread),
                       rng.uniform(-spec.v_spread, spec.v_spread),
                       spec.v_mean + rng.uniform(-spec.v_spread, spec.v_spread)};

        bool record = opts.record_stride > 0 && i < opts.record_particles;
        Trajectory traj;
        if (record) {
            traj.time.push_back(0.0);
            traj.states.push_back(st);
        }

        double dose = 0.0;
        FieldSample f = total_field(st.position, beams, molecule.alpha_vol);
        std::size_t step = 0;
        while (st.position.z < z_cut && st.position.z < z_det) {
            dose += stepper.step(st, f);
            ++step;
            if (!finite(st))
                throw IntegrationError(
                    "simulate_ensemble: non-finite state, particle " + std::to_string(i) +
                        ", step " + std::to_string(step),
                    i);
            if (step > max_steps)
                throw IntegrationError(
                    "simulate_ensemble: particle " + std::to_string(i) +
                        " did not reach the field boundary (check v_mean and dt)",
                    i);
            if (record && step % opts.record_stride == 0) {
                traj.time.push_back(static_cast<double>(step) * opts.dt);
                traj.states.push_back(st);
            }
        }
        // ballistic flight to the detector plane
        if (st.velocity.z <= 0.0)
            throw IntegrationError(
                "simulate_ensemble: particle " + std::to_string(i) + " reflected (vz <= 0)", i);
        double tof = (z_det - st.position.z) / st.velocity.z;
        st.position += tof * st.velocity;
        if (record) {
            traj.time.push_back(traj.time.back() + tof);
            traj.states.push_back(st);
            traj.photon_dose = dose;
            res.recorded.push_back(std::move(traj));
        }

        res.finals[i] = st;
        res.photon_dose[i] = dose;
        bool hit = std::fabs(st.position.x) < detector.half_width &&
                   std::fabs(st.position.y) < detector.half_width;
        res.accepted[i] = hit;
        if (hit) ++res.hits;
    }
    res.hit_fraction = static_cast<double>(res.hits) / static_cast<double>(spec.n_particles);

    std::vector<double> sorted = res.photon_dose;
    std::sort(sorted.begin(), sorted.end());
    auto pick = [&](double q) {
        return sorted[std::min(sorted.size() - 1,
                               static_cast<std::size_t>(q * static_cast<double>(sorted.size())))];
    };
    res.dose_p50 = pick(0.50);
    res.dose_p90 = pick(0.90);
    res.dose_max = sorted.back();
    return res;
}

double forward_gain(const EnsembleResult& with_field, const EnsembleResult& without_field) {
    const auto& a = with_field.spec;
    const auto& b = without_field.spec;
    if (a.n_particles != b.n_particles || a.seed != b.seed ||
        a.source_side != b.source_side || a.source_distance != b.source_distance ||
        a.v_mean != b.v_mean || a.v_spread != b.v_spread ||
        with_field.detector.distance != without_field.detector.distance ||
        with_field.detector.half_width != without_field.detector.half_width)
        throw std::invalid_argument("forward_gain: runs must share ensemble spec and detector");
    if (without_field.hits == 0)
        throw NumericError(
            "forward_gain: zero baseline hits; increase n_particles or widen the detector");
    return with_field.hit_fraction / without_field.hit_fraction;
}

}  // namespace slowbeam
