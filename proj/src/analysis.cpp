#include "qrot/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "qrot/dynamics.hpp"

namespace qrot {

namespace {

void require_adiabatic_regime(const SimulationConfig& cfg) {
    if (cfg.pulses().chirped())
        throw UnsupportedRegime("adiabatic basis is only defined for unchirped pulses");
    if (!cfg.detunings().two_photon_resonant())
        throw UnsupportedRegime("adiabatic basis requires two-photon resonance (delta1 = delta2)");
}

// tan(theta) = |W1|/|W2| evaluated from log-amplitudes so that the far
// wings, where both envelopes underflow, keep the limiting angle.
double mixing_theta(double t, const PulsePair& p) {
    if (p.omega01() == 0.0 && p.omega02() == 0.0) return 0.0;
    if (p.omega01() == 0.0) return 0.0;
    if (p.omega02() == 0.0) return kPi / 2.0;
    const double u1 = (t - p.separation()) / p.tau();
    const double u2 = t / p.tau();
    const double log_ratio = std::log(p.omega01()) - std::log(p.omega02()) - u1 * u1 + u2 * u2;
    if (log_ratio > 700.0) return kPi / 2.0;
    if (log_ratio < -700.0) return 0.0;
    return std::atan2(std::exp(log_ratio), 1.0);
}

}  // namespace

QubitVector bare_ground_amplitudes(const StateVector& s, double t, const SimulationConfig& cfg) {
    const auto& p = cfg.pulses();
    const auto& d = cfg.detunings();
    const double chirp = accumulated_chirp_phase(t, p.chirp1(), p.separation(), p.tau()) -
                         accumulated_chirp_phase(t, p.chirp2(), 0.0, p.tau());
    const double frame = (d.delta1() - d.delta2()) * t + chirp;
    return {s.g, s.f * std::polar(1.0, -frame)};
}

std::optional<PhaseReading> relative_phase(const QubitVector& c) {
    const double denom = std::abs(c.g) * std::abs(c.f);
    if (!(denom >= kPhaseFloor)) return std::nullopt;
    const cplx z = std::conj(c.g) * c.f;
    const double cos_phi = std::clamp(z.real() / denom, -1.0, 1.0);
    return PhaseReading{cos_phi, std::arg(z)};
}

std::optional<PhaseReading> relative_phase(const StateVector& s, double t, const SimulationConfig& cfg) {
    return relative_phase(bare_ground_amplitudes(s, t, cfg));
}

Eigen::Matrix3cd adiabatic_hamiltonian(double t, const SimulationConfig& cfg) {
    require_adiabatic_regime(cfg);
    return cplx(0.0, 1.0) * assemble_generator(t, cfg);
}

AdiabaticFrame adiabatic_frame(double t, const SimulationConfig& cfg) {
    require_adiabatic_regime(cfg);
    const auto& p = cfg.pulses();
    const double delta = cfg.detunings().delta1();
    const Envelopes w = envelope(t, p);
    const double wbar = std::hypot(std::abs(w.omega1), std::abs(w.omega2));

    AdiabaticFrame fr;
    fr.theta = mixing_theta(t, p);
    const double root = std::sqrt(delta * delta + 4.0 * wbar * wbar);
    // delta + root, without cancellation when delta < 0
    const double denom = delta >= 0.0 ? delta + root : (4.0 * wbar * wbar) / (root - delta);
    fr.phi_mix = std::atan2(2.0 * wbar, denom);

    // phase of W1 relative to W2; W2 is real and non-negative
    const cplx rel = std::polar(1.0, -p.phase());
    const double ct = std::cos(fr.theta), st = std::sin(fr.theta);
    const double cp = std::cos(fr.phi_mix), sp = std::sin(fr.phi_mix);

    // dark (0, W2, -W1)/Wbar and bright (0, W1*, W2*)/Wbar
    const Eigen::Vector3cd dark(0.0, ct, -st * rel);
    const Eigen::Vector3cd bright(0.0, st * std::conj(rel), ct);
    const Eigen::Vector3cd excited(1.0, 0.0, 0.0);

    fr.a0 = dark;
    fr.a_plus = sp * excited + cp * bright;
    fr.a_minus = cp * excited - sp * bright;
    fr.eigenvalues = {0.0, 0.5 * (root - delta), -0.5 * (root + delta)};
    return fr;
}

std::vector<AdiabaticPopulations> adiabatic_populations(const Trajectory& traj, const SimulationConfig& cfg) {
    require_adiabatic_regime(cfg);
    std::vector<AdiabaticPopulations> out;
    out.reserve(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto fr = adiabatic_frame(traj.times[k], cfg);
        const auto& s = traj.states[k];
        const Eigen::Vector3cd psi(s.e, s.g, s.f);
        out.push_back({std::norm(fr.a0.dot(psi)), std::norm(fr.a_plus.dot(psi)), std::norm(fr.a_minus.dot(psi))});
    }
    return out;
}

double nonadiabaticity(const std::vector<AdiabaticPopulations>& pops) {
    if (pops.empty()) return 0.0;
    const double start = pops.front().dark;
    double worst = 0.0;
    for (const auto& p : pops) worst = std::max(worst, std::abs(p.dark - start));
    return std::min(worst, 1.0);
}

double nonadiabaticity(const Trajectory& traj, const SimulationConfig& cfg) {
    return nonadiabaticity(adiabatic_populations(traj, cfg));
}

double fidelity(const QubitVector& c, const QubitVector& target) {
    return std::clamp(std::norm(inner(target, c)), 0.0, 1.0);
}

double fidelity(const StateVector& s, double t, const SimulationConfig& cfg, const QubitVector& target) {
    return fidelity(bare_ground_amplitudes(s, t, cfg), target);
}

}  // namespace qrot
