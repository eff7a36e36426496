#include "qrot/dynamics.hpp"

#include <cmath>

#include "qrot/analysis.hpp"

namespace qrot {

namespace {

constexpr cplx kI{0.0, 1.0};

// log(cosh(x)) without overflow for large |x|.
double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

Envelopes envelope(double t, const PulsePair& p) {
    const double tau = p.tau();
    const double u1 = (t - p.separation()) / tau;
    const double u2 = t / tau;
    return {p.omega01() * std::exp(-u1 * u1) * std::polar(1.0, -p.phase()), cplx(p.omega02() * std::exp(-u2 * u2), 0.0)};
}

double chirp_rate(double t, const ChirpProfile& c, double center, double tau) {
    const double u = (t - center) / tau;
    switch (c.kind()) {
        case ChirpKind::none: return 0.0;
        case ChirpKind::linear: return c.chi() * u;
        case ChirpKind::tanh: return c.chi() * std::tanh(u);
    }
    return 0.0;
}

double accumulated_chirp_phase(double t, const ChirpProfile& c, double center, double tau) {
    const double u = (t - center) / tau;
    const double u0 = center / tau;
    switch (c.kind()) {
        case ChirpKind::none: return 0.0;
        case ChirpKind::linear: return 0.5 * c.chi() * (u * u - u0 * u0);
        case ChirpKind::tanh: return c.chi() * (log_cosh(u) - log_cosh(u0));
    }
    return 0.0;
}

GeneratorMatrix coupling_generator(const Envelopes& w, double excited_rate, double f_rate) {
    GeneratorMatrix m = GeneratorMatrix::Zero();
    m(0, 0) = kI * excited_rate;
    m(0, 1) = -kI * w.omega1;
    m(0, 2) = -kI * w.omega2;
    m(1, 0) = -kI * std::conj(w.omega1);
    m(2, 0) = -kI * std::conj(w.omega2);
    m(2, 2) = kI * f_rate;
    return m;
}

GeneratorMatrix assemble_generator(double t, const SimulationConfig& cfg) {
    const auto& p = cfg.pulses();
    const auto& d = cfg.detunings();
    const double tau = p.tau();
    const double r1 = chirp_rate(t, p.chirp1(), p.separation(), tau) / tau;
    const double r2 = chirp_rate(t, p.chirp2(), 0.0, tau) / tau;
    return coupling_generator(envelope(t, p), d.delta1() + r1, d.delta1() - d.delta2() + (r1 - r2));
}

Trajectory make_trajectory(ode::Solution<3>&& raw) {
    Trajectory tr;
    tr.times = std::move(raw.times);
    tr.max_norm_drift = raw.max_norm_drift;
    tr.accepted_steps = raw.accepted_steps;
    tr.states.reserve(raw.states.size());
    tr.populations.reserve(raw.states.size());
    tr.phases.reserve(raw.states.size());
    for (const auto& a : raw.states) {
        const StateVector s = to_state(a);
        tr.states.push_back(s);
        tr.populations.push_back(Populations::of(s));
        tr.phases.push_back(relative_phase(QubitVector{s.g, s.f}));
    }
    return tr;
}

// The diagonal of the generator (detuning plus chirp) is integrated in closed
// form: d_e = e^{i th_e} x_e, d_f = e^{i th_f} x_f, d_g = x_g. The stepper
// then only sees the couplings, so the pulse-free wings cost nothing and add
// no norm drift however fast the bare phases rotate. |x_k| = |d_k| exactly.
Trajectory integrate(const SimulationConfig& cfg) {
    const auto& p = cfg.pulses();
    const auto& d = cfg.detunings();
    const double tau = p.tau();
    const double t0 = cfg.t_start();
    const double chirp1_0 = accumulated_chirp_phase(t0, p.chirp1(), p.separation(), tau);
    const double chirp2_0 = accumulated_chirp_phase(t0, p.chirp2(), 0.0, tau);
    auto phases = [&](double t) {
        const double c1 = accumulated_chirp_phase(t, p.chirp1(), p.separation(), tau) - chirp1_0;
        const double c2 = accumulated_chirp_phase(t, p.chirp2(), 0.0, tau) - chirp2_0;
        return std::pair{d.delta1() * (t - t0) + c1, (d.delta1() - d.delta2()) * (t - t0) + (c1 - c2)};
    };
    auto generator = [&](double t) {
        const auto [th_e, th_f] = phases(t);
        Envelopes w = envelope(t, p);
        w.omega1 *= std::polar(1.0, -th_e);
        w.omega2 *= std::polar(1.0, th_f - th_e);
        return coupling_generator(w, 0.0, 0.0);
    };
    auto raw = ode::propagate<3>(generator, to_amplitudes(cfg.initial_state()), ode::Settings::from(cfg.window()));
    for (std::size_t k = 0; k < raw.times.size(); ++k) {
        const auto [th_e, th_f] = phases(raw.times[k]);
        raw.states[k][0] *= std::polar(1.0, th_e);
        raw.states[k][2] *= std::polar(1.0, th_f);
    }
    Trajectory tr = make_trajectory(std::move(raw));
    for (std::size_t k = 0; k < tr.size(); ++k) tr.phases[k] = relative_phase(tr.states[k], tr.times[k], cfg);
    return tr;
}

}  // namespace qrot
