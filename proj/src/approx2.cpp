#include "qrot/approx2.hpp"

#include <cmath>

#include <fmt/core.h>

#include "qrot/dynamics.hpp"
#include "qrot/ode.hpp"

namespace qrot {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_reducible(const SimulationConfig& cfg) {
    if (cfg.pulses().chirped()) throw UnsupportedRegime("two-level reduction requires unchirped pulses");
    if (!cfg.detunings().two_photon_resonant())
        throw UnsupportedRegime("two-level reduction requires two-photon resonance (delta1 = delta2)");
    if (std::abs(cfg.detunings().delta1()) < kResonanceGuard)
        throw UnsupportedRegime(fmt::format("two-level reduction undefined at one-photon resonance (|delta tau| = {} < {})",
                                            std::abs(cfg.detunings().delta1()), kResonanceGuard));
}

EffectiveTwoLevel reduce(double t, const SimulationConfig& cfg) {
    const auto& q = cfg.initial();
    const double delta = cfg.detunings().delta1();
    const Envelopes w = envelope(t, cfg.pulses());
    const cplx w1c = std::conj(w.omega1);
    const cplx w2c = std::conj(w.omega2);
    EffectiveTwoLevel e;
    e.f1 = q.alpha() * w1c + std::polar(q.beta(), -q.phi()) * w2c;
    e.f2 = std::polar(q.beta(), q.phi()) * w1c - q.alpha() * w2c;
    e.omega_e = e.f1 * std::conj(e.f2) / delta;
    e.delta_e = (std::norm(e.f1) - std::norm(e.f2)) / (2.0 * delta);
    return e;
}

}  // namespace

bool EffectiveTwoLevel::consistent(double delta, double tol) const {
    const cplx om = f1 * std::conj(f2) / delta;
    const double de = (std::norm(f1) - std::norm(f2)) / (2.0 * delta);
    const double scale = std::max({1.0, std::abs(om), std::abs(de)});
    return std::abs(om - omega_e) <= tol * scale && std::abs(de - delta_e) <= tol * scale;
}

EffectiveTwoLevel effective_params(double t, const SimulationConfig& cfg) {
    require_reducible(cfg);
    return reduce(t, cfg);
}

QubitVector to_ground_basis(const std::array<cplx, 2>& ik, const InitialQubit& q) {
    const QubitVector i = QubitVector::from(q);
    const QubitVector k = orthogonal_state(q);
    return {ik[0] * i.g + ik[1] * k.g, ik[0] * i.f + ik[1] * k.f};
}

TwoLevelTrajectory integrate_two_level(const SimulationConfig& cfg) {
    require_reducible(cfg);
    auto generator = [&cfg](double t) {
        const auto e = reduce(t, cfg);
        ode::Matrix<2> m;
        m << -kI * e.delta_e, -kI * e.omega_e, -kI * std::conj(e.omega_e), kI * e.delta_e;
        return m;
    };
    auto raw = ode::propagate<2>(generator, ode::Amplitudes<2>{cplx(1.0, 0.0), cplx{}},
                                 ode::Settings::from(cfg.window()));

    TwoLevelTrajectory tr;
    tr.times = std::move(raw.times);
    tr.amplitudes = std::move(raw.states);
    tr.max_norm_drift = raw.max_norm_drift;
    tr.accepted_steps = raw.accepted_steps;
    tr.ground.reserve(tr.times.size());
    for (const auto& a : tr.amplitudes) {
        const QubitVector c = to_ground_basis(a, cfg.initial());
        tr.ground.push_back(c);
        tr.p_g.push_back(std::norm(c.g));
        tr.p_f.push_back(std::norm(c.f));
    }
    return tr;
}

Comparison compare_with_full(const SimulationConfig& cfg) {
    require_reducible(cfg);
    Comparison c{integrate(cfg), integrate_two_level(cfg), {}};
    auto& d = c.deviation;
    for (std::size_t k = 0; k < c.full.size(); ++k) {
        const double dg = std::abs(c.full.populations[k].g - c.reduced.p_g[k]);
        const double df = std::abs(c.full.populations[k].f - c.reduced.p_f[k]);
        d.max_dev_g = std::max(d.max_dev_g, dg);
        d.max_dev_f = std::max(d.max_dev_f, df);
        d.final_dev_g = dg;
        d.final_dev_f = df;
    }
    return c;
}

}  // namespace qrot
