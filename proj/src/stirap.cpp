#include "qrot/stirap.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "qrot/analysis.hpp"
#include "qrot/ode.hpp"

namespace qrot {

DesignedPulses::DesignedPulses(const InitialQubit& q, double separation, double tau, double scale,
                               std::optional<double> stop_time)
    : q_(q), separation_(separation), tau_(tau), scale_(scale), stop_(stop_time) {
    if (!(std::isfinite(separation) && separation > 0.0))
        throw InvalidArgument(fmt::format("pulse separation T = {} must be > 0", separation));
    if (!(std::isfinite(tau) && tau > 0.0)) throw InvalidArgument(fmt::format("tau = {} must be > 0", tau));
    if (!(std::isfinite(scale) && scale > 0.0))
        throw InvalidArgument(fmt::format("amplitude scale = {} must be > 0", scale));
    if (stop_ && !std::isfinite(*stop_)) throw InvalidArgument("stop time must be finite");
}

Envelopes DesignedPulses::at(double t) const {
    if (stop_ && t > *stop_) return {};
    const double u1 = (t - separation_) / tau_;
    const double u2 = t / tau_;
    const double g1 = scale_ * std::exp(-u1 * u1);
    const double g2 = scale_ * std::exp(-u2 * u2);
    const double a = q_.alpha();
    const double b = q_.beta();
    // inverse of the (unitary, self-inverse) map (W1, W2) -> (f1*, f2*)
    return {a * g1 + std::polar(b, q_.phi()) * g2, std::polar(b, -q_.phi()) * g1 - a * g2};
}

std::pair<cplx, cplx> DesignedPulses::effective_couplings(double t) const {
    const Envelopes w = at(t);
    const double a = q_.alpha();
    const double b = q_.beta();
    const cplx w1c = std::conj(w.omega1);
    const cplx w2c = std::conj(w.omega2);
    return {a * w1c + std::polar(b, -q_.phi()) * w2c, std::polar(b, q_.phi()) * w1c - a * w2c};
}

GeneratorMatrix DesignedPulses::generator(double t) const { return coupling_generator(at(t), 0.0, 0.0); }

DesignedPulses design_pulses(const InitialQubit& q, double separation, double tau, double scale) {
    return DesignedPulses(q, separation, tau, scale);
}

TransferReport run_designed(const DesignedPulses& pulses, const IntegrationWindow& window) {
    window.validate();
    auto settings = ode::Settings::from(window);
    if (pulses.stop_time()) settings.breakpoints.push_back(*pulses.stop_time());

    const auto& q = pulses.qubit();
    const StateVector start{cplx{}, cplx(q.alpha(), 0.0), std::polar(q.beta(), q.phi())};
    auto generator = [&pulses](double t) { return pulses.generator(t); };

    TransferReport r;
    r.trajectory = make_trajectory(ode::propagate<3>(generator, to_amplitudes(start), settings));
    const StateVector& last = r.trajectory.final_state();
    const QubitVector c{last.g, last.f};
    r.fidelity_target = fidelity(c, orthogonal_state(q));
    r.fidelity_initial = fidelity(c, QubitVector::from(q));
    for (const auto& p : r.trajectory.populations) r.max_excited = std::max(r.max_excited, p.e);
    return r;
}

TransferReport orthogonal_transfer(const InitialQubit& q, double separation, double tau, double scale,
                                   const IntegrationWindow& window) {
    return run_designed(DesignedPulses(q, separation, tau, scale), window);
}

TransferReport chopped_rotation(const InitialQubit& q, double separation, double tau, double scale, double stop_time,
                                const IntegrationWindow& window) {
    return run_designed(DesignedPulses(q, separation, tau, scale, stop_time), window);
}

}  // namespace qrot
