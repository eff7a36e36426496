#pragma once

// Resonant pulse pairs that carry the initial qubit |i> to its orthogonal
// state |k> by adiabatic passage, and hard-chopped variants that stop the
// passage part way for a partial rotation.

#include <optional>

#include "qrot/dynamics.hpp"
#include "qrot/types.hpp"

namespace qrot {

/// Envelopes W1(t), W2(t) chosen so that the couplings of |i> and |k> to
/// |e> are the Gaussians f1 = exp(-(t-T)^2/tau^2), f2 = exp(-t^2/tau^2),
/// times `scale`. f2 acts first, so |k> is filled counterintuitively.
class DesignedPulses {
public:
    DesignedPulses(const InitialQubit& q, double separation, double tau, double scale = 1.0,
                   std::optional<double> stop_time = std::nullopt);

    /// Envelopes; zero for t > stop_time when chopped.
    Envelopes at(double t) const;
    /// Couplings seen by |i> and |k>: (alpha W1* + beta e^{-i phi} W2*,
    /// beta e^{i phi} W1* - alpha W2*).
    std::pair<cplx, cplx> effective_couplings(double t) const;
    GeneratorMatrix generator(double t) const;

    const InitialQubit& qubit() const noexcept { return q_; }
    double separation() const noexcept { return separation_; }
    double tau() const noexcept { return tau_; }
    double scale() const noexcept { return scale_; }
    const std::optional<double>& stop_time() const noexcept { return stop_; }

private:
    InitialQubit q_;
    double separation_;
    double tau_;
    double scale_;
    std::optional<double> stop_;
};

DesignedPulses design_pulses(const InitialQubit& q, double separation, double tau, double scale = 1.0);

struct TransferReport {
    Trajectory trajectory;
    double fidelity_target = 0.0;   // |<k|psi(t_end)>|^2
    double fidelity_initial = 0.0;  // |<i|psi(t_end)>|^2
    double max_excited = 0.0;       // max_t P_e
};

inline constexpr double kDefaultDesignScale = 15.0;

/// Full three-level integration with the designed pulses on one-photon
/// resonance. The window's default is [-8 tau, 15 tau].
TransferReport orthogonal_transfer(const InitialQubit& q, double separation, double tau,
                                   double scale = kDefaultDesignScale, const IntegrationWindow& window = {});

/// As orthogonal_transfer, with both envelopes cut to zero after stop_time.
TransferReport chopped_rotation(const InitialQubit& q, double separation, double tau, double scale, double stop_time,
                                const IntegrationWindow& window = {});

/// Integrates an arbitrary set of designed pulses.
TransferReport run_designed(const DesignedPulses& pulses, const IntegrationWindow& window);

}  // namespace qrot
