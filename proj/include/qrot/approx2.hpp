#pragma once

// Large-detuning reduction of the Lambda system to an effective two-level
// system in the (|i>, |k>) basis, where |i> is the initial qubit and |k>
// its orthogonal complement.

#include <algorithm>
#include <array>
#include <vector>

#include "qrot/types.hpp"

namespace qrot {

struct EffectiveTwoLevel {
    cplx f1;       // alpha W1* + beta e^{-i phi} W2*
    cplx f2;       // beta e^{i phi} W1* - alpha W2*
    cplx omega_e;  // f1 conj(f2) / D
    double delta_e = 0.0;  // (|f1|^2 - |f2|^2) / (2 D)

    /// Recomputes omega_e and delta_e from f1, f2 and compares.
    bool consistent(double delta, double tol = 1e-12) const;
};

/// Minimum |D tau| accepted by the reduction.
inline constexpr double kResonanceGuard = 1e-6;

/// Throws UnsupportedRegime when the config is chirped, two-photon
/// detuned, or |D tau| < kResonanceGuard.
EffectiveTwoLevel effective_params(double t, const SimulationConfig& cfg);

struct TwoLevelTrajectory {
    std::vector<double> times;
    std::vector<std::array<cplx, 2>> amplitudes;  // (d_i, d_k)
    std::vector<QubitVector> ground;              // (c_g, c_f)
    std::vector<double> p_g;
    std::vector<double> p_f;
    double max_norm_drift = 0.0;
    std::size_t accepted_steps = 0;
};

/// Maps (d_i, d_k) to (c_g, c_f) through the exact basis change.
QubitVector to_ground_basis(const std::array<cplx, 2>& ik, const InitialQubit& q);

TwoLevelTrajectory integrate_two_level(const SimulationConfig& cfg);

struct DeviationReport {
    double max_dev_g = 0.0;
    double max_dev_f = 0.0;
    double final_dev_g = 0.0;
    double final_dev_f = 0.0;

    double max_deviation() const { return std::max(max_dev_g, max_dev_f); }
    double final_deviation() const { return std::max(final_dev_g, final_dev_f); }
};

struct Comparison {
    Trajectory full;
    TwoLevelTrajectory reduced;
    DeviationReport deviation;
};

/// Runs both models on the same window and sample grid.
Comparison compare_with_full(const SimulationConfig& cfg);

}  // namespace qrot
