#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "qrot/types.hpp"

namespace qrot {

/// Moduli below this product make the relative phase undefined.
inline constexpr double kPhaseFloor = 1e-12;

/// Bare-basis ground amplitudes (c_g, c_f) recovered from rotated-frame
/// amplitudes by removing the detuning and chirp phases.
QubitVector bare_ground_amplitudes(const StateVector& s, double t, const SimulationConfig& cfg);

std::optional<PhaseReading> relative_phase(const QubitVector& c);
std::optional<PhaseReading> relative_phase(const StateVector& s, double t, const SimulationConfig& cfg);

/// Instantaneous eigenbasis of the unchirped, two-photon-resonant generator
/// H = [[-D, W1, W2], [W1*, 0, 0], [W2*, 0, 0]].
struct AdiabaticFrame {
    double theta = 0.0;    // tan(theta) = |W1| / |W2|
    double phi_mix = 0.0;  // tan(phi_mix) = 2 Wbar / (D + sqrt(D^2 + 4 Wbar^2))
    Eigen::Vector3cd a0;   // dark state, eigenvalue 0
    Eigen::Vector3cd a_plus;
    Eigen::Vector3cd a_minus;
    std::array<double, 3> eigenvalues{};  // (a0, a_plus, a_minus)
};

/// Throws UnsupportedRegime for chirped or two-photon-detuned configs.
AdiabaticFrame adiabatic_frame(double t, const SimulationConfig& cfg);

/// The Hermitian matrix H = i M for the same regime.
Eigen::Matrix3cd adiabatic_hamiltonian(double t, const SimulationConfig& cfg);

struct AdiabaticPopulations {
    double dark = 0.0;
    double plus = 0.0;
    double minus = 0.0;
};

std::vector<AdiabaticPopulations> adiabatic_populations(const Trajectory& traj, const SimulationConfig& cfg);

/// max_t |P_a0(t) - P_a0(t_start)|; 0 means perfect adiabatic following.
double nonadiabaticity(const Trajectory& traj, const SimulationConfig& cfg);
double nonadiabaticity(const std::vector<AdiabaticPopulations>& pops);

/// |<target|c>|^2 for ground amplitudes c. `target` must be normalized.
double fidelity(const QubitVector& c, const QubitVector& target);
double fidelity(const StateVector& s, double t, const SimulationConfig& cfg, const QubitVector& target);

}  // namespace qrot
