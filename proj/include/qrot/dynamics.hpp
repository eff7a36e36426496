#pragma once

// Rotated-frame amplitude equations for the driven Lambda system.
//
//   d_e' = i(D1 + r1) d_e - i(W1 d_g + W2 d_f)
//   d_g' = -i conj(W1) d_e
//   d_f' = i(D1 - D2 + r1 - r2) d_f - i conj(W2) d_e
//
// with W1, W2 the complex pulse envelopes and r1, r2 the instantaneous
// chirp rates per unit time.

#include <Eigen/Core>

#include "qrot/ode.hpp"
#include "qrot/types.hpp"

namespace qrot {

/// Matrix M(t) with d' = M d, ordered (e, g, f).
using GeneratorMatrix = Eigen::Matrix3cd;

struct Envelopes {
    cplx omega1;
    cplx omega2;
};

Envelopes envelope(double t, const PulsePair& p);

/// Chirp rate d(phi)/d(t/tau) of a pulse centred at `center`.
double chirp_rate(double t, const ChirpProfile& c, double center, double tau = 1.0);

/// Chirp phase accumulated since t = 0, so that the value at t = 0 is 0.
double accumulated_chirp_phase(double t, const ChirpProfile& c, double center, double tau = 1.0);

/// Generator for arbitrary envelopes and diagonal phase rates. Shared by
/// the Gaussian pulse model and designed pulse shapes.
GeneratorMatrix coupling_generator(const Envelopes& w, double excited_rate, double f_rate);

GeneratorMatrix assemble_generator(double t, const SimulationConfig& cfg);

/// Builds a Trajectory from raw amplitudes. Phases are computed with the
/// identity frame (c_g = d_g, c_f = d_f).
Trajectory make_trajectory(ode::Solution<3>&& raw);

/// Solves the amplitude equations from the configured initial qubit.
/// Throws IntegrationFailure when the tolerances cannot be met.
Trajectory integrate(const SimulationConfig& cfg);

inline ode::Amplitudes<3> to_amplitudes(const StateVector& s) { return {s.e, s.g, s.f}; }
inline StateVector to_state(const ode::Amplitudes<3>& a) { return {a[0], a[1], a[2]}; }

}  // namespace qrot
