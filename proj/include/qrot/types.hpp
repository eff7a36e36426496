#pragma once

// Shared domain records for the double-Lambda qubit rotation model.
//
// Time is measured in units of the pulse half-width tau. Every rate stored
// here is the dimensionless product with tau (Omega_0 tau, Delta tau, chi).
// Amplitudes are ordered (e, g, f) wherever a 3-vector appears.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qrot {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a domain record is constructed with violated invariants.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The adaptive integrator could not meet its tolerances.
class IntegrationFailure : public Error {
public:
    IntegrationFailure(const std::string& what, double time);
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// An analysis was requested outside the regime where it is defined
/// (chirped pulses, two-photon detuning, exact resonance for the
/// two-level reduction).
class UnsupportedRegime : public Error {
public:
    using Error::Error;
};

/// Initial qubit alpha|g> + beta e^{i phi}|f> with alpha, beta >= 0.
class InitialQubit {
public:
    InitialQubit() = default;  // |g>
    InitialQubit(double alpha, double beta, double phi);

    /// Qubit for a given alpha, with beta fixed by normalization.
    static InitialQubit from_alpha(double alpha, double phi);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double phi() const noexcept { return phi_; }

private:
    double alpha_ = 1.0;
    double beta_ = 0.0;
    double phi_ = 0.0;
};

/// Stationary state left by two resonant cw fields with half-Rabi
/// frequencies g1 (|1>-|g>) and g2 (|1>-|f>).
InitialQubit init_from_cw(double g1, double g2, double phi);

/// A vector in the (|g>, |f>) plane.
struct QubitVector {
    cplx g{};
    cplx f{};

    static QubitVector from(const InitialQubit& q);
    double norm() const { return std::sqrt(std::norm(g) + std::norm(f)); }
    QubitVector normalized() const;
};

cplx inner(const QubitVector& a, const QubitVector& b);

/// |k> = beta e^{-i phi}|g> - alpha|f>, orthogonal to the initial qubit.
QubitVector orthogonal_state(const InitialQubit& q);
/// (a, b) -> (conj b, -conj a); agrees with the overload above on |i>.
QubitVector orthogonal_state(const QubitVector& v);

enum class ChirpKind { none, linear, tanh };

std::string_view to_string(ChirpKind kind);
ChirpKind chirp_kind_from_string(std::string_view name);

class ChirpProfile {
public:
    ChirpProfile() = default;
    ChirpProfile(ChirpKind kind, double chi);

    ChirpKind kind() const noexcept { return kind_; }
    double chi() const noexcept { return chi_; }
    /// True when the profile produces a nonzero frequency sweep.
    bool active() const noexcept { return kind_ != ChirpKind::none && chi_ != 0.0; }

private:
    ChirpKind kind_ = ChirpKind::none;
    double chi_ = 0.0;
};

/// Two Gaussian pulses: pulse 1 (|e>-|g>) centred at `separation`,
/// pulse 2 (|e>-|f>) centred at 0.
class PulsePair {
public:
    struct Params {
        double omega01 = 0.0;     // Omega_01 tau
        double omega02 = 0.0;     // Omega_02 tau
        double tau = 1.0;
        double separation = 0.0;  // T / tau
        double phase = 0.0;       // delta, carried by pulse 1
        ChirpProfile chirp1{};
        ChirpProfile chirp2{};
    };

    PulsePair() = default;
    explicit PulsePair(const Params& p);

    const Params& params() const noexcept { return p_; }
    double omega01() const noexcept { return p_.omega01; }
    double omega02() const noexcept { return p_.omega02; }
    double tau() const noexcept { return p_.tau; }
    double separation() const noexcept { return p_.separation; }
    double phase() const noexcept { return p_.phase; }
    const ChirpProfile& chirp1() const noexcept { return p_.chirp1; }
    const ChirpProfile& chirp2() const noexcept { return p_.chirp2; }
    bool chirped() const noexcept { return p_.chirp1.active() || p_.chirp2.active(); }

private:
    Params p_{};
};

class DetuningSpec {
public:
    DetuningSpec() = default;
    DetuningSpec(double delta1, double delta2);
    static DetuningSpec two_photon_resonant(double delta) { return {delta, delta}; }

    double delta1() const noexcept { return delta1_; }
    double delta2() const noexcept { return delta2_; }
    bool two_photon_resonant() const noexcept { return delta1_ == delta2_; }

private:
    double delta1_ = 0.0;
    double delta2_ = 0.0;
};

/// Rotated-frame amplitudes (d_e, d_g, d_f).
struct StateVector {
    cplx e{};
    cplx g{};
    cplx f{};

    double norm_squared() const { return std::norm(e) + std::norm(g) + std::norm(f); }
};

struct Populations {
    double e = 0.0;
    double g = 0.0;
    double f = 0.0;

    static Populations of(const StateVector& s) { return {std::norm(s.e), std::norm(s.g), std::norm(s.f)}; }
    double sum() const { return e + g + f; }
};

struct IntegrationWindow {
    double t_start = -8.0;
    double t_end = 15.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t samples = 2301;

    void validate() const;
    std::vector<double> grid() const;
};

class SimulationConfig {
public:
    struct Params {
        PulsePair pulses{};
        DetuningSpec detunings{};
        InitialQubit initial{};
        IntegrationWindow window{};
    };

    SimulationConfig() = default;
    explicit SimulationConfig(const Params& p);

    const Params& params() const noexcept { return p_; }
    const PulsePair& pulses() const noexcept { return p_.pulses; }
    const DetuningSpec& detunings() const noexcept { return p_.detunings; }
    const InitialQubit& initial() const noexcept { return p_.initial; }
    const IntegrationWindow& window() const noexcept { return p_.window; }
    double t_start() const noexcept { return p_.window.t_start; }
    double t_end() const noexcept { return p_.window.t_end; }

    /// State (0, alpha, beta e^{i phi}) imposed at t_start.
    StateVector initial_state() const;

private:
    Params p_{};
};

/// Relative phase between c_g and c_f.
struct PhaseReading {
    double cos_phi = 0.0;
    double phi = 0.0;  // arg(c_g* c_f) in (-pi, pi]
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<Populations> populations;
    std::vector<std::optional<PhaseReading>> phases;  // nullopt where undefined
    double max_norm_drift = 0.0;
    std::size_t accepted_steps = 0;

    std::size_t size() const noexcept { return times.size(); }
    const StateVector& final_state() const { return states.back(); }
    const Populations& final_populations() const { return populations.back(); }
};

}  // namespace qrot
