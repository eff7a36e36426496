#include "qrot/types.hpp"

#include <cmath>

#include <fmt/core.h>

namespace qrot {

namespace {

constexpr double kNormTolerance = 1e-12;

void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidArgument(message);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

IntegrationFailure::IntegrationFailure(const std::string& what, double time)
    : Error(fmt::format("integration failed at t = {:.17g}: {}", time, what)), time_(time) {}

InitialQubit::InitialQubit(double alpha, double beta, double phi) : alpha_(alpha), beta_(beta), phi_(phi) {
    require(finite(alpha) && finite(beta) && finite(phi), "qubit amplitudes and phase must be finite");
    require(alpha >= 0.0 && alpha <= 1.0, fmt::format("alpha = {} outside [0, 1]", alpha));
    require(beta >= 0.0 && beta <= 1.0, fmt::format("beta = {} outside [0, 1]", beta));
    require(std::abs(alpha * alpha + beta * beta - 1.0) <= kNormTolerance,
            fmt::format("qubit not normalized: alpha^2 + beta^2 = {:.17g}", alpha * alpha + beta * beta));
}

InitialQubit InitialQubit::from_alpha(double alpha, double phi) {
    require(finite(alpha) && alpha >= 0.0 && alpha <= 1.0, fmt::format("alpha = {} outside [0, 1]", alpha));
    return InitialQubit(alpha, std::sqrt(1.0 - alpha * alpha), phi);
}

InitialQubit init_from_cw(double g1, double g2, double phi) {
    require(finite(g1) && finite(g2) && g1 >= 0.0 && g2 >= 0.0,
            "cw half-Rabi frequencies must be finite and non-negative");
    const double g = std::hypot(g1, g2);
    require(g > 0.0, "invalid preparation: both cw fields are zero");
    const double alpha = g1 / g;
    const double beta = g2 / g;
    // hypot keeps alpha^2 + beta^2 within a few ulp of 1
    return InitialQubit(alpha, beta, phi);
}

QubitVector QubitVector::from(const InitialQubit& q) {
    return {cplx(q.alpha(), 0.0), std::polar(q.beta(), q.phi())};
}

QubitVector QubitVector::normalized() const {
    const double n = norm();
    require(n > 0.0, "cannot normalize a zero qubit vector");
    return {g / n, f / n};
}

cplx inner(const QubitVector& a, const QubitVector& b) { return std::conj(a.g) * b.g + std::conj(a.f) * b.f; }

QubitVector orthogonal_state(const InitialQubit& q) {
    return {std::polar(q.beta(), -q.phi()), cplx(-q.alpha(), 0.0)};
}

QubitVector orthogonal_state(const QubitVector& v) { return {std::conj(v.f), -std::conj(v.g)}; }

std::string_view to_string(ChirpKind kind) {
    switch (kind) {
        case ChirpKind::none: return "none";
        case ChirpKind::linear: return "linear";
        case ChirpKind::tanh: return "tanh";
    }
    return "none";
}

ChirpKind chirp_kind_from_string(std::string_view name) {
    if (name == "none") return ChirpKind::none;
    if (name == "linear") return ChirpKind::linear;
    if (name == "tanh") return ChirpKind::tanh;
    throw InvalidArgument(fmt::format("unknown chirp kind '{}' (expected none, linear or tanh)", name));
}

ChirpProfile::ChirpProfile(ChirpKind kind, double chi) : kind_(kind), chi_(kind == ChirpKind::none ? 0.0 : chi) {
    require(finite(chi), "chirp rate must be finite");
}

PulsePair::PulsePair(const Params& p) : p_(p) {
    require(finite(p.omega01) && p.omega01 >= 0.0, fmt::format("omega01 = {} must be >= 0", p.omega01));
    require(finite(p.omega02) && p.omega02 >= 0.0, fmt::format("omega02 = {} must be >= 0", p.omega02));
    require(finite(p.tau) && p.tau > 0.0, fmt::format("tau = {} must be > 0", p.tau));
    require(finite(p.separation), "pulse separation must be finite");
    require(finite(p.phase), "relative pulse phase must be finite");
}

DetuningSpec::DetuningSpec(double delta1, double delta2) : delta1_(delta1), delta2_(delta2) {
    require(finite(delta1) && finite(delta2), "detunings must be finite");
}

void IntegrationWindow::validate() const {
    require(finite(t_start) && finite(t_end) && t_start < t_end,
            fmt::format("time window [{}, {}] must satisfy t_start < t_end", t_start, t_end));
    require(rel_tol > 0.0 && abs_tol > 0.0, "integrator tolerances must be positive");
    require(samples >= 2, "at least two output samples are required");
}

std::vector<double> IntegrationWindow::grid() const {
    std::vector<double> t(samples);
    const double span = t_end - t_start;
    const double n = static_cast<double>(samples - 1);
    for (std::size_t k = 0; k < samples; ++k) t[k] = t_start + span * (static_cast<double>(k) / n);
    t.back() = t_end;
    return t;
}

SimulationConfig::SimulationConfig(const Params& p) : p_(p) { p_.window.validate(); }

StateVector SimulationConfig::initial_state() const {
    const auto& q = p_.initial;
    return {cplx{}, cplx(q.alpha(), 0.0), std::polar(q.beta(), q.phi())};
}

}  // namespace qrot
