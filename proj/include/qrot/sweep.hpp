#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrot/types.hpp"

namespace qrot {

enum class SweepParameter {
    delta_tau,    // D1 = D2 = value
    T_over_tau,   // pulse separation
    ratio_omega,  // Omega_01 = value * Omega_02
    delta_phase,  // relative phase of pulse 1
    chi,          // chi1 = chi2 = value (chirp kinds from the base)
    chi_ratio,    // chi1 = 1, chi2 = value
    chirp_kind,   // 0 none, 1 linear, 2 tanh, applied to both pulses
};

std::string_view to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(std::string_view name);

/// Copy of `base` with one parameter overridden.
SimulationConfig apply_override(const SimulationConfig& base, SweepParameter p, double value);

struct SweepAxis {
    SweepParameter parameter = SweepParameter::delta_tau;
    std::vector<double> grid;
};

/// Evenly spaced grid including both ends.
std::vector<double> linspace(double first, double last, std::size_t count);

/// A one-dimensional sweep over `axis`, optionally repeated for every value
/// of a second `series` axis (e.g. the two signs of the detuning).
class SweepSpec {
public:
    SweepSpec(SweepAxis axis, SimulationConfig base, std::optional<SweepAxis> series = std::nullopt);

    const SweepAxis& axis() const noexcept { return axis_; }
    const std::optional<SweepAxis>& series() const noexcept { return series_; }
    const SimulationConfig& base() const noexcept { return base_; }
    std::size_t size() const noexcept;

private:
    SweepAxis axis_;
    SimulationConfig base_;
    std::optional<SweepAxis> series_;
};

/// Long-time observables at one grid point, read at the end of the window.
struct SweepPoint {
    double value = 0.0;
    std::optional<double> series_value;
    Populations populations{};
    std::optional<PhaseReading> phase;
    std::optional<double> nonadiabaticity;  // unchirped, two-photon-resonant points only
    double max_norm_drift = 0.0;
    std::optional<std::string> error;
};

struct SweepResult {
    std::vector<SweepPoint> points;  // series-major, grid order within a series
};

/// Worker count from the QROT_MAX_WORKERS cap and hardware concurrency.
std::size_t default_workers();

/// Runs every grid point; results are independent of `workers`.
SweepResult run_sweep(const SweepSpec& spec, std::size_t workers = 0);

struct FigurePreset {
    std::string name;
    std::string description;
    SimulationConfig config;  // single-run configuration (sweep base or the figure's solid curve)
    std::optional<SweepSpec> sweep;
};

const std::vector<std::string>& figure_preset_names();

/// Throws InvalidArgument listing valid names for unknown presets.
FigurePreset figure_preset(std::string_view name);

/// Shared base of the figure presets: alpha = 0.3, phi = pi/2,
/// Omega_0i tau = 15, delta = 0, no chirp, T = 4 tau / 3, D tau = 45.
SimulationConfig::Params preset_base_params();

}  // namespace qrot
