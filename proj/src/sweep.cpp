#include "qrot/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <fmt/core.h>
#include <fmt/ranges.h>

#include "qrot/analysis.hpp"
#include "qrot/dynamics.hpp"

namespace qrot {

std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::delta_tau: return "delta_tau";
        case SweepParameter::T_over_tau: return "T_over_tau";
        case SweepParameter::ratio_omega: return "ratio_omega";
        case SweepParameter::delta_phase: return "delta_phase";
        case SweepParameter::chi: return "chi";
        case SweepParameter::chi_ratio: return "chi_ratio";
        case SweepParameter::chirp_kind: return "chirp_kind";
    }
    return "delta_tau";
}

SweepParameter sweep_parameter_from_string(std::string_view name) {
    for (auto p : {SweepParameter::delta_tau, SweepParameter::T_over_tau, SweepParameter::ratio_omega,
                   SweepParameter::delta_phase, SweepParameter::chi, SweepParameter::chi_ratio,
                   SweepParameter::chirp_kind})
        if (to_string(p) == name) return p;
    throw InvalidArgument(fmt::format(
        "unknown sweep parameter '{}' (expected delta_tau, T_over_tau, ratio_omega, delta_phase, chi, chi_ratio or "
        "chirp_kind)",
        name));
}

SimulationConfig apply_override(const SimulationConfig& base, SweepParameter p, double value) {
    if (!std::isfinite(value)) throw InvalidArgument("sweep values must be finite");
    auto params = base.params();
    auto pulses = params.pulses.params();
    switch (p) {
        case SweepParameter::delta_tau:
            params.detunings = DetuningSpec::two_photon_resonant(value);
            break;
        case SweepParameter::T_over_tau:
            pulses.separation = value;
            break;
        case SweepParameter::ratio_omega:
            pulses.omega01 = value * pulses.omega02;
            break;
        case SweepParameter::delta_phase:
            pulses.phase = value;
            break;
        case SweepParameter::chi:
        case SweepParameter::chi_ratio: {
            const auto k1 = pulses.chirp1.kind();
            const auto k2 = pulses.chirp2.kind();
            if (k1 == ChirpKind::none || k2 == ChirpKind::none)
                throw InvalidArgument(fmt::format("sweeping {} needs both chirp kinds set to linear or tanh", to_string(p)));
            const bool ratio = p == SweepParameter::chi_ratio;
            pulses.chirp1 = ChirpProfile(k1, ratio ? 1.0 : value);
            pulses.chirp2 = ChirpProfile(k2, value);
            break;
        }
        case SweepParameter::chirp_kind: {
            if (value != 0.0 && value != 1.0 && value != 2.0)
                throw InvalidArgument("chirp_kind sweep values must be 0 (none), 1 (linear) or 2 (tanh)");
            const auto kind = static_cast<ChirpKind>(static_cast<int>(value));
            const double chi1 = pulses.chirp1.active() ? pulses.chirp1.chi() : 1.0;
            const double chi2 = pulses.chirp2.active() ? pulses.chirp2.chi() : 1.0;
            pulses.chirp1 = ChirpProfile(kind, chi1);
            pulses.chirp2 = ChirpProfile(kind, chi2);
            break;
        }
    }
    params.pulses = PulsePair(pulses);
    return SimulationConfig(params);
}

std::vector<double> linspace(double first, double last, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {first};
    std::vector<double> v(count);
    const double n = static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) v[k] = first + (last - first) * (static_cast<double>(k) / n);
    v.back() = last;
    return v;
}

namespace {

void validate_axis(const SweepAxis& axis, const SimulationConfig& base, std::string_view label) {
    if (axis.grid.empty()) throw InvalidArgument(fmt::format("{} grid is empty", label));
    if (axis.grid.size() > 1) {
        const bool up = axis.grid[1] > axis.grid[0];
        for (std::size_t k = 1; k < axis.grid.size(); ++k) {
            const bool ok = up ? axis.grid[k] > axis.grid[k - 1] : axis.grid[k] < axis.grid[k - 1];
            if (!ok) throw InvalidArgument(fmt::format("{} grid must be strictly monotone", label));
        }
    }
    for (double v : axis.grid) apply_override(base, axis.parameter, v);
}

SweepPoint evaluate_point(const SimulationConfig& cfg, double value, std::optional<double> series_value) {
    SweepPoint pt;
    pt.value = value;
    pt.series_value = series_value;
    try {
        const Trajectory tr = integrate(cfg);
        pt.populations = tr.final_populations();
        pt.phase = tr.phases.back();
        pt.max_norm_drift = tr.max_norm_drift;
        if (!cfg.pulses().chirped() && cfg.detunings().two_photon_resonant())
            pt.nonadiabaticity = nonadiabaticity(tr, cfg);
    } catch (const Error& e) {
        pt.error = e.what();
        pt.populations = {NAN, NAN, NAN};
    }
    return pt;
}

}  // namespace

SweepSpec::SweepSpec(SweepAxis axis, SimulationConfig base, std::optional<SweepAxis> series)
    : axis_(std::move(axis)), base_(std::move(base)), series_(std::move(series)) {
    if (series_) {
        if (series_->parameter == axis_.parameter)
            throw InvalidArgument("series parameter must differ from the sweep parameter");
        validate_axis(*series_, base_, "series");
        for (double s : series_->grid) validate_axis(axis_, apply_override(base_, series_->parameter, s), "sweep");
    } else {
        validate_axis(axis_, base_, "sweep");
    }
}

std::size_t SweepSpec::size() const noexcept {
    return axis_.grid.size() * (series_ ? series_->grid.size() : 1);
}

std::size_t default_workers() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("QROT_MAX_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(cap, &end, 10);
        if (end != cap && v > 0) n = std::min(n, static_cast<std::size_t>(v));
    }
    return n;
}

SweepResult run_sweep(const SweepSpec& spec, std::size_t workers) {
    struct Job {
        SimulationConfig cfg;
        double value;
        std::optional<double> series_value;
    };
    std::vector<Job> jobs;
    jobs.reserve(spec.size());
    const auto& axis = spec.axis();
    if (spec.series()) {
        for (double s : spec.series()->grid) {
            const auto base = apply_override(spec.base(), spec.series()->parameter, s);
            for (double v : axis.grid) jobs.push_back({apply_override(base, axis.parameter, v), v, s});
        }
    } else {
        for (double v : axis.grid) jobs.push_back({apply_override(spec.base(), axis.parameter, v), v, std::nullopt});
    }

    SweepResult result;
    result.points.resize(jobs.size());
    if (workers == 0) workers = default_workers();
    workers = std::min(workers, jobs.size());

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++)
            result.points[k] = evaluate_point(jobs[k].cfg, jobs[k].value, jobs[k].series_value);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return result;
}

SimulationConfig::Params preset_base_params() {
    SimulationConfig::Params p;
    PulsePair::Params pulses;
    pulses.omega01 = 15.0;
    pulses.omega02 = 15.0;
    pulses.separation = 4.0 / 3.0;
    p.pulses = PulsePair(pulses);
    p.detunings = DetuningSpec::two_photon_resonant(45.0);
    p.initial = InitialQubit::from_alpha(0.3, kPi / 2.0);
    return p;
}

const std::vector<std::string>& figure_preset_names() {
    static const std::vector<std::string> names{"fig2",  "fig2_inset", "fig3",  "fig4",  "fig5",
                                                "fig6",  "fig7",       "fig8",  "fig9",  "fig10",
                                                "fig11", "fig12",      "fig13", "fig14"};
    return names;
}

namespace {

constexpr std::size_t kGridPoints = 61;

SimulationConfig with(SimulationConfig::Params p, double delta_tau) {
    p.detunings = DetuningSpec::two_photon_resonant(delta_tau);
    return SimulationConfig(p);
}

SimulationConfig::Params chirped(ChirpKind kind) {
    auto p = preset_base_params();
    auto pulses = p.pulses.params();
    pulses.chirp1 = ChirpProfile(kind, 1.0);
    pulses.chirp2 = ChirpProfile(kind, 1.0);
    p.pulses = PulsePair(pulses);
    return p;
}

FigurePreset chirp_preset(std::string name, std::string description, ChirpKind kind, SweepParameter parameter) {
    const auto cfg = with(chirped(kind), 75.0);
    SweepSpec spec({parameter, linspace(-2.0, 2.0, kGridPoints)}, cfg,
                   SweepAxis{SweepParameter::delta_tau, {-75.0, 75.0}});
    return {std::move(name), std::move(description), cfg, spec};
}

}  // namespace

FigurePreset figure_preset(std::string_view name) {
    const auto base = preset_base_params();
    auto alpha_one = base;
    alpha_one.initial = InitialQubit(1.0, 0.0, kPi / 2.0);

    if (name == "fig2" || name == "fig5") {
        const auto cfg = with(base, 45.0);
        const char* what = name == "fig2" ? "populations vs time for D tau in {45, 60, 120}"
                                          : "relative phase cos(phi) vs time for D tau in {45, 60, 120}";
        return {std::string(name), what, cfg, SweepSpec({SweepParameter::delta_tau, {45.0, 60.0, 120.0}}, cfg)};
    }
    if (name == "fig2_inset") {
        const auto cfg = with(base, 45.0);
        return {"fig2_inset", "long-time P_g, P_f vs D tau in [30, 200]", cfg,
                SweepSpec({SweepParameter::delta_tau, linspace(30.0, 200.0, kGridPoints)}, cfg)};
    }
    if (name == "fig3") {
        const auto cfg = with(alpha_one, 45.0);
        return {"fig3", "long-time populations vs D tau for alpha = 1", cfg,
                SweepSpec({SweepParameter::delta_tau, linspace(0.0, 200.0, kGridPoints)}, cfg)};
    }
    if (name == "fig4") {
        const auto cfg = with(base, 75.0);
        return {"fig4", "long-time P_g, P_f vs pulse separation T / tau at D tau = 75", cfg,
                SweepSpec({SweepParameter::T_over_tau, linspace(0.0, 3.0, kGridPoints)}, cfg)};
    }
    if (name == "fig6") {
        const auto cfg = with(base, 75.0);
        return {"fig6", "long-time populations vs Omega_01 / Omega_02 at D tau = 75", cfg,
                SweepSpec({SweepParameter::ratio_omega, linspace(0.0, 3.0, kGridPoints)}, cfg)};
    }
    if (name == "fig7") {
        const auto cfg = with(alpha_one, 0.0);
        return {"fig7", "long-time populations vs Omega_01 / Omega_02 for alpha = 1, D = 0", cfg,
                SweepSpec({SweepParameter::ratio_omega, linspace(0.3, 2.0, kGridPoints)}, cfg)};
    }
    if (name == "fig8") return {"fig8", "full vs two-level populations at D tau = 30", with(base, 30.0), std::nullopt};
    if (name == "fig9") return {"fig9", "full vs two-level populations at D tau = 45", with(base, 45.0), std::nullopt};
    if (name == "fig10")
        return {"fig10", "adiabatic-state populations vs time at D tau = 60", with(base, 60.0), std::nullopt};
    if (name == "fig11")
        return chirp_preset("fig11", "linear chirp: long-time P_g, P_f vs chi1 = chi2 at D tau = +-75", ChirpKind::linear,
                            SweepParameter::chi);
    if (name == "fig12")
        return chirp_preset("fig12", "linear chirp: long-time P_g, P_f vs chi2 / chi1 (chi1 = 1) at D tau = +-75",
                            ChirpKind::linear, SweepParameter::chi_ratio);
    if (name == "fig13")
        return chirp_preset("fig13", "tanh chirp: long-time P_g, P_f vs chi1 = chi2 at D tau = +-75", ChirpKind::tanh,
                            SweepParameter::chi);
    if (name == "fig14")
        return chirp_preset("fig14", "tanh chirp: long-time P_g, P_f vs chi2 / chi1 (chi1 = 1) at D tau = +-75",
                            ChirpKind::tanh, SweepParameter::chi_ratio);

    throw InvalidArgument(
        fmt::format("unknown preset '{}'; valid presets: {}", name, fmt::join(figure_preset_names(), ", ")));
}

}  // namespace qrot
