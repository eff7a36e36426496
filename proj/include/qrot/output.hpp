#pragma once

// Table and manifest writers. Floats are printed with 17 significant
// digits so files reproduce the in-memory doubles exactly; undefined
// values are written as "nan". Every table starts with '#' lines carrying
// the resolved configuration.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrot/analysis.hpp"
#include "qrot/approx2.hpp"
#include "qrot/config.hpp"
#include "qrot/control.hpp"
#include "qrot/stirap.hpp"
#include "qrot/sweep.hpp"

namespace qrot {

/// '#'-prefixed copy of the configuration in INI form.
std::string comment_header(const std::string& title, const Sections& config);

/// t_over_tau, re/im of d_e d_g d_f, P_e P_g P_f, cos_phi, phi
/// [, P_a0, P_a_plus, P_a_minus]
std::string trajectory_csv(const Trajectory& traj, const std::string& header,
                           const std::vector<AdiabaticPopulations>* adiabatic = nullptr);

/// [series,] value, P_e P_g P_f, cos_phi, phi, nonadiabaticity, max_norm_drift, error
std::string sweep_csv(const SweepSpec& spec, const SweepResult& result, const std::string& header);

/// Full and reduced ground populations side by side.
std::string two_level_csv(const Comparison& cmp, const std::string& header);

/// Designed envelopes on the given times.
std::string envelope_csv(const DesignedPulses& pulses, const std::vector<double>& times, const std::string& header);

nlohmann::json control_json(const ControlProblem& problem, const ControlResult& result);

struct Manifest {
    std::string command;
    std::optional<std::string> preset;
    Sections config;
    nlohmann::json summary = nlohmann::json::object();
    double wall_seconds = 0.0;
};

/// The "config" member can be passed back through --config.
nlohmann::json manifest_json(const Manifest& m);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qrot
