#pragma once

// Run configuration: sectioned `key = value` files (INI style) and the
// JSON manifests written next to every output. Both map onto the same
// section/key table, so a manifest can be fed back as a config.
//
//   [pulses]       omega01_tau omega02_tau T_over_tau delta_phase
//                  chirp1_kind chi1 chirp2_kind chi2
//   [detuning]     delta_tau | delta1_tau delta2_tau
//   [qubit]        alpha [beta] phi | g1 g2 phi
//   [integration]  t_start_over_tau t_end_over_tau samples rel_tol abs_tol
//   [sweep]        parameter grid [series_parameter series_grid]
//   [stirap]       scale [stop_time_over_tau]
//   [solve]        target_alpha target_phi | target_g_re target_g_im
//                  target_f_re target_f_im; free leak_weight grid_points
//                  tolerance
//   [output]       adiabatic
//
// Keys may also appear at top level without a section header. Grids are
// either "first:last:count" or a comma-separated list; numbers accept the
// forms "4/3", "pi", "pi/2", "2*pi/3".

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qrot/control.hpp"
#include "qrot/sweep.hpp"
#include "qrot/types.hpp"

namespace qrot {

/// Malformed or inconsistent configuration; names the offending key.
class ConfigError : public InvalidArgument {
public:
    ConfigError(std::string key, const std::string& message);
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

using Sections = std::map<std::string, std::map<std::string, std::string>>;

struct RunConfig {
    SimulationConfig simulation{};
    std::optional<SweepSpec> sweep;
    double stirap_scale = 15.0;
    std::optional<double> stirap_stop_time;
    std::optional<ControlProblem> control;
    bool adiabatic = false;
};

Sections parse_ini(std::string_view text);
Sections sections_from_json(const nlohmann::json& config);

/// Later sections override earlier ones key by key. Setting delta_tau
/// replaces delta1_tau/delta2_tau and vice versa; likewise for the
/// alternative qubit and target forms.
Sections overlay(Sections base, const Sections& top);

RunConfig parse_config(const Sections& sections);

/// Reads an INI file, or a JSON manifest (its "config" object).
Sections load_sections(const std::filesystem::path& path);

Sections to_sections(const RunConfig& rc);
nlohmann::json to_json(const Sections& sections);
std::string to_ini(const Sections& sections);

RunConfig from_preset(const FigurePreset& preset);

double parse_number(std::string_view text, std::string_view key);
std::vector<double> parse_grid(std::string_view text, std::string_view key);
std::string format_double(double x);

}  // namespace qrot
