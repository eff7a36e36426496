#include "qrot/output.hpp"

#include <fstream>

#include <fmt/core.h>

namespace qrot {

namespace {

std::string num(double x) { return format_double(x); }

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += (c == '\n' ? ' ' : c);
    }
    return out + "\"";
}

void append_row(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) out += ',';
        out += cells[k];
    }
    out += '\n';
}

}  // namespace

std::string comment_header(const std::string& title, const Sections& config) {
    std::string out = "# " + title + "\n";
    const std::string ini = to_ini(config);
    std::size_t start = 0;
    while (start < ini.size()) {
        const auto end = ini.find('\n', start);
        out += "# " + ini.substr(start, end - start) + "\n";
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

std::string trajectory_csv(const Trajectory& traj, const std::string& header,
                           const std::vector<AdiabaticPopulations>* adiabatic) {
    if (adiabatic && adiabatic->size() != traj.size())
        throw InvalidArgument("adiabatic populations do not match the trajectory");
    std::string out = header;
    std::vector<std::string> cols{"t_over_tau", "re_d_e", "im_d_e", "re_d_g", "im_d_g", "re_d_f", "im_d_f",
                                  "P_e",        "P_g",    "P_f",    "cos_phi", "phi"};
    if (adiabatic) cols.insert(cols.end(), {"P_a0", "P_a_plus", "P_a_minus"});
    append_row(out, cols);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& s = traj.states[i];
        const auto& p = traj.populations[i];
        const auto& ph = traj.phases[i];
        std::vector<std::string> row{num(traj.times[i]), num(s.e.real()), num(s.e.imag()), num(s.g.real()),
                                     num(s.g.imag()),    num(s.f.real()), num(s.f.imag()), num(p.e),
                                     num(p.g),           num(p.f),        ph ? num(ph->cos_phi) : "nan",
                                     ph ? num(ph->phi) : "nan"};
        if (adiabatic) {
            const auto& a = (*adiabatic)[i];
            row.insert(row.end(), {num(a.dark), num(a.plus), num(a.minus)});
        }
        append_row(out, row);
    }
    return out;
}

std::string sweep_csv(const SweepSpec& spec, const SweepResult& result, const std::string& header) {
    std::string out = header;
    std::vector<std::string> cols;
    if (spec.series()) cols.emplace_back(to_string(spec.series()->parameter));
    cols.emplace_back(to_string(spec.axis().parameter));
    cols.insert(cols.end(), {"P_e", "P_g", "P_f", "cos_phi", "phi", "nonadiabaticity", "max_norm_drift", "error"});
    append_row(out, cols);
    for (const auto& pt : result.points) {
        std::vector<std::string> row;
        if (spec.series()) row.push_back(num(pt.series_value.value_or(std::nan(""))));
        const bool ok = !pt.error;
        row.insert(row.end(), {num(pt.value), ok ? num(pt.populations.e) : "nan", ok ? num(pt.populations.g) : "nan",
                               ok ? num(pt.populations.f) : "nan", pt.phase ? num(pt.phase->cos_phi) : "nan",
                               pt.phase ? num(pt.phase->phi) : "nan",
                               pt.nonadiabaticity ? num(*pt.nonadiabaticity) : "nan", num(pt.max_norm_drift),
                               pt.error ? quote(*pt.error) : ""});
        append_row(out, row);
    }
    return out;
}

std::string two_level_csv(const Comparison& cmp, const std::string& header) {
    if (cmp.full.size() != cmp.reduced.times.size())
        throw InvalidArgument("full and reduced trajectories are sampled differently");
    std::string out = header;
    append_row(out, {"t_over_tau", "P_e_full", "P_g_full", "P_f_full", "P_g_two_level", "P_f_two_level", "dev_g",
                     "dev_f"});
    for (std::size_t i = 0; i < cmp.full.size(); ++i) {
        const auto& p = cmp.full.populations[i];
        const double g2 = cmp.reduced.p_g[i];
        const double f2 = cmp.reduced.p_f[i];
        append_row(out, {num(cmp.full.times[i]), num(p.e), num(p.g), num(p.f), num(g2), num(f2),
                         num(std::abs(p.g - g2)), num(std::abs(p.f - f2))});
    }
    return out;
}

std::string envelope_csv(const DesignedPulses& pulses, const std::vector<double>& times, const std::string& header) {
    std::string out = header;
    append_row(out, {"t_over_tau", "re_omega1", "im_omega1", "re_omega2", "im_omega2"});
    for (double t : times) {
        const auto w = pulses.at(t);
        append_row(out, {num(t), num(w.omega1.real()), num(w.omega1.imag()), num(w.omega2.real()),
                         num(w.omega2.imag())});
    }
    return out;
}

nlohmann::json control_json(const ControlProblem& problem, const ControlResult& result) {
    nlohmann::json j;
    auto& params = j["parameters"] = nlohmann::json::object();
    const auto& free = problem.params().free;
    for (std::size_t k = 0; k < free.size() && k < result.parameters.size(); ++k)
        params[std::string(to_string(free[k].parameter))] = result.parameters[k];
    auto value = [](const ObjectiveValue& v) {
        return nlohmann::json{{"objective", v.objective}, {"fidelity", v.fidelity}, {"P_e", v.excited}};
    };
    j["best"] = value(result.best);
    j["grid_best"] = value(result.grid_best);
    j["evaluations"] = result.evaluations;
    j["failed_evaluations"] = result.failed_evaluations;
    j["refinement_iterations"] = result.refinement_iterations;
    j["log"] = result.log;
    return j;
}

nlohmann::json manifest_json(const Manifest& m) {
    nlohmann::json j;
    j["command"] = m.command;
    j["preset"] = m.preset ? nlohmann::json(*m.preset) : nlohmann::json(nullptr);
    j["config"] = to_json(m.config);
    j["summary"] = m.summary;
    j["wall_seconds"] = m.wall_seconds;
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace qrot
