// qrot: command-line front end.
//
//   qrot simulate  [--preset P] [--config F] [--out STEM] [--adiabatic] [--samples N]
//   qrot sweep     [--preset P] [--config F] [--out STEM] [--workers N]
//   qrot twolevel  [--preset P] [--config F] [--out STEM] [--samples N]
//   qrot stirap    [--config F] [--out STEM] [--scale S] [--stop-time T] [--samples N]
//   qrot solve     [--preset P] [--config F] [--out STEM] [--workers N]
//   qrot presets
//
// --config overlays the preset key by key. With --out, tables go to
// STEM.csv and a manifest to STEM.json; otherwise the table is printed.
//
// Exit codes: 0 ok, 1 I/O, 2 bad configuration, 3 integration or solver
// failure, 4 analysis outside its regime.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "qrot/analysis.hpp"
#include "qrot/approx2.hpp"
#include "qrot/config.hpp"
#include "qrot/control.hpp"
#include "qrot/dynamics.hpp"
#include "qrot/output.hpp"
#include "qrot/stirap.hpp"
#include "qrot/sweep.hpp"

namespace {

using namespace qrot;

enum Exit { kOk = 0, kIo = 1, kConfig = 2, kNumeric = 3, kRegime = 4 };

struct Options {
    std::string preset;
    std::string config;
    std::string out;
    bool adiabatic = false;
    std::optional<std::size_t> samples;
    std::size_t workers = 0;
    std::optional<double> scale;
    std::optional<double> stop_time;
};

struct Resolved {
    Sections sections;
    RunConfig run;
};

Resolved resolve(const Options& o) {
    Sections s;
    if (!o.preset.empty()) s = to_sections(from_preset(figure_preset(o.preset)));
    if (!o.config.empty()) s = overlay(std::move(s), load_sections(o.config));
    if (o.samples) s["integration"]["samples"] = std::to_string(*o.samples);
    if (o.adiabatic) s["output"]["adiabatic"] = "true";
    if (o.scale) s["stirap"]["scale"] = format_double(*o.scale);
    if (o.stop_time) s["stirap"]["stop_time_over_tau"] = format_double(*o.stop_time);
    RunConfig rc = parse_config(s);
    // Canonical form: every value explicit, so the manifest replays exactly.
    return {to_sections(rc), std::move(rc)};
}

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void warn_drift(double drift) {
    if (drift > 1e-6) fmt::print(stderr, "warning: norm drift {:.3g} exceeds 1e-6\n", drift);
}

void emit(const Options& o, const std::string& command, const Resolved& r, const std::string& table,
          const nlohmann::json& summary, const Clock& clock) {
    if (o.out.empty()) {
        std::fwrite(table.data(), 1, table.size(), stdout);
        return;
    }
    Manifest m{command, o.preset.empty() ? std::nullopt : std::optional<std::string>(o.preset), r.sections, summary,
               clock.seconds()};
    if (!table.empty()) write_text(o.out + ".csv", table);
    write_text(o.out + ".json", manifest_json(m).dump(2) + "\n");
    fmt::print("{}\n", summary.dump(2));
}

nlohmann::json phase_json(const std::optional<PhaseReading>& ph) {
    if (!ph) return nullptr;
    return {{"cos_phi", ph->cos_phi}, {"phi", ph->phi}};
}

int run_simulate(const Options& o) {
    Clock clock;
    const auto r = resolve(o);
    const auto& cfg = r.run.simulation;
    const auto traj = integrate(cfg);
    warn_drift(traj.max_norm_drift);

    std::vector<AdiabaticPopulations> adiabatic;
    nlohmann::json summary;
    if (r.run.adiabatic) {
        adiabatic = adiabatic_populations(traj, cfg);
        summary["nonadiabaticity"] = nonadiabaticity(adiabatic);
    }
    const auto& p = traj.final_populations();
    summary["final"] = {{"P_e", p.e}, {"P_g", p.g}, {"P_f", p.f}};
    summary["phase"] = phase_json(traj.phases.back());
    summary["max_norm_drift"] = traj.max_norm_drift;
    summary["accepted_steps"] = traj.accepted_steps;

    const auto table = trajectory_csv(traj, comment_header("qrot simulate", r.sections),
                                      r.run.adiabatic ? &adiabatic : nullptr);
    emit(o, "simulate", r, table, summary, clock);
    return kOk;
}

int run_sweep_cmd(const Options& o) {
    Clock clock;
    const auto r = resolve(o);
    if (!r.run.sweep) throw ConfigError("parameter", "sweep needs a [sweep] section or a sweep preset");
    const auto result = run_sweep(*r.run.sweep, o.workers);
    std::size_t failed = 0;
    double drift = 0.0;
    for (const auto& pt : result.points) {
        if (pt.error) ++failed;
        drift = std::max(drift, pt.max_norm_drift);
    }
    warn_drift(drift);
    if (failed) fmt::print(stderr, "warning: {} of {} sweep points failed\n", failed, result.points.size());
    nlohmann::json summary{{"points", result.points.size()}, {"failed", failed}, {"max_norm_drift", drift}};
    emit(o, "sweep", r, sweep_csv(*r.run.sweep, result, comment_header("qrot sweep", r.sections)), summary, clock);
    return kOk;
}

int run_twolevel(const Options& o) {
    Clock clock;
    const auto r = resolve(o);
    const auto cmp = compare_with_full(r.run.simulation);
    warn_drift(std::max(cmp.full.max_norm_drift, cmp.reduced.max_norm_drift));
    const auto& d = cmp.deviation;
    nlohmann::json summary{{"max_deviation_g", d.max_dev_g},     {"max_deviation_f", d.max_dev_f},
                           {"final_deviation_g", d.final_dev_g}, {"final_deviation_f", d.final_dev_f},
                           {"max_deviation", d.max_deviation()}, {"final_deviation", d.final_deviation()}};
    emit(o, "twolevel", r, two_level_csv(cmp, comment_header("qrot twolevel", r.sections)), summary, clock);
    return kOk;
}

int run_stirap(const Options& o) {
    Clock clock;
    const auto r = resolve(o);
    const auto& cfg = r.run.simulation;
    const DesignedPulses pulses(cfg.initial(), cfg.pulses().separation(), cfg.pulses().tau(), r.run.stirap_scale,
                                r.run.stirap_stop_time);
    const auto report = run_designed(pulses, cfg.window());
    warn_drift(report.trajectory.max_norm_drift);
    nlohmann::json summary{{"fidelity_target", report.fidelity_target},
                           {"fidelity_initial", report.fidelity_initial},
                           {"max_P_e", report.max_excited},
                           {"max_norm_drift", report.trajectory.max_norm_drift}};
    const auto header = comment_header("qrot stirap", r.sections);
    if (!o.out.empty())
        write_text(o.out + "_envelopes.csv", envelope_csv(pulses, report.trajectory.times, header));
    emit(o, "stirap", r, trajectory_csv(report.trajectory, header), summary, clock);
    return kOk;
}

int run_solve(const Options& o) {
    Clock clock;
    const auto r = resolve(o);
    if (!r.run.control) throw ConfigError("free", "solve needs a [solve] section");
    const auto result = solve(*r.run.control, o.workers);
    const auto summary = control_json(*r.run.control, result);
    if (o.out.empty()) {
        fmt::print("{}\n", summary.dump(2));
        return kOk;
    }
    emit(o, "solve", r, "", summary, clock);
    return kOk;
}

int guarded(int (*fn)(const Options&), const Options& o) {
    try {
        return fn(o);
    } catch (const ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kConfig;
    } catch (const InvalidArgument& e) {
        fmt::print(stderr, "invalid argument: {}\n", e.what());
        return kConfig;
    } catch (const IntegrationFailure& e) {
        fmt::print(stderr, "{}\n", e.what());
        return kNumeric;
    } catch (const SolverError& e) {
        fmt::print(stderr, "solver failed: {}\n", e.what());
        return kNumeric;
    } catch (const UnsupportedRegime& e) {
        fmt::print(stderr, "unsupported regime: {}\n", e.what());
        return kRegime;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kIo;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qubit rotation by Gaussian pulses in a double-Lambda system"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--preset", o.preset, "figure preset (see `qrot presets`)");
        sub->add_option("--config", o.config, "INI config or JSON manifest");
        sub->add_option("--out", o.out, "output file stem");
    };
    auto samples = [&](CLI::App* sub) {
        sub->add_option("--samples", o.samples, "output time samples")->check(CLI::PositiveNumber);
    };
    auto workers = [&](CLI::App* sub) {
        sub->add_option("--workers", o.workers, "worker threads (0 = automatic)");
    };

    auto* simulate = app.add_subcommand("simulate", "integrate one configuration");
    common(simulate);
    samples(simulate);
    simulate->add_flag("--adiabatic", o.adiabatic, "add adiabatic-state populations");

    auto* sweep = app.add_subcommand("sweep", "long-time observables over a parameter grid");
    common(sweep);
    workers(sweep);

    auto* twolevel = app.add_subcommand("twolevel", "compare with the effective two-level reduction");
    common(twolevel);
    samples(twolevel);

    auto* stirap = app.add_subcommand("stirap", "designed pulses for |i> -> |k> transfer");
    common(stirap);
    samples(stirap);
    stirap->add_option("--scale", o.scale, "envelope scale")->check(CLI::PositiveNumber);
    stirap->add_option("--stop-time", o.stop_time, "chop the pulses after this time (units of tau)");

    auto* solve_cmd = app.add_subcommand("solve", "search pulse parameters for a target qubit");
    common(solve_cmd);
    workers(solve_cmd);

    auto* presets = app.add_subcommand("presets", "list figure presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    if (*presets) {
        for (const auto& name : figure_preset_names())
            fmt::print("{:<12} {}\n", name, figure_preset(name).description);
        return kOk;
    }
    if (*simulate) return guarded(run_simulate, o);
    if (*sweep) return guarded(run_sweep_cmd, o);
    if (*twolevel) return guarded(run_twolevel, o);
    if (*stirap) return guarded(run_stirap, o);
    return guarded(run_solve, o);
}
