// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "qrot/analysis.hpp"
#include "qrot/approx2.hpp"
#include "qrot/control.hpp"
#include "qrot/dynamics.hpp"
#include "qrot/stirap.hpp"
#include "qrot/sweep.hpp"
#include "support/rk4_oracle.hpp"

using namespace qrot;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

SimulationConfig::Params base_with(double delta_tau) {
    auto p = preset_base_params();
    p.detunings = DetuningSpec::two_photon_resonant(delta_tau);
    return p;
}

// 1. Norm conservation over every preset run and sweep point.
Outcome norm_conservation() {
    double worst = 0.0;
    std::size_t runs = 0;
    std::string failed;
    for (const auto& name : figure_preset_names()) {
        const auto preset = figure_preset(name);
        worst = std::max(worst, integrate(preset.config).max_norm_drift);
        ++runs;
        if (!preset.sweep) continue;
        for (const auto& pt : run_sweep(*preset.sweep).points) {
            ++runs;
            if (pt.error) failed = name + ": " + *pt.error;
            worst = std::max(worst, pt.max_norm_drift);
        }
    }
    if (!failed.empty()) return {false, "integration failed (" + failed + ")"};
    return {worst <= 1e-8, fmt::format("max |norm^2 - 1| = {:.3g} over {} runs (tol 1e-8)", worst, runs)};
}

// 2. Resonant single pulse; closed form P_e = sin^2(A / 2), A = 2 sqrt(pi) Omega_01 tau.
Outcome rabi_oracle() {
    auto run = [](double area) {
        auto p = base_with(0.0);
        p.initial = InitialQubit();
        auto pp = p.pulses.params();
        pp.omega02 = 0.0;
        pp.omega01 = area / (2.0 * std::sqrt(kPi));
        p.pulses = PulsePair(pp);
        return integrate(SimulationConfig(p)).final_populations();
    };
    const auto pi = run(kPi);
    const auto two_pi = run(2.0 * kPi);
    const double expect_pi = std::pow(std::sin(kPi / 2.0), 2);
    const double expect_2pi = 1.0 - std::pow(std::sin(kPi), 2);
    const double err_pi = std::abs(pi.e - expect_pi);
    const double err_2pi = std::abs(two_pi.g - expect_2pi);
    return {err_pi <= 1e-6 && err_2pi <= 1e-6,
            fmt::format("area pi: |P_e - 1| = {:.3g}; area 2pi: |P_g - 1| = {:.3g} (tol 1e-6)", err_pi, err_2pi)};
}

// 3. Adaptive vs fixed-step RK4 at h = 1e-4 tau.
Outcome integrator_oracle() {
    auto fig7 = figure_preset("fig7");
    auto fig11 = figure_preset("fig11");
    const std::vector<std::pair<std::string, SimulationConfig>> cases{
        {"fig2", figure_preset("fig2").config},
        {"fig7 ratio=0.3", apply_override(fig7.config, SweepParameter::ratio_omega, 0.3)},
        {"fig11 chi=1", apply_override(apply_override(fig11.config, SweepParameter::delta_tau, 75.0),
                                       SweepParameter::chi, 1.0)},
    };
    bool ok = true;
    std::string detail;
    for (const auto& [label, cfg0] : cases) {
        auto p = cfg0.params();
        p.window.samples = 231;
        const SimulationConfig cfg(p);
        const auto tr = integrate(cfg);
        const auto s0 = cfg.initial_state();
        const auto ref = oracle::rk4([&](double t) { return assemble_generator(t, cfg); },
                                     oracle::Vec3(s0.e, s0.g, s0.f), cfg.t_start(), 1e-4, 230000, 1000);
        double worst = 0.0;
        for (std::size_t k = 0; k < tr.size(); ++k) {
            const auto& s = tr.states[k];
            const cplx a[] = {s.e, s.g, s.f};
            for (int c = 0; c < 3; ++c) {
                worst = std::max(worst, std::abs(a[c].real() - ref.states[k][c].real()));
                worst = std::max(worst, std::abs(a[c].imag() - ref.states[k][c].imag()));
            }
        }
        ok = ok && worst <= 1e-6;
        detail += fmt::format("{}{}: {:.3g}", detail.empty() ? "" : "; ", label, worst);
    }
    return {ok, "max component difference " + detail + " (tol 1e-6)"};
}

// 4. alpha = 1: relative pulse phase drops out.
Outcome delta_gauge() {
    const auto base = figure_preset("fig3").config;
    const auto ref = integrate(apply_override(base, SweepParameter::delta_phase, 0.0)).final_populations();
    double worst = 0.0;
    for (double d : {kPi / 4.0, kPi, 3.0 * kPi / 2.0}) {
        const auto p = integrate(apply_override(base, SweepParameter::delta_phase, d)).final_populations();
        worst = std::max({worst, std::abs(p.e - ref.e), std::abs(p.g - ref.g), std::abs(p.f - ref.f)});
    }
    return {worst <= 1e-9, fmt::format("max population change across delta = {:.3g} (tol 1e-9)", worst)};
}

// 5. Orthogonal rotation plateau.
Outcome fig7_plateau() {
    const auto base = figure_preset("fig7").config;
    const auto res = run_sweep(SweepSpec({SweepParameter::ratio_omega, linspace(0.3, 2.0, 13)}, base));
    double low = 1.0;
    for (const auto& pt : res.points) low = pt.error ? -1.0 : std::min(low, pt.populations.f);
    return {low >= 0.99, fmt::format("min P_f(15 tau) over 13 ratios = {:.6f} (need >= 0.99)", low)};
}

// 6. Equal superposition with phase 2 pi / 3 near D tau = 180.
Outcome inset_landmark() {
    const auto tr = integrate(SimulationConfig(base_with(180.0)));
    const auto& p = tr.final_populations();
    const auto& ph = tr.phases.back();
    if (!ph) return {false, "phase undefined at t_end"};
    const double dg = std::abs(p.g - 0.5);
    const double dphi = std::abs(ph->phi - 2.0 * kPi / 3.0);
    return {dg <= 0.05 && dphi <= 0.1,
            fmt::format("P_g = {:.4f} (|P_g - 0.5| <= 0.05), phi = {:.4f} (|phi - 2pi/3| = {:.4f} <= 0.1)", p.g,
                        ph->phi, dphi)};
}

// 7. Populations and phase settle by t = 13 tau.
Outcome stationarity() {
    bool ok = true;
    std::string detail;
    const auto fig2 = figure_preset("fig2");
    for (double d : fig2.sweep->axis().grid) {
        const auto tr = integrate(SimulationConfig(base_with(d)));
        double lo[3] = {2, 2, 2}, hi[3] = {-2, -2, -2};
        bool defined = true;
        for (std::size_t k = 0; k < tr.size(); ++k) {
            if (tr.times[k] < 13.0) continue;
            if (!tr.phases[k]) defined = false;
            const double v[3] = {tr.populations[k].g, tr.populations[k].f, tr.phases[k] ? tr.phases[k]->cos_phi : 0.0};
            for (int c = 0; c < 3; ++c) {
                lo[c] = std::min(lo[c], v[c]);
                hi[c] = std::max(hi[c], v[c]);
            }
        }
        const double var = std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
        const double pe = tr.final_populations().e;
        ok = ok && defined && var < 1e-3 && pe < 0.01;
        detail += fmt::format("{}D tau={}: variation {:.2g}, P_e {:.2g}", detail.empty() ? "" : "; ", d, var, pe);
    }
    return {ok, detail + " (variation < 1e-3, P_e < 0.01)"};
}

// 8. Two-level reduction improves with detuning.
Outcome two_level() {
    std::vector<double> dev;
    std::string detail;
    for (double d : {30.0, 45.0, 60.0, 120.0}) {
        dev.push_back(compare_with_full(SimulationConfig(base_with(d))).deviation.final_deviation());
        detail += fmt::format("{}{}: {:.4f}", detail.empty() ? "" : ", ", d, dev.back());
    }
    bool mono = true;
    for (std::size_t k = 1; k < dev.size(); ++k) mono = mono && dev[k] <= dev[k - 1];
    return {mono && dev.back() <= 0.05,
            "final deviation by D tau " + detail + (mono ? " (monotone" : " (NOT monotone") + ", D tau=120 <= 0.05)"};
}

// 9. Designed-pulse transfer to the orthogonal state.
Outcome designed_transfer() {
    const auto r = orthogonal_transfer(InitialQubit::from_alpha(0.3, kPi / 2.0), 4.0 / 3.0, 1.0, 15.0);
    return {r.fidelity_target >= 0.99 && r.max_excited <= 0.02,
            fmt::format("fidelity to |k> = {:.6f} (>= 0.99), max P_e = {:.4f} (<= 0.02)", r.fidelity_target,
                        r.max_excited)};
}

// 10. Population exchange between adiabatic states.
Outcome nonadiabatic_signature() {
    const auto cfg = figure_preset("fig10").config;
    const auto pops = adiabatic_populations(integrate(cfg), cfg);
    double lo0 = 2, hi0 = -2, lop = 2, hip = -2;
    for (const auto& p : pops) {
        lo0 = std::min(lo0, p.dark);
        hi0 = std::max(hi0, p.dark);
        lop = std::min(lop, p.plus);
        hip = std::max(hip, p.plus);
    }
    return {hi0 - lo0 > 0.2 && hip - lop > 0.2,
            fmt::format("a0 range {:.3f}, a+ range {:.3f} (each > 0.2)", hi0 - lo0, hip - lop)};
}

// 11. Chirped pulses on one-photon resonance.
Outcome chirp_cases() {
    const auto grid = linspace(-2.0, 2.0, 61);
    double null_worst = 0.0;
    double orth_low = 1.0;
    std::string where;
    for (ChirpKind kind : {ChirpKind::linear, ChirpKind::tanh}) {
        for (double alpha : {0.3, 1.0}) {
            auto p = base_with(0.0);
            p.initial = InitialQubit::from_alpha(alpha, kPi / 2.0);
            const auto base = apply_override(SimulationConfig(p), SweepParameter::chirp_kind,
                                             static_cast<double>(static_cast<int>(kind)));
            for (const auto& pt : run_sweep(SweepSpec({SweepParameter::chi, grid}, base)).points) {
                if (pt.error) return {false, "integration failed: " + *pt.error};
                if (alpha == 1.0) {
                    orth_low = std::min(orth_low, pt.populations.f);
                    continue;
                }
                const double a2 = alpha * alpha;
                const double dev = std::max({std::abs(pt.populations.g - a2), std::abs(pt.populations.f - (1.0 - a2)),
                                             pt.populations.e});
                if (dev > null_worst) {
                    null_worst = dev;
                    where = fmt::format("{} chi={:.3g}: P=({:.3f}, {:.3f}, {:.3f})", to_string(kind), pt.value,
                                        pt.populations.e, pt.populations.g, pt.populations.f);
                }
            }
        }
    }
    const bool null_ok = null_worst <= 0.05;
    const bool orth_ok = orth_low >= 0.95;
    return {null_ok && orth_ok,
            fmt::format("alpha=0.3: max deviation from initial = {:.3f} (<= 0.05) [{}] {}; alpha=1: min P_f = {:.4f} "
                        "(>= 0.95) {}",
                        null_worst, where, null_ok ? "ok" : "FAILS", orth_low, orth_ok ? "ok" : "FAILS")};
}

// 12. Forward simulate, invert, re-simulate.
Outcome control_round_trip() {
    const SimulationConfig forward(base_with(75.0));
    const auto tr = integrate(forward);
    const QubitVector target = bare_ground_amplitudes(tr.final_state(), forward.t_end(), forward).normalized();

    ControlProblem::Params p;
    p.target = target;
    p.free = {{SweepParameter::delta_tau, 30.0, 200.0}};
    p.base = SimulationConfig(base_with(45.0));
    const ControlProblem problem(p);
    const auto res = solve(problem);

    const SimulationConfig recovered = problem.configure(res.parameters);
    const auto check = integrate(recovered);
    const double fid = fidelity(check.final_state(), recovered.t_end(), recovered, target);
    return {fid >= 0.999, fmt::format("recovered D tau = {:.6f}, independent re-simulation fidelity = {:.8f} (>= 0.999)",
                                      res.parameters[0], fid)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"norm conservation", norm_conservation},
        {"resonant pulse-area oracle", rabi_oracle},
        {"fixed-step RK4 oracle", integrator_oracle},
        {"relative-phase gauge invariance", delta_gauge},
        {"orthogonal-rotation plateau", fig7_plateau},
        {"equal superposition at D tau = 180", inset_landmark},
        {"long-time stationarity", stationarity},
        {"two-level reduction", two_level},
        {"designed-pulse transfer", designed_transfer},
        {"nonadiabatic transfer", nonadiabatic_signature},
        {"chirp null / orthogonal cases", chirp_cases},
        {"control round trip", control_round_trip},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > 30.0) {
            o.pass = false;
            o.detail += fmt::format(" [exceeded 30 s]");
        }
        if (!o.pass) ++failures;
        fmt::print("{} {:>2} {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail, secs);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
