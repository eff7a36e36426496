#include <catch_amalgamated.hpp>

#include <cstring>

#include "qrot/dynamics.hpp"
#include "qrot/sweep.hpp"

using namespace qrot;
using Catch::Matchers::WithinAbs;

namespace {

SimulationConfig coarse(SimulationConfig cfg) {
    auto p = cfg.params();
    p.window.samples = 24;
    return SimulationConfig(p);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("parameter names round-trip") {
    for (auto p : {SweepParameter::delta_tau, SweepParameter::T_over_tau, SweepParameter::ratio_omega,
                   SweepParameter::delta_phase, SweepParameter::chi, SweepParameter::chi_ratio,
                   SweepParameter::chirp_kind})
        CHECK(sweep_parameter_from_string(to_string(p)) == p);
    CHECK_THROWS_AS(sweep_parameter_from_string("omega"), InvalidArgument);
}

TEST_CASE("overrides touch only their parameter") {
    const SimulationConfig base(preset_base_params());
    CHECK(apply_override(base, SweepParameter::delta_tau, 75.0).detunings().delta2() == 75.0);
    CHECK(apply_override(base, SweepParameter::T_over_tau, 2.0).pulses().separation() == 2.0);
    const auto r = apply_override(base, SweepParameter::ratio_omega, 0.5);
    CHECK(r.pulses().omega01() == 7.5);
    CHECK(r.pulses().omega02() == 15.0);
    CHECK(apply_override(base, SweepParameter::delta_phase, 1.0).pulses().phase() == 1.0);

    CHECK_THROWS_AS(apply_override(base, SweepParameter::chi, 1.0), InvalidArgument);
    const auto lin = apply_override(base, SweepParameter::chirp_kind, 1.0);
    CHECK(lin.pulses().chirp1().kind() == ChirpKind::linear);
    const auto ratio = apply_override(lin, SweepParameter::chi_ratio, -0.5);
    CHECK(ratio.pulses().chirp1().chi() == 1.0);
    CHECK(ratio.pulses().chirp2().chi() == -0.5);
    CHECK_THROWS_AS(apply_override(base, SweepParameter::chirp_kind, 1.5), InvalidArgument);
}

TEST_CASE("sweep spec validation") {
    const SimulationConfig base(preset_base_params());
    CHECK_THROWS_AS(SweepSpec({SweepParameter::delta_tau, {}}, base), InvalidArgument);
    CHECK_THROWS_AS(SweepSpec({SweepParameter::delta_tau, {1.0, 1.0}}, base), InvalidArgument);
    CHECK_THROWS_AS(SweepSpec({SweepParameter::delta_tau, {1.0, 3.0, 2.0}}, base), InvalidArgument);
    CHECK_NOTHROW(SweepSpec({SweepParameter::delta_tau, {3.0, 2.0, 1.0}}, base));
    CHECK_THROWS_AS(SweepSpec({SweepParameter::chi, {0.0, 1.0}}, base), InvalidArgument);
}

TEST_CASE("linspace endpoints") {
    const auto g = linspace(0.3, 2.0, 13);
    REQUIRE(g.size() == 13);
    CHECK(g.front() == 0.3);
    CHECK(g.back() == 2.0);
    CHECK(linspace(1.0, 2.0, 1) == std::vector<double>{1.0});
}

TEST_CASE("single-point sweep equals a direct integration") {
    const auto base = coarse(SimulationConfig(preset_base_params()));
    const auto res = run_sweep(SweepSpec({SweepParameter::delta_tau, {60.0}}, base), 1);
    REQUIRE(res.points.size() == 1);
    const auto tr = integrate(apply_override(base, SweepParameter::delta_tau, 60.0));
    CHECK(same_bits(res.points[0].populations.g, tr.final_populations().g));
    CHECK(same_bits(res.points[0].populations.f, tr.final_populations().f));
    REQUIRE(res.points[0].phase);
    CHECK(same_bits(res.points[0].phase->phi, tr.phases.back()->phi));
}

TEST_CASE("results are bitwise independent of worker count") {
    const auto base = coarse(SimulationConfig(preset_base_params()));
    const SweepSpec spec({SweepParameter::delta_tau, linspace(30.0, 120.0, 7)}, base,
                         SweepAxis{SweepParameter::T_over_tau, {1.0, 2.0}});
    const auto one = run_sweep(spec, 1);
    for (std::size_t w : {2u, 3u, 8u}) {
        const auto many = run_sweep(spec, w);
        REQUIRE(many.points.size() == one.points.size());
        for (std::size_t k = 0; k < one.points.size(); ++k) {
            CHECK(many.points[k].value == one.points[k].value);
            CHECK(many.points[k].series_value == one.points[k].series_value);
            CHECK(same_bits(many.points[k].populations.g, one.points[k].populations.g));
            CHECK(same_bits(many.points[k].populations.e, one.points[k].populations.e));
        }
    }
    // series-major order
    CHECK(*one.points[0].series_value == 1.0);
    CHECK(*one.points[7].series_value == 2.0);
    CHECK(one.points[1].value == linspace(30.0, 120.0, 7)[1]);
}

TEST_CASE("populations sum to one at every sweep point") {
    const auto res = run_sweep(*figure_preset("fig6").sweep, 0);
    for (const auto& p : res.points) {
        REQUIRE_FALSE(p.error);
        CHECK_THAT(p.populations.sum(), WithinAbs(1.0, 1e-8));
    }
}

TEST_CASE("failing points are recorded without aborting") {
    auto p = preset_base_params();
    p.window.rel_tol = p.window.abs_tol = 1e-30;
    p.window.samples = 2;
    const SweepSpec spec({SweepParameter::ratio_omega, {0.5, 1.0}}, SimulationConfig(p));
    const auto res = run_sweep(spec, 1);
    REQUIRE(res.points.size() == 2);
    for (const auto& pt : res.points) {
        CHECK(pt.error);
        CHECK(std::isnan(pt.populations.g));
    }
}

TEST_CASE("delta sweep for alpha = 1 is flat") {
    auto p = preset_base_params();
    p.initial = InitialQubit();
    const auto res = run_sweep(SweepSpec({SweepParameter::delta_phase, linspace(0.0, 2.0 * kPi, 9)},
                                         coarse(SimulationConfig(p))));
    for (const auto& pt : res.points) {
        CHECK_THAT(pt.populations.g, WithinAbs(res.points[0].populations.g, 1e-9));
        CHECK_THAT(pt.populations.f, WithinAbs(res.points[0].populations.f, 1e-9));
    }
}

TEST_CASE("figure presets") {
    for (const auto& name : figure_preset_names()) CHECK_NOTHROW(figure_preset(name));
    try {
        figure_preset("fig99");
        FAIL("expected an error");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("fig14") != std::string::npos);
    }

    const auto fig2 = figure_preset("fig2");
    REQUIRE(fig2.sweep);
    CHECK(fig2.sweep->axis().grid == std::vector<double>{45.0, 60.0, 120.0});
    CHECK_THAT(fig2.config.pulses().separation(), WithinAbs(4.0 / 3.0, 1e-15));
    CHECK(fig2.config.detunings().delta1() == 45.0);

    const auto fig6 = figure_preset("fig6");
    CHECK(fig6.sweep->axis().parameter == SweepParameter::ratio_omega);
    CHECK(fig6.config.detunings().delta1() == 75.0);
    CHECK(fig6.config.pulses().omega02() == 15.0);

    const auto fig7 = figure_preset("fig7");
    CHECK(fig7.config.initial().alpha() == 1.0);
    CHECK(fig7.config.detunings().delta1() == 0.0);

    const auto fig12 = figure_preset("fig12");
    CHECK(fig12.sweep->axis().parameter == SweepParameter::chi_ratio);
    REQUIRE(fig12.sweep->series());
    CHECK(fig12.sweep->series()->grid == std::vector<double>{-75.0, 75.0});
    CHECK(fig12.config.pulses().chirp1().kind() == ChirpKind::linear);
    CHECK(figure_preset("fig13").config.pulses().chirp2().kind() == ChirpKind::tanh);
    CHECK(figure_preset("fig3").config.initial().alpha() == 1.0);
}

TEST_CASE("worker cap from the environment") {
    ::setenv("QROT_MAX_WORKERS", "1", 1);
    CHECK(default_workers() == 1);
    ::unsetenv("QROT_MAX_WORKERS");
    CHECK(default_workers() >= 1);
}
