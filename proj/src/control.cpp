#include "qrot/control.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include <fmt/core.h>
#include <fmt/ranges.h>
#include <gsl/gsl_multimin.h>

#include "qrot/analysis.hpp"
#include "qrot/dynamics.hpp"

namespace qrot {

namespace {

// Value returned to the minimizer for points where the simulation failed.
constexpr double kFailurePenalty = 1e6;

struct Evaluation {
    std::vector<double> x;
    std::optional<ObjectiveValue> value;
    std::string error;
};

Evaluation try_evaluate(const ControlProblem& problem, const std::vector<double>& x) {
    Evaluation e{x, std::nullopt, {}};
    try {
        e.value = evaluate_objective(problem, x);
    } catch (const Error& err) {
        e.error = err.what();
    }
    return e;
}

struct Refinement {
    const ControlProblem* problem;
    std::vector<std::size_t> dims;  // indices of non-pinned parameters
    std::vector<double> anchor;     // full parameter vector; pinned entries fixed
    std::optional<Evaluation> best;
    std::size_t evaluations = 0;
    std::size_t failures = 0;
    std::vector<std::string>* log;

    std::vector<double> expand(const gsl_vector* v, double* outside) const {
        std::vector<double> x = anchor;
        *outside = 0.0;
        const auto& free = problem->params().free;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            const auto& fp = free[dims[k]];
            const double raw = gsl_vector_get(v, k);
            const double clamped = std::clamp(raw, fp.lower, fp.upper);
            *outside += std::abs(raw - clamped) / (fp.upper - fp.lower);
            x[dims[k]] = clamped;
        }
        return x;
    }

    static double cost(const gsl_vector* v, void* self_ptr) {
        auto& self = *static_cast<Refinement*>(self_ptr);
        double outside = 0.0;
        const auto x = self.expand(v, &outside);
        auto e = try_evaluate(*self.problem, x);
        ++self.evaluations;
        if (!e.value) {
            ++self.failures;
            self.log->push_back(fmt::format("refinement point [{}] skipped: {}", fmt::join(x, ", "), e.error));
            return kFailurePenalty;
        }
        const double obj = e.value->objective;
        if (!self.best || obj > self.best->value->objective) self.best = std::move(e);
        return -obj + outside;
    }
};

// Grid in lexicographic order, first parameter slowest.
std::vector<std::vector<double>> scan_points(const ControlProblem& problem) {
    const auto& p = problem.params();
    std::vector<std::vector<double>> axes;
    for (const auto& fp : p.free)
        axes.push_back(fp.lower == fp.upper ? std::vector<double>{fp.lower}
                                            : linspace(fp.lower, fp.upper, p.grid_points));
    std::vector<std::vector<double>> pts{{}};
    for (const auto& axis : axes) {
        std::vector<std::vector<double>> next;
        next.reserve(pts.size() * axis.size());
        for (const auto& prefix : pts)
            for (double v : axis) {
                auto x = prefix;
                x.push_back(v);
                next.push_back(std::move(x));
            }
        pts = std::move(next);
    }
    return pts;
}

}  // namespace

ControlProblem::ControlProblem(Params p) : p_(std::move(p)) {
    if (p_.free.empty()) throw InvalidArgument("control problem needs at least one free parameter");
    for (const auto& fp : p_.free) {
        if (!std::isfinite(fp.lower) || !std::isfinite(fp.upper) || fp.lower > fp.upper)
            throw InvalidArgument(
                fmt::format("bounds for {} must be finite with lower <= upper", to_string(fp.parameter)));
        if (fp.parameter == SweepParameter::chi_ratio || fp.parameter == SweepParameter::chirp_kind)
            throw InvalidArgument(fmt::format("{} is not a control parameter", to_string(fp.parameter)));
        apply_override(p_.base, fp.parameter, fp.lower);
    }
    for (std::size_t a = 0; a < p_.free.size(); ++a)
        for (std::size_t b = a + 1; b < p_.free.size(); ++b)
            if (p_.free[a].parameter == p_.free[b].parameter)
                throw InvalidArgument(fmt::format("free parameter {} listed twice", to_string(p_.free[a].parameter)));
    const double n = p_.target.norm();
    if (!(std::abs(n - 1.0) <= 1e-9)) throw InvalidArgument(fmt::format("target must be normalized (norm = {})", n));
    if (!(p_.leak_weight >= 0.0)) throw InvalidArgument("leak weight must be non-negative");
    if (p_.grid_points < 2) throw InvalidArgument("grid scan needs at least two points per dimension");
    if (!(p_.tolerance > 0.0)) throw InvalidArgument("refinement tolerance must be positive");
}

SimulationConfig ControlProblem::configure(const std::vector<double>& x) const {
    if (x.size() != p_.free.size()) throw InvalidArgument("parameter vector has the wrong dimension");
    SimulationConfig cfg = p_.base;
    for (std::size_t k = 0; k < x.size(); ++k) cfg = apply_override(cfg, p_.free[k].parameter, x[k]);
    return cfg;
}

ObjectiveValue evaluate_objective(const ControlProblem& problem, const std::vector<double>& x) {
    auto params = problem.configure(x).params();
    params.window.samples = 2;  // only the final state is needed
    const SimulationConfig cfg(params);
    const Trajectory tr = integrate(cfg);
    ObjectiveValue v;
    v.fidelity = fidelity(tr.final_state(), cfg.t_end(), cfg, problem.target());
    v.excited = tr.final_populations().e;
    v.objective = v.fidelity - problem.params().leak_weight * v.excited;
    return v;
}

ControlResult solve(const ControlProblem& problem, std::size_t workers) {
    const auto& p = problem.params();
    ControlResult result;

    // coarse scan
    const auto pts = scan_points(problem);
    std::vector<Evaluation> evals(pts.size());
    if (workers == 0) workers = default_workers();
    workers = std::min(workers, pts.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < pts.size(); k = next++) evals[k] = try_evaluate(problem, pts[k]);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    const Evaluation* best = nullptr;
    for (const auto& e : evals) {
        ++result.evaluations;
        if (!e.value) {
            ++result.failed_evaluations;
            result.log.push_back(fmt::format("grid point [{}] skipped: {}", fmt::join(e.x, ", "), e.error));
            continue;
        }
        // strict comparison keeps the lexicographically first of equal optima
        if (!best || e.value->objective > best->value->objective) best = &e;
    }
    if (!best) throw SolverError("every objective evaluation failed during the grid scan");
    result.grid_best = *best->value;
    result.best = *best->value;
    result.parameters = best->x;

    // local refinement over the non-pinned dimensions
    Refinement ref{&problem, {}, best->x, std::nullopt, 0, 0, &result.log};
    for (std::size_t k = 0; k < p.free.size(); ++k)
        if (p.free[k].lower < p.free[k].upper) ref.dims.push_back(k);

    if (!ref.dims.empty()) {
        const std::size_t n = ref.dims.size();
        gsl_vector* x0 = gsl_vector_alloc(n);
        gsl_vector* step = gsl_vector_alloc(n);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& fp = p.free[ref.dims[k]];
            gsl_vector_set(x0, k, best->x[ref.dims[k]]);
            gsl_vector_set(step, k, 0.5 * (fp.upper - fp.lower) / static_cast<double>(p.grid_points - 1));
        }
        gsl_multimin_function fn{&Refinement::cost, n, &ref};
        gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
        gsl_multimin_fminimizer_set(m, &fn, x0, step);

        int status = GSL_CONTINUE;
        std::size_t iter = 0;
        while (status == GSL_CONTINUE && iter < p.max_iterations) {
            ++iter;
            if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) {
                result.log.push_back("refinement stopped: simplex could not improve");
                break;
            }
            status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), p.tolerance);
        }
        if (status == GSL_CONTINUE)
            result.log.push_back(fmt::format("refinement hit the iteration cap ({})", p.max_iterations));
        result.refinement_iterations = iter;

        gsl_multimin_fminimizer_free(m);
        gsl_vector_free(step);
        gsl_vector_free(x0);

        result.evaluations += ref.evaluations;
        result.failed_evaluations += ref.failures;
        if (ref.best && ref.best->value->objective > result.best.objective) {
            result.best = *ref.best->value;
            result.parameters = ref.best->x;
        }
    }
    return result;
}

}  // namespace qrot
