#pragma once

// Inverse search for pulse parameters whose long-time state matches a
// target qubit. Objective: fidelity(final, target) - leak_weight * P_e(final).

#include <cstddef>
#include <string>
#include <vector>

#include "qrot/sweep.hpp"
#include "qrot/types.hpp"

namespace qrot {

/// Raised when no objective evaluation succeeds.
class SolverError : public Error {
public:
    using Error::Error;
};

struct FreeParameter {
    SweepParameter parameter = SweepParameter::delta_tau;
    double lower = 0.0;
    double upper = 0.0;  // lower == upper pins the parameter
};

class ControlProblem {
public:
    struct Params {
        QubitVector target{};
        std::vector<FreeParameter> free;
        SimulationConfig base{};
        double leak_weight = 1.0;
        std::size_t grid_points = 11;  // per free dimension
        double tolerance = 1e-4;       // simplex size at convergence
        std::size_t max_iterations = 400;
    };

    explicit ControlProblem(Params p);

    const Params& params() const noexcept { return p_; }
    const QubitVector& target() const noexcept { return p_.target; }

    /// Base config with the free parameters set to `x`.
    SimulationConfig configure(const std::vector<double>& x) const;

private:
    Params p_;
};

struct ObjectiveValue {
    double objective = 0.0;
    double fidelity = 0.0;
    double excited = 0.0;
};

/// One forward simulation at `x`. Throws on integration failure.
ObjectiveValue evaluate_objective(const ControlProblem& problem, const std::vector<double>& x);

struct ControlResult {
    std::vector<double> parameters;
    ObjectiveValue best;
    ObjectiveValue grid_best;
    std::size_t evaluations = 0;
    std::size_t failed_evaluations = 0;
    std::size_t refinement_iterations = 0;
    std::vector<std::string> log;  // skipped points and refinement notes
};

/// Grid scan followed by bounded Nelder-Mead refinement. Deterministic for
/// fixed inputs regardless of `workers`.
ControlResult solve(const ControlProblem& problem, std::size_t workers = 0);

}  // namespace qrot
