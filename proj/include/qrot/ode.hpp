#pragma once

// Adaptive propagation of linear amplitude equations d' = M(t) d.
//
// Steps are taken by a Dormand-Prince 4(5) pair with dense output. The
// window is split into segments at the requested breakpoints; no step ever
// straddles a breakpoint, and the generator is only evaluated strictly
// inside the current segment, so a generator that jumps at a breakpoint is
// seen as piecewise smooth. The state is never renormalized; the largest
// norm deviation over accepted steps is reported instead.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/numeric/odeint.hpp>

#include "qrot/types.hpp"

namespace qrot::ode {

template <std::size_t N>
using Amplitudes = std::array<cplx, N>;

template <std::size_t N>
using Matrix = Eigen::Matrix<cplx, static_cast<int>(N), static_cast<int>(N)>;

struct Settings {
    double t_start = -8.0;
    double t_end = 15.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t samples = 2301;
    std::vector<double> breakpoints;  // points outside (t_start, t_end) are ignored
    double initial_step = 1e-3;
    std::size_t max_steps = 1'000'000;  // typical runs need < 20k

    static Settings from(const IntegrationWindow& w) {
        Settings s;
        s.t_start = w.t_start;
        s.t_end = w.t_end;
        s.rel_tol = w.rel_tol;
        s.abs_tol = w.abs_tol;
        s.samples = w.samples;
        return s;
    }
};

template <std::size_t N>
struct Solution {
    std::vector<double> times;
    std::vector<Amplitudes<N>> states;
    double max_norm_drift = 0.0;
    std::size_t accepted_steps = 0;
};

template <std::size_t N>
double norm_squared(const Amplitudes<N>& x) {
    double s = 0.0;
    for (const auto& c : x) s += std::norm(c);
    return s;
}

namespace detail {

inline std::vector<double> segment_bounds(const Settings& s) {
    std::vector<double> b{s.t_start};
    std::vector<double> inner;
    for (double t : s.breakpoints)
        if (t > s.t_start && t < s.t_end) inner.push_back(t);
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    b.insert(b.end(), inner.begin(), inner.end());
    b.push_back(s.t_end);
    return b;
}

inline std::vector<double> sample_grid(const Settings& s) {
    IntegrationWindow w;
    w.t_start = s.t_start;
    w.t_end = s.t_end;
    w.samples = s.samples;
    return w.grid();
}

inline double time_scale(double t) { return std::max(1.0, std::abs(t)); }

}  // namespace detail

/// Propagates `initial` from s.t_start to s.t_end. `generator(t)` returns
/// the matrix M(t) as Matrix<N>. Throws IntegrationFailure on step-size
/// underflow, a non-finite state, or when max_steps is exceeded.
template <std::size_t N, class GeneratorFn>
Solution<N> propagate(GeneratorFn&& generator, const Amplitudes<N>& initial, const Settings& s) {
    namespace odeint = boost::numeric::odeint;
    using State = Amplitudes<N>;

    if (!(s.t_start < s.t_end)) throw InvalidArgument("propagation window must satisfy t_start < t_end");
    if (s.samples < 2) throw InvalidArgument("at least two output samples are required");
    if (!(s.rel_tol > 0.0 && s.abs_tol > 0.0)) throw InvalidArgument("integrator tolerances must be positive");

    Solution<N> out;
    out.times = detail::sample_grid(s);
    out.states.resize(out.times.size());

    const double reference_norm = norm_squared(initial);
    const auto bounds = detail::segment_bounds(s);

    auto stepper = odeint::make_dense_output(s.abs_tol, s.rel_tol, odeint::runge_kutta_dopri5<State>());

    State x = initial;
    std::size_t next_sample = 0;
    double dt = s.initial_step;

    for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
        const double a = bounds[seg];
        const double b = bounds[seg + 1];
        const double lo = seg == 0 ? a : std::nextafter(a, b);
        const double hi = seg + 2 == bounds.size() ? b : std::nextafter(b, a);
        const double end_slack = 1e-13 * detail::time_scale(b);

        auto rhs = [&](const State& y, State& dy, double t) {
            const Matrix<N> m = generator(std::clamp(t, lo, hi));
            for (std::size_t i = 0; i < N; ++i) {
                cplx acc{};
                for (std::size_t j = 0; j < N; ++j) acc += m(static_cast<int>(i), static_cast<int>(j)) * y[j];
                dy[i] = acc;
            }
        };

        while (next_sample < out.times.size() && out.times[next_sample] <= a) out.states[next_sample++] = x;

        stepper.initialize(x, a, std::min(dt, b - a));
        while (true) {
            std::pair<double, double> span;
            try {
                span = stepper.do_step(rhs);
            } catch (const odeint::step_adjustment_error& e) {
                throw IntegrationFailure(std::string("step size underflow (") + e.what() + ")",
                                         stepper.current_time());
            }
            const auto [t0, t1] = span;
            const State& current = stepper.current_state();
            const double n2 = norm_squared(current);
            if (!std::isfinite(n2)) throw IntegrationFailure("non-finite state", t1);
            out.max_norm_drift = std::max(out.max_norm_drift, std::abs(n2 - reference_norm));
            if (++out.accepted_steps > s.max_steps) throw IntegrationFailure("step budget exhausted", t1);

            const bool reached = t1 >= b - end_slack;
            const double sample_limit = reached ? b : t1;
            while (next_sample < out.times.size() && out.times[next_sample] <= sample_limit) {
                const double ts = out.times[next_sample];
                if (reached && ts >= t1)
                    out.states[next_sample] = current;
                else
                    stepper.calc_state(ts, out.states[next_sample]);
                ++next_sample;
            }
            if (reached) {
                x = current;
                dt = stepper.current_time_step();
                break;
            }

            const double next_dt = stepper.current_time_step();
            if (!(next_dt > 1e-13 * detail::time_scale(t1)))
                throw IntegrationFailure("step size underflow", t1);
            if (t1 + next_dt > b) stepper.initialize(current, t1, b - t1);
        }
    }
    while (next_sample < out.times.size()) out.states[next_sample++] = x;
    return out;
}

}  // namespace qrot::ode
