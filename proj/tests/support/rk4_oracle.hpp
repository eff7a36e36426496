#pragma once

// Fixed-step classical Runge-Kutta, written independently of the adaptive
// integrator so the two can be compared.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Vec3 = Eigen::Vector3cd;

struct Rk4Result {
    std::vector<double> times;
    std::vector<Vec3> states;
};

/// Integrates x' = M(t) x from t0 with step h and records the state every
/// `stride` steps. `steps` must be a multiple of `stride`.
template <class Generator>
Rk4Result rk4(Generator&& M, Vec3 x, double t0, double h, std::size_t steps, std::size_t stride) {
    Rk4Result out;
    out.times.push_back(t0);
    out.states.push_back(x);
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = t0 + static_cast<double>(n) * h;
        const Vec3 k1 = M(t) * x;
        const Vec3 k2 = M(t + h / 2) * (x + h / 2 * k1);
        const Vec3 k3 = M(t + h / 2) * (x + h / 2 * k2);
        const Vec3 k4 = M(t + h) * (x + h * k3);
        x += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((n + 1) % stride == 0) {
            out.times.push_back(t0 + static_cast<double>(n + 1) * h);
            out.states.push_back(x);
        }
    }
    return out;
}

}  // namespace oracle
