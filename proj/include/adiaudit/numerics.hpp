#pragma once

#include <cmath>
#include <vector>

#include "adiaudit/types.hpp"

namespace adiaudit {

/// Cumulative trapezoid integral of samples y on a uniform grid with spacing h.
/// result[0] = 0, result[k] = integral up to sample k.
inline RealVector cumulative_trapezoid(const RealVector& y, double h) {
    RealVector out(y.size());
    out[0] = 0.0;
    for (Eigen::Index k = 1; k < y.size(); ++k) {
        out[k] = out[k - 1] + 0.5 * h * (y[k - 1] + y[k]);
    }
    return out;
}

/// Derivative of a complex series on a uniform grid: central differences in the
/// interior, second-order one-sided at the endpoints.
inline Vector central_difference(const Vector& y, double h) {
    const Eigen::Index n = y.size();
    Vector out(n);
    if (n < 3) {
        // Degenerate: fall back to the secant.
        const Complex d = n == 2 ? (y[1] - y[0]) / h : Complex{0.0, 0.0};
        out.setConstant(d);
        return out;
    }
    out[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
    for (Eigen::Index k = 1; k + 1 < n; ++k) {
        out[k] = (y[k + 1] - y[k - 1]) / (2.0 * h);
    }
    out[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
    return out;
}

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
    const double two_pi = 2.0 * M_PI;
    a = std::fmod(a, two_pi);
    if (a <= -M_PI) a += two_pi;
    if (a > M_PI) a -= two_pi;
    return a;
}

/// Accumulate the argument of a complex series without 2*pi jumps between
/// consecutive samples. phase[0] = arg(y[0]).
inline RealVector unwrap_arg(const Vector& y) {
    RealVector phase(y.size());
    if (y.size() == 0) return phase;
    phase[0] = std::arg(y[0]);
    for (Eigen::Index k = 1; k < y.size(); ++k) {
        const double step = std::arg(y[k] * std::conj(y[k - 1]));
        phase[k] = phase[k - 1] + step;
    }
    return phase;
}

/// Classical fixed-step RK4 for dy/dt = f(t, y) on vector/matrix states.
template <class State, class Rhs>
void rk4_step(State& y, double t, double h, Rhs&& f) {
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
    const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
    const State k4 = f(t + h, State(y + h * k3));
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace adiaudit
