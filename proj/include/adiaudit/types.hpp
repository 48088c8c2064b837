#pragma once

#include <complex>

#include <Eigen/Dense>

namespace adiaudit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};

/// Uniform time grid on [0, t_end]. Times are in inverse-energy units (hbar = 1).
struct TimeGrid {
    double t_end = 0.0;
    int n_steps = 0;

    static TimeGrid uniform(double t_end, int n_steps);

    int n_points() const { return n_steps + 1; }
    double step() const { return t_end / n_steps; }
    // Exact at both endpoints, no accumulation drift.
    double time(int k) const { return t_end * static_cast<double>(k) / n_steps; }

    bool same_as(const TimeGrid& other, double tol = 1e-12) const {
        return n_steps == other.n_steps && std::abs(t_end - other.t_end) <= tol * std::max(1.0, t_end);
    }
};

}  // namespace adiaudit
