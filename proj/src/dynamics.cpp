#include "adiaudit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "adiaudit/errors.hpp"
#include "adiaudit/numerics.hpp"

namespace adiaudit {

namespace {

void check_branch(int n, int dim) {
    if (n < 0 || n >= dim) {
        throw ParameterError("branch index " + std::to_string(n) + " out of range for dimension " +
                             std::to_string(dim));
    }
}

void check_resolution(const HamiltonianModel& model, double internal_step) {
    // Keep the per-step phase well under a radian; the contract asks for
    // max|E| h of order 0.1.
    const double scale = model.evaluate(0.0).cwiseAbs().rowwise().sum().maxCoeff();
    if (scale * internal_step > 0.5) {
        std::ostringstream msg;
        msg << "integration step " << internal_step << " too coarse for energy scale " << scale
            << "; increase steps or substeps";
        throw ResolutionError(msg.str());
    }
}

// int_0^{t_k} E_m dt' by cumulative trapezoid on the flow energies.
RealMatrix accumulate_phases(const SpectralFlow& flow) {
    const int npts = flow.grid.n_points();
    RealMatrix phases(npts, flow.dim);
    for (int m = 0; m < flow.dim; ++m) {
        phases.col(m) = cumulative_trapezoid(flow.energies.col(m), flow.grid.step());
    }
    return phases;
}

std::vector<Vector> integrate_state(const HamiltonianModel& model, const TimeGrid& grid, const Vector& psi0,
                                    int substeps) {
    std::vector<Vector> states(grid.n_points());
    states[0] = psi0;
    Vector psi = psi0;
    const auto rhs = [&model](double t, const Vector& y) -> Vector { return -kImag * (model.evaluate(t) * y); };
    for (int k = 0; k < grid.n_steps; ++k) {
        const double t0 = grid.time(k);
        const double h = (grid.time(k + 1) - t0) / substeps;
        for (int s = 0; s < substeps; ++s) {
            rk4_step(psi, t0 + s * h, h, rhs);
        }
        states[k + 1] = psi;
    }
    return states;
}

}  // namespace

EvolutionResult evolve_state(const HamiltonianModel& model, const SpectralFlow& flow, int n,
                             const EvolveOptions& options) {
    check_branch(n, flow.dim);
    if (options.substeps < 1) throw ParameterError("evolve_state: substeps must be >= 1");
    check_resolution(model, flow.grid.step() / options.substeps);

    const int npts = flow.grid.n_points();
    const Vector psi0 = flow.vectors[0].col(n);
    std::vector<Vector> states = integrate_state(model, flow.grid, psi0, options.substeps);

    EvolutionResult result;
    result.grid = flow.grid;
    result.n_index = n;
    result.phases = accumulate_phases(flow);
    result.coefficients.resize(npts, flow.dim);
    result.fidelity.resize(npts);

    double norm_drift = 0.0;
    for (int k = 0; k < npts; ++k) {
        norm_drift = std::max(norm_drift, std::abs(states[k].norm() - 1.0));
        const Vector projected = flow.vectors[k].adjoint() * states[k];
        for (int m = 0; m < flow.dim; ++m) {
            result.coefficients(k, m) = std::exp(Complex(0.0, result.phases(k, m))) * projected[m];
        }
        result.fidelity[k] = std::abs(result.coefficients(k, n));
    }
    result.norm_drift = norm_drift;
    if (norm_drift > 1e-6) {
        throw AccuracyError("state norm drifted by " + std::to_string(norm_drift) + "; refine the grid");
    }

    if (options.estimate_error) {
        const std::vector<Vector> fine = integrate_state(model, flow.grid, psi0, 2 * options.substeps);
        double diff = 0.0;
        for (int k = 0; k < npts; ++k) diff = std::max(diff, (states[k] - fine[k]).norm());
        result.error_estimate = diff;
    }

    result.states = std::move(states);
    return result;
}

EvolutionResult evolve_coefficients(const SpectralFlow& flow, int n) {
    check_branch(n, flow.dim);
    if (flow.grid.n_steps % 2 != 0) {
        throw ResolutionError("evolve_coefficients: flow grid needs an even step count (RK4 stages land on samples)");
    }
    const int dim = flow.dim;
    const RealMatrix phases = accumulate_phases(flow);

    // G(k)_ml = g_ml exp(i (phi_m - phi_l)); anti-Hermitian by coupling
    // antisymmetry, so the exact system conserves the norm.
    const auto system_matrix = [&](int k) -> Matrix {
        Matrix g = flow.couplings[k];
        for (int m = 0; m < dim; ++m) {
            for (int l = 0; l < dim; ++l) {
                if (m == l) continue;
                g(m, l) *= std::exp(Complex(0.0, phases(k, m) - phases(k, l)));
            }
        }
        return g;
    };

    const int out_steps = flow.grid.n_steps / 2;
    EvolutionResult result;
    result.grid = TimeGrid{flow.grid.t_end, out_steps};
    result.n_index = n;
    result.coefficients.resize(out_steps + 1, dim);
    result.fidelity.resize(out_steps + 1);
    result.phases.resize(out_steps + 1, dim);

    Vector c = Vector::Zero(dim);
    c[n] = Complex(1.0, 0.0);
    const double h2 = 2.0 * flow.grid.step();
    double norm_drift = 0.0;

    const auto store = [&](int row, int flow_k) {
        result.coefficients.row(row) = c.transpose();
        result.fidelity[row] = std::abs(c[n]);
        result.phases.row(row) = phases.row(flow_k);
        norm_drift = std::max(norm_drift, std::abs(c.norm() - 1.0));
    };
    store(0, 0);

    for (int step = 0; step < out_steps; ++step) {
        const int k0 = 2 * step;
        const Matrix g0 = system_matrix(k0);
        const Matrix g1 = system_matrix(k0 + 1);
        const Matrix g2 = system_matrix(k0 + 2);
        const Vector k1 = -(g0 * c);
        const Vector k2 = -(g1 * (c + (0.5 * h2) * k1));
        const Vector k3 = -(g1 * (c + (0.5 * h2) * k2));
        const Vector k4 = -(g2 * (c + h2 * k3));
        c += (h2 / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        store(step + 1, k0 + 2);
    }

    result.norm_drift = norm_drift;
    if (norm_drift > 1e-6) {
        throw AccuracyError("coefficient norm drifted by " + std::to_string(norm_drift) + "; refine the grid");
    }
    return result;
}

Matrix evolve_operator(const HamiltonianModel& model, double t0, double t1, int steps, Matrix u0) {
    if (steps < 1) throw ParameterError("evolve_operator: steps must be >= 1");
    const double h = (t1 - t0) / steps;
    const auto rhs = [&model](double t, const Matrix& u) -> Matrix { return -kImag * (model.evaluate(t) * u); };
    for (int s = 0; s < steps; ++s) {
        rk4_step(u0, t0 + s * h, h, rhs);
    }
    return u0;
}

std::vector<Matrix> propagator(const HamiltonianModel& model, const TimeGrid& grid, int substeps) {
    if (substeps < 1) throw ParameterError("propagator: substeps must be >= 1");
    check_resolution(model, grid.step() / substeps);
    const int dim = model.dimension();

    std::vector<Matrix> u(grid.n_points());
    u[0] = Matrix::Identity(dim, dim);
    double drift = 0.0;
    for (int k = 0; k < grid.n_steps; ++k) {
        u[k + 1] = evolve_operator(model, grid.time(k), grid.time(k + 1), substeps, u[k]);
        drift = std::max(drift, (u[k + 1].adjoint() * u[k + 1] - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff());
    }
    if (drift > 1e-8) {
        throw AccuracyError("propagator unitarity drifted by " + std::to_string(drift) + "; refine the grid");
    }
    return u;
}

BoundCheck verify_bound(const EvolutionResult& evolution, const CriterionReport& report, double slack) {
    if (!evolution.grid.same_as(report.grid)) {
        throw ParameterError("verify_bound: evolution and report grids differ");
    }
    if (evolution.n_index != report.n_index) {
        throw ParameterError("verify_bound: evolution and report track different branches");
    }
    BoundCheck check;
    check.slack = slack;
    check.max_violation = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < evolution.grid.n_points(); ++k) {
        const double violation = (1.0 - evolution.fidelity[k]) - report.bound.total[k];
        if (violation > check.max_violation) {
            check.max_violation = violation;
            check.worst_time = evolution.grid.time(k);
        }
    }
    check.pass = check.max_violation <= slack;
    return check;
}

GeometricPhaseReport geometric_phase_spin(const SpinHalfParams& params, double tau, int n_steps, int n_index,
                                          const EvolveOptions& options) {
    params.validate();
    if (!(params.omega > 0.0)) throw ParameterError("geometric phase: omega must be positive (cyclic field)");
    check_branch(n_index, 2);
    const double period = 2.0 * M_PI / params.omega;
    const double cycles_real = tau / period;
    const int cycles = static_cast<int>(std::lround(cycles_real));
    if (cycles < 1 || std::abs(cycles_real - cycles) > 1e-9 * std::max(1.0, cycles_real)) {
        throw ParameterError("geometric phase: tau must be an integer number of rotation periods 2 pi / omega");
    }

    const HamiltonianModel model = build_spin_half(params, tau);
    const TimeGrid grid = TimeGrid::uniform(tau, n_steps);
    const SpectralFlow flow = eigen_flow(model, grid);
    const EvolutionResult evolution = evolve_state(model, flow, n_index, options);

    // Closed reference gauge along the rotating field: single-valued in the
    // field angle, so it returns to itself after each period.
    const double half = 0.5 * params.theta;
    const auto reference = [&](double t) -> Vector {
        const Complex ephi = std::exp(Complex(0.0, params.omega * t));
        Vector u(2);
        if (n_index == 0) {  // aligned with the field, energy -omega0/2
            u << Complex(std::cos(half), 0.0), ephi * std::sin(half);
        } else {  // anti-aligned, energy +omega0/2
            u << -std::conj(ephi) * std::sin(half), Complex(std::cos(half), 0.0);
        }
        return u;
    };

    // The transported branch equals exp(i chi(t)) * reference(t); with the
    // transported gauge, chi(tau) - chi(0) is the geometric phase of the loop.
    const int npts = grid.n_points();
    Vector overlap_series(npts);
    for (int k = 0; k < npts; ++k) {
        overlap_series[k] = reference(grid.time(k)).dot(flow.vectors[k].col(n_index));
    }
    const double min_overlap = overlap_series.cwiseAbs().minCoeff();
    if (min_overlap < 0.5) {
        throw ConsistencyError("geometric phase: tracked branch does not match the reference family (overlap " +
                               std::to_string(min_overlap) + ")");
    }
    const RealVector chi = unwrap_arg(overlap_series);
    const double gamma_adiabatic = chi[npts - 1] - chi[0];

    // Exact-evolution phase relative to the dynamical phase. arg c_n unwraps
    // robustly because |c_n| stays near 1; the energy-expectation correction
    // restores the exact dynamical phase of the state.
    Vector cn(npts);
    for (int k = 0; k < npts; ++k) cn[k] = evolution.coefficients(k, n_index);
    const RealVector arg_cn = unwrap_arg(cn);

    RealVector energy_excess(npts);
    for (int k = 0; k < npts; ++k) {
        const Vector& psi = evolution.states[k];
        const double mean_energy = std::real(psi.dot(model.evaluate(grid.time(k)) * psi));
        energy_excess[k] = mean_energy - flow.energies(k, n_index);
    }
    const RealVector excess_integral = cumulative_trapezoid(energy_excess, grid.step());

    GeometricPhaseReport report;
    report.cycles = cycles;
    report.gamma_adiabatic_unwrapped = gamma_adiabatic;
    report.delta_gamma = (arg_cn[npts - 1] - arg_cn[0]) + excess_integral[npts - 1];
    report.gamma_exact_unwrapped = gamma_adiabatic + report.delta_gamma;
    report.gamma_adiabatic = wrap_angle(report.gamma_adiabatic_unwrapped);
    report.gamma_exact = wrap_angle(report.gamma_exact_unwrapped);
    report.delta_gamma_formula = -params.omega * tau * std::sin(params.theta) * params.omega *
                                 std::sin(params.theta) /
                                 (2.0 * (params.omega0 + 2.0 * params.omega * std::cos(params.theta)));
    return report;
}

}  // namespace adiaudit
