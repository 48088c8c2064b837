#include "adiaudit/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "adiaudit/errors.hpp"
#include "adiaudit/numerics.hpp"

namespace adiaudit {

namespace {

void check_branch(const SpectralFlow& flow, int n) {
    if (n < 0 || n >= flow.dim) {
        throw ParameterError("branch index " + std::to_string(n) + " out of range for dimension " +
                             std::to_string(flow.dim));
    }
}

// r_m(t_k) = g_nm(t_k) / w_nm(t_k) for one branch m != n.
Vector ratio_series(const SpectralFlow& flow, int n, int m) {
    const int npts = flow.grid.n_points();
    Vector r(npts);
    for (int k = 0; k < npts; ++k) {
        const double w = flow.gap(k, n, m);
        r[k] = flow.coupling(k, n, m) / w;
    }
    return r;
}

Vector coupling_series(const SpectralFlow& flow, int m, int l) {
    const int npts = flow.grid.n_points();
    Vector g(npts);
    for (int k = 0; k < npts; ++k) g[k] = flow.coupling(k, m, l);
    return g;
}

}  // namespace

ConditionA condition_A(const SpectralFlow& flow, int n) {
    check_branch(flow, n);
    const int npts = flow.grid.n_points();
    ConditionA out;
    out.values = RealMatrix::Zero(npts, flow.dim);
    for (int m = 0; m < flow.dim; ++m) {
        if (m == n) continue;
        const Vector r = ratio_series(flow, n, m);
        out.values.col(m) = r.cwiseAbs();
    }
    out.max = out.values.maxCoeff();
    return out;
}

ConditionB condition_B(const SpectralFlow& flow, int n) {
    check_branch(flow, n);
    if (flow.grid.n_points() < 3) throw ResolutionError("condition B needs at least 3 grid points");
    const int npts = flow.grid.n_points();
    const double h = flow.grid.step();

    ConditionB out;
    out.cumulative = RealMatrix::Zero(npts, flow.dim);
    out.final_per_branch = RealVector::Zero(flow.dim);
    for (int m = 0; m < flow.dim; ++m) {
        if (m == n) continue;
        const Vector dr = central_difference(ratio_series(flow, n, m), h);
        out.cumulative.col(m) = cumulative_trapezoid(dr.cwiseAbs(), h);
        out.final_per_branch[m] = out.cumulative(npts - 1, m);
    }
    out.total_cumulative = out.cumulative.rowwise().sum();
    out.total = out.total_cumulative[npts - 1];
    return out;
}

ConditionC condition_C(const SpectralFlow& flow, int n) {
    check_branch(flow, n);
    if (flow.grid.n_points() < 3) throw ResolutionError("condition C needs at least 3 grid points");
    const int npts = flow.grid.n_points();
    const double h = flow.grid.step();

    ConditionC out;
    for (int m = 0; m < flow.dim; ++m) {
        if (m == n) continue;
        for (int l = 0; l < flow.dim; ++l) {
            if (l == m) continue;
            out.pairs.emplace_back(m, l);
        }
    }
    const int npairs = static_cast<int>(out.pairs.size());
    out.cumulative = RealMatrix::Zero(npts, npairs);
    out.final_per_pair = RealVector::Zero(npairs);
    for (int p = 0; p < npairs; ++p) {
        const auto [m, l] = out.pairs[p];
        RealVector integrand(npts);
        for (int k = 0; k < npts; ++k) {
            integrand[k] = std::abs(flow.coupling(k, n, m) / flow.gap(k, n, m)) * std::abs(flow.coupling(k, m, l));
        }
        out.cumulative.col(p) = cumulative_trapezoid(integrand, h);
        out.final_per_pair[p] = out.cumulative(npts - 1, p);
    }
    out.total_cumulative = out.cumulative.rowwise().sum();
    out.total = out.total_cumulative[npts - 1];
    return out;
}

StrongForms strong_forms(const SpectralFlow& flow, int n, double tau) {
    check_branch(flow, n);
    const double h = flow.grid.step();
    StrongForms out;
    for (int m = 0; m < flow.dim; ++m) {
        if (m == n) continue;
        const Vector r = ratio_series(flow, n, m);
        const double r_max = r.cwiseAbs().maxCoeff();
        const double dr_max = central_difference(r, h).cwiseAbs().maxCoeff();
        out.b_value = std::max(out.b_value, dr_max * tau);
        for (int l = 0; l < flow.dim; ++l) {
            if (l == m) continue;
            const double g_max = coupling_series(flow, m, l).cwiseAbs().maxCoeff();
            out.c_value = std::max(out.c_value, r_max * g_max * tau);
        }
    }
    return out;
}

ConditionB1 condition_B1(const SpectralFlow& flow, int n, double tau) {
    check_branch(flow, n);
    const int npts = flow.grid.n_points();
    const double h = flow.grid.step();

    ConditionB1 out;
    out.log_terms = RealVector::Zero(flow.dim);
    out.monotonic = true;
    for (int m = 0; m < flow.dim; ++m) {
        if (m == n) continue;
        RealVector w(npts);
        for (int k = 0; k < npts; ++k) w[k] = flow.gap(k, n, m);
        const double w_scale = w.cwiseAbs().maxCoeff();
        const double mono_tol = 1e-12 * std::max(1.0, w_scale);
        bool nondecreasing = true, nonincreasing = true;
        for (int k = 1; k < npts; ++k) {
            const double d = w[k] - w[k - 1];
            if (d < -mono_tol) nondecreasing = false;
            if (d > mono_tol) nonincreasing = false;
        }
        if (!nondecreasing && !nonincreasing) out.monotonic = false;
        out.log_terms[m] = std::abs(std::log(std::abs(w[npts - 1] / w[0])));

        const Vector dg = central_difference(coupling_series(flow, n, m), h);
        double worst = 0.0;
        for (int k = 0; k < npts; ++k) worst = std::max(worst, std::abs(dg[k]) / std::abs(w[k]));
        out.value = std::max(out.value, worst * tau);
    }
    return out;
}

BoundCurve error_bound(const SpectralFlow& flow, int n) {
    check_branch(flow, n);
    const int npts = flow.grid.n_points();

    BoundCurve out;
    out.a_term = RealVector::Zero(npts);
    for (int m = 0; m < flow.dim; ++m) {
        if (m == n) continue;
        out.a_term += ratio_series(flow, n, m).cwiseAbs();
    }
    out.b_term = condition_B(flow, n).total_cumulative;
    out.c_term = condition_C(flow, n).total_cumulative;
    out.total = out.a_term + out.b_term + out.c_term;
    return out;
}

double admissible_time(const CriterionReport& report, double epsilon) {
    if (!(epsilon > 0.0)) throw ParameterError("admissible_time: epsilon must be positive");
    const int npts = report.grid.n_points();
    for (int k = 0; k < npts; ++k) {
        const bool ok_A = !report.enabled_A || report.A.values.row(k).maxCoeff() < epsilon;
        const bool ok_B = !report.enabled_B || report.B.cumulative.row(k).maxCoeff() < epsilon;
        const bool ok_C = !report.enabled_C || report.C.cumulative.cols() == 0 ||
                          report.C.cumulative.row(k).maxCoeff() < epsilon;
        if (!(ok_A && ok_B && ok_C)) {
            return k == 0 ? 0.0 : report.grid.time(k - 1);
        }
    }
    return report.grid.t_end;
}

ConstantCaseSolution constant_case_solve(const SpectralFlow& flow, int n, double constancy_tol) {
    check_branch(flow, n);
    const ConstancyReport constancy = detect_constant(flow, constancy_tol);
    if (!constancy.constant()) {
        std::ostringstream msg;
        msg << "constant-case solve requires constant gaps and couplings (deviations "
            << constancy.max_gap_deviation << ", " << constancy.max_coupling_deviation << " vs tol "
            << constancy_tol << ")";
        throw PreconditionError(msg.str());
    }
    const int dim = flow.dim;

    ConstantCaseSolution sol;
    double max_coupling = 0.0;
    for (int m = 0; m < dim; ++m) {
        for (int l = 0; l < dim; ++l) {
            if (m != l) max_coupling = std::max(max_coupling, std::abs(flow.coupling(0, m, l)));
        }
    }
    if (max_coupling < 1e-14 * std::max(1.0, flow.energies.row(0).cwiseAbs().maxCoeff())) {
        // Fully decoupled: every branch evolves by a phase only.
        sol.decoupled = true;
        sol.lambdas = RealVector::Zero(dim);
        for (int m = 0; m < dim; ++m) sol.lambdas[m] = flow.gap(0, n, m);
        sol.amplitudes = Matrix::Identity(dim, dim);
        sol.weights = Vector::Zero(dim);
        sol.weights[n] = Complex(1.0, 0.0);
        sol.i_bounds = RealVector::Zero(dim);
        sol.bound_rhs = 0.0;
        return sol;
    }

    Matrix k_matrix(dim, dim);
    for (int m = 0; m < dim; ++m) {
        for (int l = 0; l < dim; ++l) {
            k_matrix(m, l) = m == l ? Complex(flow.gap(0, n, m), 0.0) : kImag * flow.coupling(0, m, l);
        }
    }
    const double herm_defect = (k_matrix - k_matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > 1e-10) {
        throw ConsistencyError("constant-case matrix not Hermitian (coupling antisymmetry violated: defect " +
                               std::to_string(herm_defect) + ")");
    }
    k_matrix = 0.5 * (k_matrix + k_matrix.adjoint().eval());

    Eigen::SelfAdjointEigenSolver<Matrix> solver(k_matrix);
    if (solver.info() != Eigen::Success) throw AccuracyError("constant-case eigensolve failed");
    sol.lambdas = solver.eigenvalues();
    sol.amplitudes = solver.eigenvectors();

    const double lambda_scale = sol.lambdas.cwiseAbs().maxCoeff();
    const double lambda_min = sol.lambdas.cwiseAbs().minCoeff();
    sol.min_lambda_rel = lambda_min / lambda_scale;
    if (sol.min_lambda_rel < 1e-12) {
        std::ostringstream msg;
        msg << "constant-case mode frequency " << lambda_min << " is below 1e-12 relative to " << lambda_scale
            << "; the oscillatory-integral bound degenerates";
        throw ConditioningError(msg.str());
    }
    sol.conditioning_warning = sol.min_lambda_rel < 1e-6;

    // weights from sum_j p_j a_mj = delta_mn; the mode matrix is unitary.
    Vector target = Vector::Zero(dim);
    target[n] = Complex(1.0, 0.0);
    sol.weights = sol.amplitudes.adjoint() * target;
    sol.initial_residual = (sol.amplitudes * sol.weights - target).cwiseAbs().maxCoeff();

    sol.i_bounds = RealVector::Zero(dim);
    for (int l = 0; l < dim; ++l) {
        double acc = 0.0;
        for (int j = 0; j < dim; ++j) {
            acc += std::abs(sol.weights[j] * sol.amplitudes(l, j) / sol.lambdas[j]);
        }
        sol.i_bounds[l] = 2.0 * acc;
    }
    sol.bound_rhs = constant_case_bound(flow, n, sol);
    return sol;
}

double constant_case_bound(const SpectralFlow& flow, int n, const ConstantCaseSolution& solution) {
    if (solution.decoupled) return 0.0;
    double bound = 0.0;
    for (int m = 0; m < flow.dim; ++m) {
        if (m == n) continue;
        const double ratio = std::abs(flow.coupling(0, n, m) / flow.gap(0, n, m));
        double inner = 1.0;
        for (int l = 0; l < flow.dim; ++l) {
            if (l == m) continue;
            inner += std::abs(flow.coupling(0, m, l)) * solution.i_bounds[l];
        }
        bound += ratio * inner;
    }
    return bound;
}

CriterionReport audit_flow(const SpectralFlow& flow, int n, const AuditOptions& options) {
    check_branch(flow, n);
    if (!(options.epsilon > 0.0)) throw ParameterError("audit: epsilon must be positive");

    CriterionReport report;
    report.grid = flow.grid;
    report.n_index = n;
    report.epsilon = options.epsilon;

    report.A = condition_A(flow, n);
    report.B = condition_B(flow, n);
    report.C = condition_C(flow, n);
    report.strong = strong_forms(flow, n, flow.grid.t_end);
    report.B1 = condition_B1(flow, n, flow.grid.t_end);
    report.bound = error_bound(flow, n);

    report.enabled_A = options.enable_A;
    report.enabled_B = options.enable_B;
    report.enabled_C = options.enable_C;
    report.pass_A = report.A.max < options.eps_A();
    report.pass_B = report.B.final_per_branch.maxCoeff() < options.eps_B();
    report.pass_C = report.C.final_per_pair.size() == 0 || report.C.final_per_pair.maxCoeff() < options.eps_C();
    report.tau_admissible = admissible_time(report, options.epsilon);

    report.constancy = detect_constant(flow, options.constancy_tol);
    if (report.constancy.constant()) {
        try {
            report.constant_case = constant_case_solve(flow, n, options.constancy_tol);
        } catch (const ConditioningError& e) {
            report.constant_case_note = e.what();
        }
    } else {
        report.constant_case_note = "gaps or couplings vary in time; general-case bound applies";
    }
    return report;
}

RescalingScan rescaling_scan(const HamiltonianModel& base, int n, const std::vector<double>& T_values,
                             int n_steps) {
    if (T_values.empty()) throw ParameterError("rescaling scan: empty T list");
    if (std::abs(base.t_max() - 1.0) > 1e-9) throw ParameterError("rescaling scan: base must live on [0, 1]");

    RescalingScan scan;
    for (const double T : T_values) {
        const HamiltonianModel scaled = rescale(base, T);
        const TimeGrid grid = TimeGrid::uniform(T, n_steps);
        const SpectralFlow flow = eigen_flow(scaled, grid);
        ScanRow row;
        row.T = T;
        row.A_max = condition_A(flow, n).max;
        row.B_total = condition_B(flow, n).total;
        row.C_total = condition_C(flow, n).total;
        scan.rows.push_back(row);
    }

    const auto fit_inverse = [&](auto&& get) {
        double num = 0.0, den = 0.0;
        for (const ScanRow& row : scan.rows) {
            num += get(row) / row.T;
            den += 1.0 / (row.T * row.T);
        }
        return num / den;
    };
    const auto max_rel_dev = [&](auto&& get, double fit) {
        double worst = 0.0;
        for (const ScanRow& row : scan.rows) {
            if (fit != 0.0) worst = std::max(worst, std::abs(get(row) * row.T - fit) / std::abs(fit));
        }
        return worst;
    };
    const auto a_of = [](const ScanRow& r) { return r.A_max; };
    const auto b_of = [](const ScanRow& r) { return r.B_total; };
    const auto c_of = [](const ScanRow& r) { return r.C_total; };
    scan.fit_A = fit_inverse(a_of);
    scan.fit_B = fit_inverse(b_of);
    scan.fit_C = fit_inverse(c_of);
    scan.max_rel_dev_A = max_rel_dev(a_of, scan.fit_A);
    scan.max_rel_dev_B = max_rel_dev(b_of, scan.fit_B);
    scan.max_rel_dev_C = max_rel_dev(c_of, scan.fit_C);
    return scan;
}

}  // namespace adiaudit
