#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adiaudit/spectral.hpp"
#include "adiaudit/types.hpp"

namespace adiaudit {

/// Pointwise ratio |<E_n|dE_m/dt>| / |E_n - E_m|, the classic slowness check.
struct ConditionA {
    RealMatrix values;  // n_points x N; column n is zero
    double max = 0.0;
};

/// Accumulated drift of the ratio: integral of |(g_nm / w_nm)'| dt per branch.
struct ConditionB {
    RealMatrix cumulative;        // n_points x N, nondecreasing; column n zero
    RealVector final_per_branch;  // value at t_end
    RealVector total_cumulative;  // sum over branches
    double total = 0.0;
};

/// Second-order leakage: integral of |g_nm / w_nm| |g_ml| dt per (m, l) pair.
struct ConditionC {
    std::vector<std::pair<int, int>> pairs;  // (m, l), m != n, l != m
    RealMatrix cumulative;                   // n_points x n_pairs
    RealVector final_per_pair;
    RealVector total_cumulative;
    double total = 0.0;
};

/// Max-modulus-times-tau forms that dominate the integral conditions.
struct StrongForms {
    double b_value = 0.0;  // max over branches of |(g_nm/w_nm)'|_M * tau
    double c_value = 0.0;  // max over pairs of |g_nm/w_nm|_M |g_ml|_M * tau
};

/// |g_nm'/w_nm|_M * tau variant, valid when each gap is monotonic in t.
struct ConditionB1 {
    double value = 0.0;
    bool monotonic = false;  // false disables the condition entirely
    RealVector log_terms;    // |ln(w_nm(tau)/w_nm(0))| per branch, diagnostic
};

/// Rigorous infidelity bound: 1 - |c_n(t)| <= a_term + b_term + c_term.
struct BoundCurve {
    RealVector a_term;  // sum_m |g_nm/w_nm|(t), instantaneous
    RealVector b_term;  // sum_m int_0^t |(g_nm/w_nm)'|
    RealVector c_term;  // sum_{m,l} int_0^t |g_nm/w_nm||g_ml|
    RealVector total;
};

/// Mode solution when gaps and couplings are time independent. Solves
/// (w_nm - lambda) a_m + i sum_{l != m} g_ml a_l = 0 through the Hermitian
/// matrix K (K_mm = w_nm(0), K_ml = i g_ml(0)) and bounds the oscillatory
/// integrals I_l = int_0^t exp(i w_nl t') c_l dt' uniformly in time.
struct ConstantCaseSolution {
    RealVector lambdas;     // real mode frequencies, ascending
    Matrix amplitudes;      // a_mj: row m, mode j
    Vector weights;         // p_j with sum_j p_j a_mj = delta_mn
    RealVector i_bounds;    // per l: 2 sum_j |p_j a_lj / lambda_j|
    double bound_rhs = 0.0; // time-independent infidelity bound
    bool decoupled = false; // all couplings zero: fidelity stays 1 exactly
    double initial_residual = 0.0;
    double min_lambda_rel = 0.0;       // min |lambda| / max |lambda|
    bool conditioning_warning = false; // some |lambda| below 1e-6 relative
};

struct AuditOptions {
    double epsilon = 0.1;  // the "much less than 1" threshold
    // Per-condition overrides; negative means "use epsilon".
    double epsilon_A = -1.0;
    double epsilon_B = -1.0;
    double epsilon_C = -1.0;
    double constancy_tol = 1e-8;
    bool enable_A = true;
    bool enable_B = true;
    bool enable_C = true;

    double eps_A() const { return epsilon_A > 0 ? epsilon_A : epsilon; }
    double eps_B() const { return epsilon_B > 0 ? epsilon_B : epsilon; }
    double eps_C() const { return epsilon_C > 0 ? epsilon_C : epsilon; }
};

struct CriterionReport {
    TimeGrid grid;
    int n_index = 0;
    double epsilon = 0.1;

    ConditionA A;
    ConditionB B;
    ConditionC C;
    StrongForms strong;
    ConditionB1 B1;
    BoundCurve bound;
    double tau_admissible = 0.0;

    bool enabled_A = true;
    bool enabled_B = true;
    bool enabled_C = true;
    bool pass_A = false;
    bool pass_B = false;
    bool pass_C = false;
    bool pass() const {
        return (!enabled_A || pass_A) && (!enabled_B || pass_B) && (!enabled_C || pass_C);
    }

    ConstancyReport constancy;
    std::optional<ConstantCaseSolution> constant_case;
    std::string constant_case_note;  // set when the solve was skipped or degraded
};

ConditionA condition_A(const SpectralFlow& flow, int n);
ConditionB condition_B(const SpectralFlow& flow, int n);
ConditionC condition_C(const SpectralFlow& flow, int n);
StrongForms strong_forms(const SpectralFlow& flow, int n, double tau);
ConditionB1 condition_B1(const SpectralFlow& flow, int n, double tau);
BoundCurve error_bound(const SpectralFlow& flow, int n);

/// Largest grid time up to which the pointwise ratio and both cumulative
/// integrals stay strictly below epsilon. Returns t_end when they never cross.
double admissible_time(const CriterionReport& report, double epsilon);

/// Requires detect_constant to hold within the given tolerance; constants are
/// taken at t = 0. Throws PreconditionError otherwise, ConditioningError when
/// a mode frequency is below 1e-12 relative.
ConstantCaseSolution constant_case_solve(const SpectralFlow& flow, int n, double constancy_tol = 1e-8);

/// Eq-style closed bound for the constant case evaluated from the solution.
double constant_case_bound(const SpectralFlow& flow, int n, const ConstantCaseSolution& solution);

/// Full audit: all conditions, the bound curve, the admissible time and the
/// constant-case solution when applicable.
CriterionReport audit_flow(const SpectralFlow& flow, int n, const AuditOptions& options = {});

struct ScanRow {
    double T = 0.0;
    double A_max = 0.0;
    double B_total = 0.0;
    double C_total = 0.0;
};

struct RescalingScan {
    std::vector<ScanRow> rows;
    // Least-squares coefficients for Q ~ c / T and the worst relative
    // deviation of Q * T from the fit.
    double fit_A = 0.0, fit_B = 0.0, fit_C = 0.0;
    double max_rel_dev_A = 0.0, max_rel_dev_B = 0.0, max_rel_dev_C = 0.0;
};

/// Audits rescale(base, T) for each T on matched s-grids (same step count for
/// every T, so the sampled s values coincide). base must live on [0, 1].
RescalingScan rescaling_scan(const HamiltonianModel& base, int n, const std::vector<double>& T_values,
                             int n_steps);

}  // namespace adiaudit
