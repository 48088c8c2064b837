#pragma once

#include <cmath>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "adiaudit/types.hpp"

namespace adiaudit {

enum class ModelKind {
    spin_half_rotating,
    sampled_table,
    rescaled,
    counterexample_b,
};

std::string to_string(ModelKind kind);

/// Spin-half in a rotating magnetic field:
///   H(t) = -(omega0/2) (sigma_x sin(theta) cos(omega t)
///          + sigma_y sin(theta) sin(omega t) + sigma_z cos(theta)).
/// The instantaneous gap is omega0 at all times.
struct SpinHalfParams {
    double omega0 = 10.0;  // field strength (energy)
    double omega = 0.1;    // rotation rate (angular frequency)
    double theta = M_PI / 2.0;

    void validate() const;  // omega0 > 0, omega >= 0, theta in [0, pi]
};

/// Hermitian matrices sampled on strictly increasing times. Between samples the
/// model interpolates with a piecewise cubic through the 4 nearest samples
/// (value error O(h^4), derivative error O(h^3) for smooth data).
struct MatrixSampleTable {
    std::vector<double> times;
    std::vector<Matrix> matrices;

    int dimension() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }
    std::size_t size() const { return times.size(); }

    /// Checks ordering, dimensions and hermiticity (entrywise 1e-10), then
    /// symmetrizes each sample. Throws FormatError naming the offending time.
    void validate_and_symmetrize();
};

/// Immutable time-dependent Hermitian matrix family on [0, t_max].
/// evaluate() is pure; models are safe to share across threads.
class HamiltonianModel {
  public:
    ModelKind kind() const;
    int dimension() const;
    double t_max() const;

    /// H(t). Hermitian within 1e-12 entrywise; t must lie in [0, t_max]
    /// (padded by a relative 1e-9 for endpoint rounding).
    Matrix evaluate(double t) const;

    /// dH/dt at t: the declared closed form where one exists, otherwise the
    /// derivative of the interpolant.
    Matrix derivative(double t) const;
    bool has_derivative() const;

    /// Set for spin_half_rotating (and rescaled spin bases); null otherwise.
    const SpinHalfParams* spin_params() const;

    static HamiltonianModel spin_half(const SpinHalfParams& params, double t_max);
    static HamiltonianModel from_table(MatrixSampleTable table, ModelKind kind = ModelKind::sampled_table);

  private:
    struct Impl;
    explicit HamiltonianModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;

    friend HamiltonianModel rescale(const HamiltonianModel&, double);
    friend HamiltonianModel stretch_domain(const HamiltonianModel&, double);
};

HamiltonianModel build_spin_half(const SpinHalfParams& params, double t_max);

/// Parse the sampled-Hamiltonian text format:
///   N <dim> SAMPLES <count>
///   t <time>
///   <re,im> ... <re,im>     (N rows of N entries, row-major)
HamiltonianModel load_sample_table(std::istream& in);
HamiltonianModel load_sample_table_file(const std::string& path);
void write_sample_table(const MatrixSampleTable& table, std::ostream& out);

/// H(t) = base(t / T) on [0, base.t_max * T]; the derivative picks up 1/T.
/// Requires base defined on [0, 1].
HamiltonianModel rescale(const HamiltonianModel& base, double T);

/// Domain reparametrization without the unit-interval requirement; used to
/// bring a model back onto [0, 1] between rescales.
HamiltonianModel stretch_domain(const HamiltonianModel& base, double factor);

/// Given a base playing the role of H^a, integrates its propagator U on the
/// grid and materializes H^b(t) = -U(t)^dag H^a(t) U(t) as a sample table
/// (equal to i dU^dag/dt U). The returned model negates the spectrum of the
/// base while preserving coupling moduli.
HamiltonianModel build_counterexample_b(const HamiltonianModel& base, const TimeGrid& grid, int substeps = 4);

}  // namespace adiaudit
