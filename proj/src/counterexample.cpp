#include <cmath>
#include <utility>

#include "adiaudit/dynamics.hpp"
#include "adiaudit/errors.hpp"
#include "adiaudit/hamiltonians.hpp"

namespace adiaudit {

HamiltonianModel build_counterexample_b(const HamiltonianModel& base, const TimeGrid& grid, int substeps) {
    if (grid.t_end > base.t_max() * (1.0 + 1e-9)) {
        throw ParameterError("counterexample grid exceeds the base model domain");
    }
    const int dim = base.dimension();

    // Step-halving check on the final propagator; the partner Hamiltonian is
    // only as accurate as U(t).
    const std::vector<Matrix> u = propagator(base, grid, substeps);
    const Matrix u_fine = evolve_operator(base, 0.0, grid.t_end, 2 * substeps * grid.n_steps,
                                          Matrix::Identity(dim, dim));
    const double step_error = (u.back() - u_fine).cwiseAbs().maxCoeff();
    if (step_error > 1e-8) {
        throw AccuracyError("propagator step-halving error " + std::to_string(step_error) +
                            " above 1e-8; use a finer grid for the counterexample");
    }

    // i dU^dag/dt U = -U^dag H^a U, from i dU/dt = H^a U.
    MatrixSampleTable table;
    table.times.reserve(grid.n_points());
    table.matrices.reserve(grid.n_points());
    for (int k = 0; k < grid.n_points(); ++k) {
        const double t = grid.time(k);
        Matrix hb = -(u[k].adjoint() * base.evaluate(t) * u[k]);
        hb = 0.5 * (hb + hb.adjoint().eval());
        table.times.push_back(t);
        table.matrices.push_back(std::move(hb));
    }
    return HamiltonianModel::from_table(std::move(table), ModelKind::counterexample_b);
}

}  // namespace adiaudit
