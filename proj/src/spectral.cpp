#include "adiaudit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "adiaudit/errors.hpp"
#include "adiaudit/report_io.hpp"

namespace adiaudit {

namespace {

// g_ml = <E_m|dH/dt|E_l> / (E_l - E_m), zero diagonal.
Matrix couplings_from_derivative(const Matrix& dh, const Matrix& vectors, const RealVector& energies) {
    const int n = static_cast<int>(energies.size());
    Matrix g = vectors.adjoint() * dh * vectors;
    for (int m = 0; m < n; ++m) {
        for (int l = 0; l < n; ++l) {
            if (m == l) {
                g(m, l) = Complex(0.0, 0.0);
            } else {
                g(m, l) /= energies[l] - energies[m];
            }
        }
    }
    return g;
}

void check_grid_fits_model(const HamiltonianModel& model, const TimeGrid& grid) {
    if (grid.t_end > model.t_max() * (1.0 + 1e-9)) {
        std::ostringstream msg;
        msg << "grid end " << grid.t_end << " exceeds model domain [0, " << model.t_max() << "]";
        throw ParameterError(msg.str());
    }
}

}  // namespace

SpectralFlow eigen_flow(const HamiltonianModel& model, const TimeGrid& grid, double degeneracy_tol) {
    check_grid_fits_model(model, grid);
    const int dim = model.dimension();
    const int npts = grid.n_points();

    SpectralFlow flow;
    flow.grid = grid;
    flow.dim = dim;
    flow.energies.resize(npts, dim);
    flow.vectors.resize(npts);
    flow.couplings.resize(npts);
    flow.min_gap = std::numeric_limits<double>::infinity();

    Eigen::SelfAdjointEigenSolver<Matrix> solver;
    for (int k = 0; k < npts; ++k) {
        const double t = grid.time(k);
        solver.compute(model.evaluate(t));
        if (solver.info() != Eigen::Success) {
            throw AccuracyError("eigen decomposition failed at t = " + std::to_string(t));
        }
        RealVector energies = solver.eigenvalues();
        Matrix vectors = solver.eigenvectors();

        if (k == 0 && degeneracy_tol < 0.0) {
            degeneracy_tol = std::max(1e-6 * energies.cwiseAbs().maxCoeff(), 1e-12);
        }

        if (k > 0) {
            // Branch assignment by maximal overlap with the previous point,
            // then the parallel-transport phase fix.
            const Matrix overlap = flow.vectors[k - 1].adjoint() * vectors;
            std::vector<int> assign(dim, -1);
            std::vector<bool> used(dim, false);
            for (int m = 0; m < dim; ++m) {
                int best = -1;
                double best_mod = -1.0;
                for (int l = 0; l < dim; ++l) {
                    const double mod = std::abs(overlap(m, l));
                    if (!used[l] && mod > best_mod) {
                        best = l;
                        best_mod = mod;
                    }
                }
                if (best_mod < 0.9) {
                    std::ostringstream msg;
                    msg << "branch tracking lost at t = " << t << " (overlap " << best_mod
                        << " < 0.9); increase the number of steps";
                    throw ResolutionError(msg.str());
                }
                assign[m] = best;
                used[best] = true;
            }
            RealVector tracked_e(dim);
            Matrix tracked_v(dim, dim);
            for (int m = 0; m < dim; ++m) {
                const int l = assign[m];
                const Complex o = overlap(m, l);
                tracked_e[m] = energies[l];
                tracked_v.col(m) = vectors.col(l) * (std::conj(o) / std::abs(o));
            }
            energies = tracked_e;
            vectors = tracked_v;
        }

        for (int m = 0; m < dim; ++m) {
            for (int l = m + 1; l < dim; ++l) {
                const double gap = std::abs(energies[m] - energies[l]);
                flow.min_gap = std::min(flow.min_gap, gap);
                if (gap < degeneracy_tol) {
                    std::ostringstream msg;
                    msg << "spectrum within degeneracy tolerance at t = " << t << " (gap " << gap << ")";
                    throw DegeneracyError(msg.str(), t);
                }
            }
        }

        flow.energies.row(k) = energies.transpose();
        flow.vectors[k] = std::move(vectors);
    }

    for (int k = 0; k < npts; ++k) {
        flow.couplings[k] =
            couplings_from_derivative(model.derivative(grid.time(k)), flow.vectors[k], flow.energies.row(k).transpose());
    }
    return flow;
}

std::vector<Matrix> couplings_hellmann_feynman(const HamiltonianModel& model, const SpectralFlow& flow) {
    const int npts = flow.grid.n_points();
    const int dim = flow.dim;
    const double h = flow.grid.step();

    std::vector<Matrix> result(npts);
    double worst = 0.0;
    for (int k = 0; k < npts; ++k) {
        result[k] = couplings_from_derivative(model.derivative(flow.grid.time(k)), flow.vectors[k],
                                              flow.energies.row(k).transpose());

        // Independent estimate: differentiate the transported vectors.
        Matrix dv(dim, dim);
        if (k == 0) {
            dv = (-3.0 * flow.vectors[0] + 4.0 * flow.vectors[1] - flow.vectors[2]) / (2.0 * h);
        } else if (k == npts - 1) {
            dv = (3.0 * flow.vectors[k] - 4.0 * flow.vectors[k - 1] + flow.vectors[k - 2]) / (2.0 * h);
        } else {
            dv = (flow.vectors[k + 1] - flow.vectors[k - 1]) / (2.0 * h);
        }
        const Matrix fd = flow.vectors[k].adjoint() * dv;
        for (int m = 0; m < dim; ++m) {
            for (int l = 0; l < dim; ++l) {
                if (m == l) continue;
                worst = std::max(worst, std::abs(result[k](m, l) - fd(m, l)));
            }
        }
    }
    if (worst > 1e-5) {
        std::ostringstream msg;
        msg << "coupling estimates disagree: derivative identity vs finite differences differ by " << worst;
        throw ConsistencyError(msg.str());
    }
    return result;
}

ConstancyReport detect_constant(const SpectralFlow& flow, double tol) {
    ConstancyReport report;
    const int npts = flow.grid.n_points();
    const int dim = flow.dim;

    double gap_dev = 0.0, coupling_dev = 0.0;
    for (int k = 0; k < npts; ++k) {
        for (int m = 0; m < dim; ++m) {
            for (int l = 0; l < dim; ++l) {
                if (m == l) continue;
                gap_dev = std::max(gap_dev, std::abs(flow.gap(k, m, l) - flow.gap(0, m, l)));
                coupling_dev = std::max(coupling_dev, std::abs(flow.coupling(k, m, l) - flow.coupling(0, m, l)));
            }
        }
    }
    report.max_gap_deviation = gap_dev;
    report.max_coupling_deviation = coupling_dev;
    report.gaps_constant = gap_dev < tol;
    report.couplings_constant = coupling_dev < tol;
    return report;
}

void write_flow_csv(const SpectralFlow& flow, std::ostream& out) {
    const int dim = flow.dim;
    out << "t";
    for (int m = 0; m < dim; ++m) out << ",E_" << (m + 1);
    for (int m = 0; m < dim; ++m) {
        for (int l = 0; l < dim; ++l) {
            if (m == l) continue;
            out << ",abs_g_" << (m + 1) << "_" << (l + 1) << ",arg_g_" << (m + 1) << "_" << (l + 1);
        }
    }
    out << "\n";
    for (int k = 0; k < flow.grid.n_points(); ++k) {
        out << format_double(flow.grid.time(k));
        for (int m = 0; m < dim; ++m) out << "," << format_double(flow.energies(k, m));
        for (int m = 0; m < dim; ++m) {
            for (int l = 0; l < dim; ++l) {
                if (m == l) continue;
                const Complex g = flow.coupling(k, m, l);
                out << "," << format_double(std::abs(g)) << "," << format_double(std::arg(g));
            }
        }
        out << "\n";
    }
}

}  // namespace adiaudit
