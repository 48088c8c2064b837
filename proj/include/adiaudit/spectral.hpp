#pragma once

#include <iosfwd>
#include <vector>

#include "adiaudit/hamiltonians.hpp"
#include "adiaudit/types.hpp"

namespace adiaudit {

/// Instantaneous eigen-decomposition along a time grid.
///
/// Branches are ordered ascending at t = 0 and followed by maximal-overlap
/// assignment afterwards. Eigenvector phases are fixed by discrete parallel
/// transport: <E_m(t_k)|E_m(t_{k+1})> is real and positive, the O(h)
/// discretization of <E_m|dE_m/dt> = 0.
struct SpectralFlow {
    TimeGrid grid;
    int dim = 0;
    RealMatrix energies;            // n_points x N, tracked branches
    std::vector<Matrix> vectors;    // per point; column m is |E_m>
    std::vector<Matrix> couplings;  // per point; (m,l) = <E_m|dE_l/dt>, zero diagonal
    double min_gap = 0.0;           // smallest |E_m - E_l| over grid and pairs

    double energy(int k, int m) const { return energies(k, m); }
    double gap(int k, int m, int l) const { return energies(k, m) - energies(k, l); }
    Complex coupling(int k, int m, int l) const { return couplings[static_cast<std::size_t>(k)](m, l); }
};

/// Diagonalizes the model on every grid point and assembles the tracked,
/// gauge-fixed flow. Couplings use the identity
///   <E_m|dE_l/dt> = <E_m|dH/dt|E_l> / (E_l - E_m),  m != l,
/// when the model exposes a derivative, finite differences of the transported
/// vectors otherwise.
///
/// degeneracy_tol < 0 selects the default 1e-6 * max|E(0)|. Throws
/// DegeneracyError when any gap falls below it, ResolutionError when
/// consecutive eigenvector overlaps drop under 0.9.
SpectralFlow eigen_flow(const HamiltonianModel& model, const TimeGrid& grid, double degeneracy_tol = -1.0);

/// Couplings from the derivative identity above, cross-validated against
/// central differences of the transported eigenvectors. Disagreement beyond
/// 1e-5 in max modulus throws ConsistencyError.
std::vector<Matrix> couplings_hellmann_feynman(const HamiltonianModel& model, const SpectralFlow& flow);

struct ConstancyReport {
    bool gaps_constant = false;
    bool couplings_constant = false;
    double max_gap_deviation = 0.0;
    double max_coupling_deviation = 0.0;
    bool constant() const { return gaps_constant && couplings_constant; }
};

/// True per quantity iff it never strays more than tol from its t = 0 value.
ConstancyReport detect_constant(const SpectralFlow& flow, double tol = 1e-8);

/// CSV dump: t, E_1..E_N, then |g_ml| and arg(g_ml) for each ordered pair.
void write_flow_csv(const SpectralFlow& flow, std::ostream& out);

}  // namespace adiaudit
