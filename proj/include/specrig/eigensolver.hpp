#pragma once

#include <vector>

#include "specrig/profiles.hpp"

namespace specrig {

/// Generalized symmetric tridiagonal pair (A, M) for one angular degree l.
/// A acts on the active nodes (Dirichlet boundary nodes eliminated); M is the
/// diagonal positive mass r^2 e^{b-a} times the cell weight. Separation of
/// variables reduces the operator to (r^2 e^b f')' - l(l+1) e^b f = lambda
/// e^{b-a} r^2 f, discretized in conservative (flux) form.
struct TridiagonalPair {
    std::vector<double> diag;   // A main diagonal
    std::vector<double> off;    // A off-diagonal (size n-1)
    std::vector<double> mass;   // M diagonal
    int offset = 0;             // index of the first active node in the profile grid
    /// max |A - A^T| before symmetrization; the toroidal term lands on the
    /// diagonal so this is 0 by construction, reported per contract.
    double asymmetry_residual = 0.0;

    int size() const { return static_cast<int>(diag.size()); }
};

TridiagonalPair assemble_radial(const RadialProfile& profile, int l,
                                const BoundaryCondition& bc, OperatorVariant variant);

/// One radial eigenpair. f is sampled on the full profile grid (eliminated
/// Dirichlet nodes hold exact zeros) and is normalized to 1 in the discrete
/// e^{b-a} r^2 dr inner product. The angular multiplicity is 2l+1.
struct Mode {
    int l = 0;
    int n = 0;              // 1-based radial index per l
    double lambda = 0.0;
    std::vector<double> f;

    int multiplicity() const { return 2 * l + 1; }
    /// Frequency sqrt(-lambda); throws NumericalError for lambda > 0.
    double omega() const;
};

/// First n_max eigenpairs of A f = lambda M f for one l, sorted by lambda
/// descending (closest to zero first).
std::vector<Mode> solve_modes(const RadialProfile& profile, int l,
                              const BoundaryCondition& bc, OperatorVariant variant, int n_max);

/// Accidental (cross-(l,n)) near-coincidence of eigenvalues.
struct DegeneracyFlag {
    int l1, n1, l2, n2;
    double lambda1, lambda2;
};

struct Spectrum {
    std::vector<Mode> modes;                   // sorted by lambda descending
    std::vector<DegeneracyFlag> degeneracies;  // |dlambda| < rel_tol * |lambda| across distinct (l,n)

    /// Eigenvalues repeated by multiplicity 2l+1, same ordering as modes.
    std::vector<double> expanded() const;
    double lambda_abs_max() const;
};

/// Union over l <= l_max of solve_modes, with a degeneracy report.
/// Per-l problems are independent; threads > 1 solves them concurrently.
Spectrum full_spectrum(const RadialProfile& profile, const BoundaryCondition& bc,
                       OperatorVariant variant, int l_max, int n_max,
                       int threads = 1, double degeneracy_rel = 1e-8);

} // namespace specrig
