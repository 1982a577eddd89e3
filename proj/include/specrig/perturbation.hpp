#pragma once

#include <optional>
#include <vector>

#include "specrig/eigensolver.hpp"
#include "specrig/linalg.hpp"
#include "specrig/profiles.hpp"

namespace specrig {

/// One-parameter coefficient family at s = 0: directions a' and b', and
/// optionally b'' for the second-order step (used with b' = 0).
struct PerturbationFamily {
    RadialFn a_dir = RadialFn::zero();
    RadialFn b_dir = RadialFn::zero();
    std::optional<RadialFn> b_dir2;

    static PerturbationFamily from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// First-order eigenvalue shift under a -> a + s a':
///   dlambda = lambda * int a' |f|^2 e^{b-a} r^2 dr,
/// with the cell quadrature matched to the discrete normalization (exact for
/// constant directions). Throws ConfigError if the mode norm deviates from 1
/// by more than 1e-6.
double delta_lambda_a(const Mode& mode, const std::vector<double>& a_dir, const RadialProfile& profile);

/// First-order shift under b -> b + s b' (gradient form):
///   dlambda = (1/2) int e^b d_r b' d_r(|f|^2) r^2 dr,
/// evaluated as a face-centered sum so that the constant (gauge) direction is
/// annihilated exactly and summation by parts against the divergence form is
/// exact for Dirichlet modes.
double delta_lambda_b(const Mode& mode, const std::vector<double>& b_dir, const RadialProfile& profile);

/// Divergence form of the same shift:
///   -(1/2) int |f|^2 d_r(r^2 e^b d_r b') dr.
/// Independent node-based evaluation, used for the integration-by-parts check.
double delta_lambda_b_divergence(const Mode& mode, const std::vector<double>& b_dir,
                                 const RadialProfile& profile);

/// Second-order shift for a family with b' = 0 and b'' = b_dir2; the bilinear
/// form is the same as delta_lambda_b. The caller asserts the first-order
/// direction vanishes.
double delta2_lambda_b(const Mode& mode, const std::vector<double>& b_dir2, const RadialProfile& profile);

struct ModeDelta {
    int l = 0, n = 0;
    double lambda = 0.0;
    double dlambda = 0.0;
};

/// Per-(l,n) first-order shifts dlambda = delta_lambda_a + delta_lambda_b.
/// Spherical symmetry gives one value per (l,n); the m-index never enters.
std::vector<ModeDelta> delta_spectrum(const RadialProfile& profile, const BoundaryCondition& bc,
                                      OperatorVariant variant, const PerturbationFamily& family,
                                      int l_max, int n_max, int threads = 1);

/// Profile displaced along the family: a + s a', b + s b' + (s^2/2) b''.
RadialProfile displaced_profile(const RadialProfile& base, const PerturbationFamily& family, double s);

/// Central finite-difference oracle over re-solved spectra:
/// (lambda(+h) - lambda(-h)) / 2h for the (l,n) mode.
double fd_delta_lambda(const RadialProfile& base, const BoundaryCondition& bc, OperatorVariant variant,
                       const PerturbationFamily& family, int l, int n, double step);

/// Batched FD oracle: two full re-solves, one central difference per (l,n).
std::vector<ModeDelta> fd_delta_spectrum(const RadialProfile& base, const BoundaryCondition& bc,
                                         OperatorVariant variant, const PerturbationFamily& family,
                                         int l_max, int n_max, double step, int threads = 1);

/// Second central difference (lambda(h) - 2 lambda(0) + lambda(-h)) / h^2.
double fd_delta2_lambda(const RadialProfile& base, const BoundaryCondition& bc, OperatorVariant variant,
                        const PerturbationFamily& family, int l, int n, double step);

/// Energy value -int e^b (d_r b')^2 r^2 dr (face-midpoint sum).
double energy_gradient(const RadialProfile& profile, const std::vector<double>& b_dir);
/// Pairing int b' Div(e^b grad b') r^2 dr (node sum); equals energy_gradient
/// by discrete summation by parts when the boundary terms vanish.
double energy_pairing(const RadialProfile& profile, const std::vector<double>& b_dir);

/// Gram matrix of squared eigenfunctions against radial basis functions,
/// Q[k][j] = int phi_j |f_k|^2 e^{b-a} r^2 dr, with its smallest singular
/// value. Requires K >= J.
struct GramResult {
    Matrix q;            // K x J
    double sigma_min = 0.0;
};
GramResult density_gram(const std::vector<Mode>& modes,
                        const std::vector<std::vector<double>>& basis_samples,
                        const RadialProfile& profile);

/// Samples of the first j_count shifted Legendre polynomials on [R, 1].
std::vector<std::vector<double>> legendre_basis(const RadialGrid& grid, int j_count);

} // namespace specrig
