#include "specrig/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "specrig/errors.hpp"
#include "specrig/linalg.hpp"
#include "specrig/numerics.hpp"

namespace specrig {

TridiagonalPair assemble_radial(const RadialProfile& profile, int l,
                                const BoundaryCondition& bc, OperatorVariant variant) {
    if (l < 0) throw ConfigError("assemble_radial: l must be >= 0");
    const RadialGrid& grid = profile.grid;
    const int n_nodes = grid.size();
    const double h = grid.h;

    if (variant == OperatorVariant::Toroidal) {
        for (double r : grid.nodes)
            if (r == 0.0) throw ConfigError("toroidal variant is singular at r = 0");
    }

    // r^2 e^b at cell faces; e^b interpolated as the geometric mean.
    std::vector<double> p_face(n_nodes - 1);
    for (int k = 0; k + 1 < n_nodes; ++k)
        p_face[k] = sq(grid.face(k)) * std::exp(0.5 * (profile.b[k] + profile.b[k + 1]));
    const double p_inner = profile.is_ball() ? 0.0 : sq(grid.inner_face()) * profile.eb.front();
    const double p_outer = profile.eb.back();   // r = 1

    const bool inner_dirichlet = !profile.is_ball() && bc.inner == BcKind::Dirichlet;
    const int lo = inner_dirichlet ? 1 : 0;
    const int hi = (bc.outer == BcKind::Dirichlet) ? n_nodes - 2 : n_nodes - 1;
    const int n = hi - lo + 1;
    if (n < 2) throw ConfigError("assemble_radial: grid too small for boundary conditions");

    TridiagonalPair out;
    out.offset = lo;
    out.diag.assign(n, 0.0);
    out.off.assign(n - 1, 0.0);
    out.mass.assign(n, 0.0);

    // Interior-face flux couplings; a face touching an eliminated Dirichlet
    // node contributes only to the active neighbor's diagonal.
    for (int k = 0; k + 1 < n_nodes; ++k) {
        const int i = k, j = k + 1;
        const bool i_active = i >= lo && i <= hi;
        const bool j_active = j >= lo && j <= hi;
        const double coupling = p_face[k] / h;
        if (i_active) out.diag[i - lo] -= coupling;
        if (j_active) out.diag[j - lo] -= coupling;
        if (i_active && j_active) out.off[i - lo] += coupling;
    }

    // Boundary flux closures for Neumann/Robin (d_r f = kappa f, outward +r).
    if (!profile.is_ball() && !inner_dirichlet && bc.inner == BcKind::Robin)
        out.diag[0] -= p_inner * bc.inner_kappa;
    if (bc.outer == BcKind::Robin) out.diag[n - 1] += p_outer * bc.outer_kappa;

    std::vector<double> b_r;
    if (variant == OperatorVariant::Toroidal) {
        if (profile.b_fn && profile.b_fn->analytic()) {
            b_r.resize(n_nodes);
            for (int i = 0; i < n_nodes; ++i) b_r[i] = profile.b_fn->deriv(grid.nodes[i]);
        } else {
            b_r = derivative_uniform(profile.b, h);
        }
    }

    const double ll1 = static_cast<double>(l) * (l + 1);
    for (int i = lo; i <= hi; ++i) {
        const double w = grid.cell_weights[i];
        const double r = grid.nodes[i];
        out.diag[i - lo] -= w * ll1 * profile.eb[i];
        if (variant == OperatorVariant::Toroidal)
            out.diag[i - lo] -= w * r * profile.eb[i] * b_r[i];
        out.mass[i - lo] = w * profile.rho[i] * r * r;
    }
    out.asymmetry_residual = 0.0;   // zeroth-order terms land on the diagonal
    return out;
}

double Mode::omega() const {
    if (lambda > 1e-12)
        throw NumericalError("mode (l=" + std::to_string(l) + ", n=" + std::to_string(n) +
                             ") has positive eigenvalue; no real frequency");
    return std::sqrt(std::max(0.0, -lambda));
}

std::vector<Mode> solve_modes(const RadialProfile& profile, int l,
                              const BoundaryCondition& bc, OperatorVariant variant, int n_max) {
    if (n_max < 1) throw ConfigError("solve_modes: n_max must be >= 1");
    const TridiagonalPair pair = assemble_radial(profile, l, bc, variant);
    const int n = pair.size();

    // Diagonal similarity M^{-1/2} A M^{-1/2}: spectrum preserved, eigenvectors
    // map back by g -> g / sqrt(M), which are exactly the M-orthonormal modes.
    std::vector<double> sqrt_m(n);
    for (int i = 0; i < n; ++i) sqrt_m[i] = std::sqrt(pair.mass[i]);
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) d[i] = pair.diag[i] / pair.mass[i];
    for (int i = 0; i + 1 < n; ++i) e[i] = pair.off[i] / (sqrt_m[i] * sqrt_m[i + 1]);

    TridiagEigen eig;
    try {
        eig = largest_tridiag_eigenpairs(std::move(d), std::move(e), std::min(n_max, n));
    } catch (const NumericalError& err) {
        throw NumericalError("solve_modes(l=" + std::to_string(l) + "): " + err.what());
    }

    const int count = static_cast<int>(eig.values.size());
    std::vector<Mode> modes(count);
    for (int j = 0; j < count; ++j) {
        const int src = count - 1 - j;   // ascending -> lambda descending
        Mode& mode = modes[j];
        mode.l = l;
        mode.n = j + 1;
        mode.lambda = eig.values[src];
        mode.f.assign(profile.size(), 0.0);
        for (int i = 0; i < n; ++i) mode.f[pair.offset + i] = eig.vectors[src][i] / sqrt_m[i];

        int imax = 0;
        for (int i = 1; i < profile.size(); ++i)
            if (std::abs(mode.f[i]) > std::abs(mode.f[imax])) imax = i;
        if (mode.f[imax] < 0.0)
            for (double& v : mode.f) v = -v;

        double norm2 = 0.0;
        for (int i = 0; i < profile.size(); ++i) {
            const double r = profile.grid.nodes[i];
            norm2 += profile.grid.cell_weights[i] * profile.rho[i] * r * r * sq(mode.f[i]);
        }
        const double scale = 1.0 / std::sqrt(norm2);
        for (double& v : mode.f) v *= scale;
    }
    return modes;
}

std::vector<double> Spectrum::expanded() const {
    std::vector<double> out;
    out.reserve(modes.size() * 3);
    for (const Mode& m : modes)
        out.insert(out.end(), m.multiplicity(), m.lambda);
    return out;
}

double Spectrum::lambda_abs_max() const {
    double v = 0.0;
    for (const Mode& m : modes) v = std::max(v, std::abs(m.lambda));
    return v;
}

Spectrum full_spectrum(const RadialProfile& profile, const BoundaryCondition& bc,
                       OperatorVariant variant, int l_max, int n_max,
                       int threads, double degeneracy_rel) {
    if (l_max < 0) throw ConfigError("full_spectrum: l_max must be >= 0");
    std::vector<std::vector<Mode>> per_l(l_max + 1);

    if (threads > 1) {
        std::exception_ptr first_error;
        std::vector<std::thread> pool;
        std::mutex error_mutex;
        const int nt = std::min(threads, l_max + 1);
        for (int t = 0; t < nt; ++t) {
            pool.emplace_back([&, t]() {
                try {
                    for (int l = t; l <= l_max; l += nt)
                        per_l[l] = solve_modes(profile, l, bc, variant, n_max);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    } else {
        for (int l = 0; l <= l_max; ++l) per_l[l] = solve_modes(profile, l, bc, variant, n_max);
    }

    Spectrum spec;
    for (auto& block : per_l)
        spec.modes.insert(spec.modes.end(), std::make_move_iterator(block.begin()),
                          std::make_move_iterator(block.end()));
    std::sort(spec.modes.begin(), spec.modes.end(), [](const Mode& x, const Mode& y) {
        if (x.lambda != y.lambda) return x.lambda > y.lambda;
        if (x.l != y.l) return x.l < y.l;
        return x.n < y.n;
    });

    for (std::size_t i = 0; i + 1 < spec.modes.size(); ++i) {
        for (std::size_t j = i + 1; j < spec.modes.size(); ++j) {
            const Mode& x = spec.modes[i];
            const Mode& y = spec.modes[j];
            const double scale = std::max(std::abs(x.lambda), std::abs(y.lambda));
            if (std::abs(x.lambda - y.lambda) >= degeneracy_rel * scale) break;
            spec.degeneracies.push_back({x.l, x.n, y.l, y.n, x.lambda, y.lambda});
        }
    }
    return spec;
}

} // namespace specrig
