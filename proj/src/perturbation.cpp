#include "specrig/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "specrig/errors.hpp"
#include "specrig/numerics.hpp"

namespace specrig {

namespace {

void check_sizes(const Mode& mode, const std::vector<double>& dir, const RadialProfile& profile,
                 const char* what) {
    if (static_cast<int>(mode.f.size()) != profile.size() ||
        static_cast<int>(dir.size()) != profile.size())
        throw ConfigError(std::string(what) + ": direction/mode not sampled on the profile grid");
    double norm2 = 0.0;
    for (int i = 0; i < profile.size(); ++i) {
        const double r = profile.grid.nodes[i];
        norm2 += profile.grid.cell_weights[i] * profile.rho[i] * r * r * sq(mode.f[i]);
    }
    if (std::abs(norm2 - 1.0) > 1e-6)
        throw ConfigError(std::string(what) + ": mode is not normalized (norm^2 = " +
                          std::to_string(norm2) + ")");
}

// r^2 e^b d_r(dir) at interior face k, from node samples.
double face_p_dir(const RadialProfile& profile, const std::vector<double>& dir, int k) {
    const RadialGrid& g = profile.grid;
    return sq(g.face(k)) * std::exp(0.5 * (profile.b[k] + profile.b[k + 1])) *
           (dir[k + 1] - dir[k]) / g.h;
}

// One-sided values at the boundary faces, used only by the divergence/pairing
// forms; the terms they multiply vanish for the families these forms serve.
double boundary_p_dir(const RadialProfile& profile, const std::vector<double>& dir, bool outer) {
    const RadialGrid& g = profile.grid;
    const int n = profile.size();
    if (!outer && profile.is_ball()) return 0.0;   // r^2 -> 0
    if (outer)
        return profile.eb[n - 1] * (dir[n - 1] - dir[n - 2]) / g.h;
    return sq(g.inner_face()) * profile.eb[0] * (dir[1] - dir[0]) / g.h;
}

} // namespace

double delta_lambda_a(const Mode& mode, const std::vector<double>& a_dir, const RadialProfile& profile) {
    check_sizes(mode, a_dir, profile, "delta_lambda_a");
    double acc = 0.0;
    for (int i = 0; i < profile.size(); ++i) {
        const double r = profile.grid.nodes[i];
        acc += profile.grid.cell_weights[i] * a_dir[i] * profile.rho[i] * r * r * sq(mode.f[i]);
    }
    return mode.lambda * acc;
}

double delta_lambda_b(const Mode& mode, const std::vector<double>& b_dir, const RadialProfile& profile) {
    check_sizes(mode, b_dir, profile, "delta_lambda_b");
    // (1/2) sum over faces of r^2 e^b d_r b' * (f^2_{k+1} - f^2_k); a
    // face-centered midpoint rule that kills constant directions exactly.
    double acc = 0.0;
    for (int k = 0; k + 1 < profile.size(); ++k)
        acc += face_p_dir(profile, b_dir, k) * (sq(mode.f[k + 1]) - sq(mode.f[k]));
    return 0.5 * acc;
}

double delta_lambda_b_divergence(const Mode& mode, const std::vector<double>& b_dir,
                                 const RadialProfile& profile) {
    check_sizes(mode, b_dir, profile, "delta_lambda_b_divergence");
    const int n = profile.size();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double left = (i == 0) ? boundary_p_dir(profile, b_dir, false)
                                     : face_p_dir(profile, b_dir, i - 1);
        const double right = (i + 1 == n) ? boundary_p_dir(profile, b_dir, true)
                                          : face_p_dir(profile, b_dir, i);
        acc += sq(mode.f[i]) * (right - left);
    }
    return -0.5 * acc;
}

double delta2_lambda_b(const Mode& mode, const std::vector<double>& b_dir2, const RadialProfile& profile) {
    // Same bilinear form; valid when the first-order direction vanishes.
    return delta_lambda_b(mode, b_dir2, profile);
}

double energy_gradient(const RadialProfile& profile, const std::vector<double>& b_dir) {
    const RadialGrid& g = profile.grid;
    double acc = 0.0;
    for (int k = 0; k + 1 < profile.size(); ++k) {
        const double p = sq(g.face(k)) * std::exp(0.5 * (profile.b[k] + profile.b[k + 1]));
        acc += p * sq(b_dir[k + 1] - b_dir[k]) / g.h;
    }
    return -acc;
}

double energy_pairing(const RadialProfile& profile, const std::vector<double>& b_dir) {
    const int n = profile.size();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double left = (i == 0) ? boundary_p_dir(profile, b_dir, false)
                                     : face_p_dir(profile, b_dir, i - 1);
        const double right = (i + 1 == n) ? boundary_p_dir(profile, b_dir, true)
                                          : face_p_dir(profile, b_dir, i);
        acc += b_dir[i] * (right - left);
    }
    return acc;
}

PerturbationFamily PerturbationFamily::from_json(const nlohmann::json& j) {
    PerturbationFamily fam;
    if (j.contains("a_dir")) fam.a_dir = RadialFn::from_json(j.at("a_dir"));
    if (j.contains("b_dir")) fam.b_dir = RadialFn::from_json(j.at("b_dir"));
    if (j.contains("b_dir2")) fam.b_dir2 = RadialFn::from_json(j.at("b_dir2"));
    return fam;
}

nlohmann::json PerturbationFamily::to_json() const {
    nlohmann::json j{{"a_dir", a_dir.to_json()}, {"b_dir", b_dir.to_json()}};
    if (b_dir2) j["b_dir2"] = b_dir2->to_json();
    return j;
}

std::vector<ModeDelta> delta_spectrum(const RadialProfile& profile, const BoundaryCondition& bc,
                                      OperatorVariant variant, const PerturbationFamily& family,
                                      int l_max, int n_max, int threads) {
    const Spectrum spec = full_spectrum(profile, bc, variant, l_max, n_max, threads);
    const std::vector<double> a_dir = profile.sample(family.a_dir);
    const std::vector<double> b_dir = profile.sample(family.b_dir);
    const bool a_zero = family.a_dir.is_zero();
    const bool b_zero = family.b_dir.is_zero();

    std::vector<ModeDelta> out;
    out.reserve(spec.modes.size());
    for (const Mode& mode : spec.modes) {
        double d = 0.0;
        if (!a_zero) d += delta_lambda_a(mode, a_dir, profile);
        if (!b_zero) d += delta_lambda_b(mode, b_dir, profile);
        out.push_back({mode.l, mode.n, mode.lambda, d});
    }
    return out;
}

RadialProfile displaced_profile(const RadialProfile& base, const PerturbationFamily& family, double s) {
    std::vector<double> a = base.a, b = base.b;
    const std::vector<double> a_dir = base.sample(family.a_dir);
    const std::vector<double> b_dir = base.sample(family.b_dir);
    for (int i = 0; i < base.size(); ++i) {
        a[i] += s * a_dir[i];
        b[i] += s * b_dir[i];
    }
    if (family.b_dir2) {
        const std::vector<double> b2 = base.sample(*family.b_dir2);
        for (int i = 0; i < base.size(); ++i) b[i] += 0.5 * s * s * b2[i];
    }
    return make_profile(RadialFn::samples(base.grid.nodes, std::move(a)),
                        RadialFn::samples(base.grid.nodes, std::move(b)),
                        base.grid.inner_radius, base.size());
}

namespace {

double lambda_at(const RadialProfile& base, const BoundaryCondition& bc, OperatorVariant variant,
                 const PerturbationFamily& family, int l, int n, double s) {
    const RadialProfile moved = displaced_profile(base, family, s);
    const std::vector<Mode> modes = solve_modes(moved, l, bc, variant, n);
    if (static_cast<int>(modes.size()) < n)
        throw NumericalError("fd oracle: mode (l=" + std::to_string(l) + ", n=" + std::to_string(n) +
                             ") not available");
    return modes[n - 1].lambda;
}

} // namespace

double fd_delta_lambda(const RadialProfile& base, const BoundaryCondition& bc, OperatorVariant variant,
                       const PerturbationFamily& family, int l, int n, double step) {
    const double plus = lambda_at(base, bc, variant, family, l, n, step);
    const double minus = lambda_at(base, bc, variant, family, l, n, -step);
    return (plus - minus) / (2.0 * step);
}

double fd_delta2_lambda(const RadialProfile& base, const BoundaryCondition& bc, OperatorVariant variant,
                        const PerturbationFamily& family, int l, int n, double step) {
    const double plus = lambda_at(base, bc, variant, family, l, n, step);
    const double center = lambda_at(base, bc, variant, family, l, n, 0.0);
    const double minus = lambda_at(base, bc, variant, family, l, n, -step);
    return (plus - 2.0 * center + minus) / (step * step);
}

std::vector<ModeDelta> fd_delta_spectrum(const RadialProfile& base, const BoundaryCondition& bc,
                                         OperatorVariant variant, const PerturbationFamily& family,
                                         int l_max, int n_max, double step, int threads) {
    const Spectrum plus = full_spectrum(displaced_profile(base, family, step), bc, variant,
                                        l_max, n_max, threads);
    const Spectrum minus = full_spectrum(displaced_profile(base, family, -step), bc, variant,
                                         l_max, n_max, threads);
    std::map<std::pair<int, int>, double> lambda_minus;
    for (const Mode& m : minus.modes) lambda_minus[{m.l, m.n}] = m.lambda;

    std::vector<ModeDelta> out;
    out.reserve(plus.modes.size());
    for (const Mode& m : plus.modes) {
        const auto it = lambda_minus.find({m.l, m.n});
        if (it == lambda_minus.end())
            throw NumericalError("fd_delta_spectrum: mode sets differ between displaced solves");
        out.push_back({m.l, m.n, 0.5 * (m.lambda + it->second),
                       (m.lambda - it->second) / (2.0 * step)});
    }
    std::sort(out.begin(), out.end(), [](const ModeDelta& x, const ModeDelta& y) {
        if (x.lambda != y.lambda) return x.lambda > y.lambda;
        if (x.l != y.l) return x.l < y.l;
        return x.n < y.n;
    });
    return out;
}

GramResult density_gram(const std::vector<Mode>& modes,
                        const std::vector<std::vector<double>>& basis_samples,
                        const RadialProfile& profile) {
    const int k_count = static_cast<int>(modes.size());
    const int j_count = static_cast<int>(basis_samples.size());
    if (k_count < j_count) throw ConfigError("density_gram: need at least as many modes as basis functions");
    for (const auto& phi : basis_samples)
        if (static_cast<int>(phi.size()) != profile.size())
            throw ConfigError("density_gram: basis not sampled on the profile grid");

    GramResult out;
    out.q = Matrix(k_count, j_count);
    for (int k = 0; k < k_count; ++k) {
        const Mode& mode = modes[k];
        for (int j = 0; j < j_count; ++j) {
            double acc = 0.0;
            for (int i = 0; i < profile.size(); ++i) {
                const double r = profile.grid.nodes[i];
                acc += profile.grid.cell_weights[i] * basis_samples[j][i] * profile.rho[i] * r * r *
                       sq(mode.f[i]);
            }
            out.q(k, j) = acc;
        }
    }
    const Svd svd = jacobi_svd(out.q);
    out.sigma_min = svd.sigma.back();
    return out;
}

std::vector<std::vector<double>> legendre_basis(const RadialGrid& grid, int j_count) {
    if (j_count < 1) throw ConfigError("legendre_basis: need at least one function");
    const double lo = grid.inner_radius;
    std::vector<std::vector<double>> basis(j_count, std::vector<double>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) {
        const double x = 2.0 * (grid.nodes[i] - lo) / (1.0 - lo) - 1.0;
        double pm1 = 1.0, p = x;
        basis[0][i] = 1.0;
        if (j_count > 1) basis[1][i] = x;
        for (int j = 2; j < j_count; ++j) {
            const double next = ((2 * j - 1) * x * p - (j - 1) * pm1) / j;
            basis[j][i] = next;
            pm1 = p;
            p = next;
        }
    }
    return basis;
}

} // namespace specrig
