#include "specrig/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "specrig/errors.hpp"
#include "specrig/numerics.hpp"

namespace specrig {

namespace {

// Cubic Hermite interpolation on a sorted grid with finite-difference slopes.
// Queries are clamped to the grid range.
double hermite_eval(const std::vector<double>& x, const std::vector<double>& y, double r, bool want_deriv) {
    const int n = static_cast<int>(x.size());
    if (n == 1) return want_deriv ? 0.0 : y[0];
    r = std::clamp(r, x.front(), x.back());
    int k = static_cast<int>(std::upper_bound(x.begin(), x.end(), r) - x.begin()) - 1;
    k = std::clamp(k, 0, n - 2);
    const double h = x[k + 1] - x[k];
    auto slope = [&](int i) {
        if (i == 0) return (y[1] - y[0]) / (x[1] - x[0]);
        if (i == n - 1) return (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
        return (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1]);
    };
    const double m0 = slope(k), m1 = slope(k + 1);
    const double t = (r - x[k]) / h;
    if (!want_deriv) {
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y[k] + (t3 - 2 * t2 + t) * h * m0 +
               (-2 * t3 + 3 * t2) * y[k + 1] + (t3 - t2) * h * m1;
    }
    return ((6 * t * t - 6 * t) * y[k] + (3 * t * t - 4 * t + 1) * h * m0 +
            (-6 * t * t + 6 * t) * y[k + 1] + (3 * t * t - 2 * t) * h * m1) / h;
}

double poly_eval(const std::vector<double>& c, double r) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * r + *it;
    return v;
}

double poly_deriv(const std::vector<double>& c, double r) {
    double v = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) v = v * r + k * c[k];
    return v;
}

// BumpSum params layout: [window_flag, amp_0, center_0, width_0, amp_1, ...].
double bump_sum(const std::vector<double>& p, double r, bool want_deriv) {
    const bool window = p[0] != 0.0;
    double s = 0.0, ds = 0.0;
    for (std::size_t i = 1; i + 2 < p.size(); i += 3) {
        const double amp = p[i], ctr = p[i + 1], width = p[i + 2];
        const double z = (r - ctr) / width;
        const double g = amp * std::exp(-0.5 * z * z);
        s += g;
        ds += -g * z / width;
    }
    const double w = window ? (1.0 - r) : 1.0;
    if (!want_deriv) return s * w;
    return window ? (ds * w - s) : ds;
}

} // namespace

double RadialFn::operator()(double r) const {
    switch (kind) {
        case Kind::Constant: return params[0];
        case Kind::Linear: return params[0] + params[1] * r;
        case Kind::Gaussian: {
            const double z = (r - params[1]) / params[2];
            return params[0] * std::exp(-0.5 * z * z);
        }
        case Kind::Polynomial: return poly_eval(params, r);
        case Kind::LogR: return params[0] * std::log(r);
        case Kind::BumpSum: return bump_sum(params, r, false);
        case Kind::Samples: return hermite_eval(grid, values, r, false);
    }
    return 0.0;
}

double RadialFn::deriv(double r) const {
    switch (kind) {
        case Kind::Constant: return 0.0;
        case Kind::Linear: return params[1];
        case Kind::Gaussian: {
            const double z = (r - params[1]) / params[2];
            return -params[0] * std::exp(-0.5 * z * z) * z / params[2];
        }
        case Kind::Polynomial: return poly_deriv(params, r);
        case Kind::LogR: return params[0] / r;
        case Kind::BumpSum: return bump_sum(params, r, true);
        case Kind::Samples: return hermite_eval(grid, values, r, true);
    }
    return 0.0;
}

RadialFn RadialFn::samples(std::vector<double> r, std::vector<double> v) {
    if (r.size() != v.size() || r.size() < 2) throw ConfigError("sampled function: need matching r/value arrays");
    RadialFn f;
    f.kind = Kind::Samples;
    f.grid = std::move(r);
    f.values = std::move(v);
    return f;
}

RadialFn RadialFn::from_json(const nlohmann::json& j) {
    if (j.is_number()) return constant(j.get<double>());
    const std::string kind = j.value("kind", "constant");
    const auto params = j.value("params", nlohmann::json::object());
    if (kind == "constant") return constant(params.value("value", 0.0));
    if (kind == "linear") return linear(params.value("intercept", 0.0), params.value("slope", 0.0));
    if (kind == "gaussian")
        return gaussian(params.value("amplitude", 0.0), params.value("center", 0.5),
                        params.value("width", 0.1));
    if (kind == "polynomial") {
        if (!params.contains("coeffs")) throw ConfigError("polynomial function: missing coeffs");
        return polynomial(params.at("coeffs").get<std::vector<double>>());
    }
    if (kind == "log") return log_r(params.value("coeff", 0.0));
    if (kind == "samples") {
        return samples(params.at("r").get<std::vector<double>>(),
                       params.at("values").get<std::vector<double>>());
    }
    if (kind == "bump_sum") {
        RadialFn f;
        f.kind = Kind::BumpSum;
        f.params = params.at("flat").get<std::vector<double>>();
        if (f.params.empty() || (f.params.size() - 1) % 3 != 0)
            throw ConfigError("bump_sum: flat array must be [window, (amp, center, width)...]");
        return f;
    }
    throw ConfigError("unknown radial function kind '" + kind + "'");
}

nlohmann::json RadialFn::to_json() const {
    nlohmann::json p;
    switch (kind) {
        case Kind::Constant: return {{"kind", "constant"}, {"params", {{"value", params[0]}}}};
        case Kind::Linear:
            return {{"kind", "linear"}, {"params", {{"intercept", params[0]}, {"slope", params[1]}}}};
        case Kind::Gaussian:
            return {{"kind", "gaussian"},
                    {"params", {{"amplitude", params[0]}, {"center", params[1]}, {"width", params[2]}}}};
        case Kind::Polynomial: return {{"kind", "polynomial"}, {"params", {{"coeffs", params}}}};
        case Kind::LogR: return {{"kind", "log"}, {"params", {{"coeff", params[0]}}}};
        case Kind::Samples:
            return {{"kind", "samples"}, {"params", {{"r", grid}, {"values", values}}}};
        case Kind::BumpSum: return {{"kind", "bump_sum"}, {"params", {{"flat", params}}}};
    }
    return {};
}

RadialFn random_smooth_fn(std::uint64_t seed, double r_lo, double amplitude, bool zero_at_outer) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double span = 1.0 - r_lo;
    RadialFn f;
    f.kind = RadialFn::Kind::BumpSum;
    f.params.push_back(zero_at_outer ? 1.0 : 0.0);
    for (int k = 0; k < 3; ++k) {
        const double amp = amplitude * (2.0 * unit(rng) - 1.0);
        const double ctr = r_lo + span * (0.1 + 0.72 * unit(rng));
        const double width = span * (0.06 + 0.12 * unit(rng));
        f.params.insert(f.params.end(), {amp, ctr, width});
    }
    return f;
}

BoundaryCondition BoundaryCondition::from_json(const nlohmann::json& j) {
    BoundaryCondition bc;
    auto parse_side = [](const nlohmann::json& side, BcKind& kind, double& kappa) {
        if (side.is_string()) {
            const std::string s = side.get<std::string>();
            if (s == "dirichlet") kind = BcKind::Dirichlet;
            else if (s == "neumann") kind = BcKind::Neumann;
            else throw ConfigError("unknown boundary condition '" + s + "'");
            kappa = 0.0;
            return;
        }
        const std::string s = side.value("kind", "dirichlet");
        if (s == "dirichlet") kind = BcKind::Dirichlet;
        else if (s == "neumann") kind = BcKind::Neumann;
        else if (s == "robin") {
            kind = BcKind::Robin;
            kappa = side.value("kappa", 1.0);
            if (!std::isfinite(kappa)) throw ConfigError("robin coefficient must be finite");
        } else {
            throw ConfigError("unknown boundary condition '" + s + "'");
        }
    };
    if (j.is_string()) {
        parse_side(j, bc.outer, bc.outer_kappa);
        bc.inner = bc.outer;
        bc.inner_kappa = bc.outer_kappa;
        return bc;
    }
    if (j.contains("outer")) parse_side(j.at("outer"), bc.outer, bc.outer_kappa);
    if (j.contains("inner")) parse_side(j.at("inner"), bc.inner, bc.inner_kappa);
    return bc;
}

nlohmann::json BoundaryCondition::to_json() const {
    auto side = [](BcKind kind, double kappa) -> nlohmann::json {
        switch (kind) {
            case BcKind::Dirichlet: return "dirichlet";
            case BcKind::Neumann: return "neumann";
            case BcKind::Robin: return {{"kind", "robin"}, {"kappa", kappa}};
        }
        return "dirichlet";
    };
    return {{"outer", side(outer, outer_kappa)}, {"inner", side(inner, inner_kappa)}};
}

OperatorVariant variant_from_string(const std::string& s) {
    if (s == "standard") return OperatorVariant::Standard;
    if (s == "toroidal") return OperatorVariant::Toroidal;
    throw ConfigError("unknown operator variant '" + s + "'");
}

std::string to_string(OperatorVariant v) {
    return v == OperatorVariant::Standard ? "standard" : "toroidal";
}

RadialGrid RadialGrid::make(double inner_radius, int n) {
    RadialGrid g;
    g.inner_radius = inner_radius;
    g.staggered = inner_radius == 0.0;
    g.nodes.resize(n);
    if (g.staggered) {
        g.h = 1.0 / (n - 0.5);
        for (int i = 0; i < n; ++i) g.nodes[i] = (i + 0.5) * g.h;
    } else {
        g.h = (1.0 - inner_radius) / (n - 1);
        for (int i = 0; i < n; ++i) g.nodes[i] = inner_radius + i * g.h;
    }
    g.nodes.back() = 1.0;
    g.cell_weights.resize(n);
    double prev_face = g.inner_face();
    for (int i = 0; i < n; ++i) {
        const double next_face = (i + 1 < n) ? g.face(i) : 1.0;
        g.cell_weights[i] = next_face - prev_face;
        prev_face = next_face;
    }
    return g;
}

double RadialProfile::speed(double r) const {
    if (a_fn && a_fn->analytic()) return std::exp(0.5 * (*a_fn)(r));
    return hermite_eval(grid.nodes, c, r, false);
}

double RadialProfile::speed_deriv(double r) const {
    if (a_fn && a_fn->analytic()) return 0.5 * speed(r) * a_fn->deriv(r);
    return hermite_eval(grid.nodes, c, r, true);
}

double RadialProfile::a_deriv(double r) const {
    if (a_fn && a_fn->analytic()) return a_fn->deriv(r);
    return hermite_eval(grid.nodes, a, r, true);
}

std::vector<double> RadialProfile::sample(const RadialFn& f) const {
    std::vector<double> out(grid.nodes.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(grid.nodes[i]);
    return out;
}

double RadialProfile::integrate(const std::vector<double>& g) const {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += grid.cell_weights[i] * g[i];
    return s;
}

RadialProfile make_profile(const RadialFn& a, const RadialFn& b, double inner_radius, int n) {
    if (!(inner_radius >= 0.0) || inner_radius >= 1.0) throw ConfigError("R out of range");
    if (n < 16) throw ConfigError("grid too coarse (N < 16)");

    RadialProfile p;
    p.grid = RadialGrid::make(inner_radius, n);

    auto sample_fn = [&](const RadialFn& f) -> std::vector<double> {
        if (f.kind == RadialFn::Kind::Samples && f.grid.size() == p.grid.nodes.size() &&
            std::equal(f.grid.begin(), f.grid.end(), p.grid.nodes.begin())) {
            return f.values;   // bit-identical regeneration from own samples
        }
        return p.sample(f);
    };
    p.a = sample_fn(a);
    p.b = sample_fn(b);
    if (a.analytic()) p.a_fn = a;
    if (b.analytic()) p.b_fn = b;

    p.c.resize(n);
    p.rho.resize(n);
    p.eb.resize(n);
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(p.a[i]) || !std::isfinite(p.b[i]))
            throw ConfigError("profile samples must be finite");
        p.c[i] = std::exp(0.5 * p.a[i]);
        p.rho[i] = std::exp(p.b[i] - p.a[i]);
        p.eb[i] = std::exp(p.b[i]);
        if (!(p.c[i] > 0.0) || !std::isfinite(p.c[i])) throw ConfigError("non-positive wave speed");
        if (!std::isfinite(p.rho[i]) || !std::isfinite(p.eb[i]))
            throw ConfigError("profile coefficients overflow");
    }
    return p;
}

RadialProfile make_profile(const ProfileSpec& spec) {
    return make_profile(spec.a, spec.b, spec.inner_radius, spec.n);
}

ProfileSpec ProfileSpec::from_json(const nlohmann::json& j) {
    ProfileSpec s;
    s.inner_radius = j.value("R", 0.0);
    s.n = j.value("N", 200);
    if (j.contains("a")) s.a = RadialFn::from_json(j.at("a"));
    if (j.contains("b")) s.b = RadialFn::from_json(j.at("b"));
    if (j.contains("bc")) s.bc = BoundaryCondition::from_json(j.at("bc"));
    if (j.contains("variant")) s.variant = variant_from_string(j.at("variant").get<std::string>());
    return s;
}

nlohmann::json ProfileSpec::to_json() const {
    return {{"R", inner_radius}, {"N", n},      {"a", a.to_json()},
            {"b", b.to_json()},  {"bc", bc.to_json()}, {"variant", to_string(variant)}};
}

double herglotz_margin(const RadialProfile& profile) {
    const int n = profile.size();
    if (n < 16) throw ConfigError("grid too coarse (N < 16)");
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = profile.grid.nodes[i] / profile.c[i];
    const std::vector<double> d = derivative_uniform(u, profile.grid.h);
    return *std::min_element(d.begin(), d.end());
}

} // namespace specrig
