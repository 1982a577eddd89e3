#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace specrig {

/// A radial scalar function, either one of the analytic built-ins or raw
/// samples. Built-ins carry closed-form derivatives; sampled functions are
/// evaluated off-grid by cubic Hermite interpolation.
struct RadialFn {
    enum class Kind { Constant, Linear, Gaussian, Polynomial, LogR, BumpSum, Samples };

    Kind kind = Kind::Constant;
    std::vector<double> params;            // interpretation depends on kind
    std::vector<double> grid, values;      // Samples only

    double operator()(double r) const;
    double deriv(double r) const;
    bool analytic() const { return kind != Kind::Samples; }
    bool is_zero() const { return kind == Kind::Constant && params[0] == 0.0; }

    static RadialFn constant(double v) { return {Kind::Constant, {v}, {}, {}}; }
    static RadialFn zero() { return constant(0.0); }
    static RadialFn linear(double intercept, double slope) { return {Kind::Linear, {intercept, slope}, {}, {}}; }
    static RadialFn gaussian(double amplitude, double center, double width) {
        return {Kind::Gaussian, {amplitude, center, width}, {}, {}};
    }
    static RadialFn polynomial(std::vector<double> coeffs) { return {Kind::Polynomial, std::move(coeffs), {}, {}}; }
    static RadialFn log_r(double coeff) { return {Kind::LogR, {coeff}, {}, {}}; }
    static RadialFn samples(std::vector<double> r, std::vector<double> v);

    static RadialFn from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Sum of random Gaussian bumps, optionally windowed by (1-r) so the value
/// vanishes at the outer boundary. Deterministic for a given seed.
RadialFn random_smooth_fn(std::uint64_t seed, double r_lo, double amplitude, bool zero_at_outer);

enum class BcKind { Dirichlet, Neumann, Robin };

/// Boundary conditions at r = 1 and, for an annulus, at r = R.
/// Robin means d_r f = kappa * f at the boundary; the toroidal preset uses
/// kappa = 1 at r = 1.
struct BoundaryCondition {
    BcKind outer = BcKind::Dirichlet;
    double outer_kappa = 0.0;
    BcKind inner = BcKind::Dirichlet;   // ignored for the ball (natural closure at 0)
    double inner_kappa = 0.0;

    static BoundaryCondition dirichlet() { return {}; }
    static BoundaryCondition neumann() { return {BcKind::Neumann, 0.0, BcKind::Neumann, 0.0}; }
    static BoundaryCondition robin_outer(double kappa) { return {BcKind::Robin, kappa, BcKind::Dirichlet, 0.0}; }
    static BoundaryCondition toroidal() { return robin_outer(1.0); }

    static BoundaryCondition from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Standard operator, or the toroidal variant with the extra zeroth-order
/// term -r^{-1} e^{a-b} (d_r e^b).
enum class OperatorVariant { Standard, Toroidal };

OperatorVariant variant_from_string(const std::string& s);
std::string to_string(OperatorVariant v);

/// Uniform radial grid on [R, 1], last node exactly at 1.
/// For R = 0 the grid is staggered, r_i = (i + 1/2) h with h = 1/(N - 1/2),
/// so there is no sample at the coordinate singularity r = 0. Each node owns
/// a finite-volume cell; cell_weights are the cell lengths and define the
/// discrete quadrature used consistently by the eigensolver and all pairings.
struct RadialGrid {
    double inner_radius = 0.0;
    bool staggered = false;
    double h = 0.0;
    std::vector<double> nodes;
    std::vector<double> cell_weights;

    int size() const { return static_cast<int>(nodes.size()); }
    /// Midpoint face between nodes k and k+1.
    double face(int k) const { return 0.5 * (nodes[k] + nodes[k + 1]); }
    /// Radius of the innermost cell face (R, or 0 for the ball).
    double inner_face() const { return staggered ? 0.0 : inner_radius; }

    static RadialGrid make(double inner_radius, int n);
};

/// Validated radial coefficient pair (a, b) with derived arrays
/// c = e^{a/2}, rho = e^{b-a}, e^b on the grid.
struct RadialProfile {
    RadialGrid grid;
    std::vector<double> a, b;
    std::vector<double> c, rho, eb;
    std::optional<RadialFn> a_fn, b_fn;    // analytic tags when available

    int size() const { return grid.size(); }
    bool is_ball() const { return grid.staggered; }

    /// Wave speed at an arbitrary radius (closed form when tagged).
    double speed(double r) const;
    /// d_r c at an arbitrary radius.
    double speed_deriv(double r) const;
    /// d_r a at an arbitrary radius (closed form when tagged, else interpolated).
    double a_deriv(double r) const;

    /// Samples of an arbitrary radial function on this grid.
    std::vector<double> sample(const RadialFn& f) const;
    /// Discrete quadrature sum w_i * g_i over the grid (the cell rule).
    double integrate(const std::vector<double>& g) const;
};

/// Parsed profile description: {R, N, a, b, bc, variant}.
struct ProfileSpec {
    double inner_radius = 0.0;
    int n = 200;
    RadialFn a = RadialFn::zero();
    RadialFn b = RadialFn::zero();
    BoundaryCondition bc = BoundaryCondition::dirichlet();
    OperatorVariant variant = OperatorVariant::Standard;

    static ProfileSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Build and validate a profile. Throws ConfigError on invalid input
/// (R outside [0,1), N < 16, non-finite samples, non-positive wave speed).
RadialProfile make_profile(const RadialFn& a, const RadialFn& b, double inner_radius, int n);
RadialProfile make_profile(const ProfileSpec& spec);

/// min over the grid of d/dr (r / c(r)), by second-order differences.
/// A positive value certifies the Herglotz condition numerically.
double herglotz_margin(const RadialProfile& profile);

} // namespace specrig
