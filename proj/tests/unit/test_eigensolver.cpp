#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "specrig/eigensolver.hpp"
#include "specrig/errors.hpp"
#include "specrig/numerics.hpp"

using namespace specrig;

namespace {

RadialProfile euclid_ball(int n) { return make_profile(RadialFn::zero(), RadialFn::zero(), 0.0, n); }

double ground_state_lambda(int n) {
    const std::vector<Mode> modes =
        solve_modes(euclid_ball(n), 0, BoundaryCondition::dirichlet(), OperatorVariant::Standard, 1);
    return modes[0].lambda;
}

} // namespace

TEST_SUITE_BEGIN("eigensolver");

TEST_CASE("assembly reduces to the discrete (r^2 f')' operator for a=b=0, l=0") {
    const RadialProfile p = euclid_ball(64);
    const TridiagonalPair pair =
        assemble_radial(p, 0, BoundaryCondition::dirichlet(), OperatorVariant::Standard);
    const double h = p.grid.h;
    REQUIRE(pair.size() == p.size() - 1);
    for (int i = 0; i < pair.size(); ++i) {
        const double r = p.grid.nodes[i];
        CHECK(pair.mass[i] == doctest::Approx(r * r * h).epsilon(1e-14));
        const double left = (i == 0) ? 0.0 : sq(p.grid.face(i - 1));
        const double right = sq(p.grid.face(i));
        CHECK(pair.diag[i] == doctest::Approx(-(left + right) / h).epsilon(1e-14));
        if (i + 1 < pair.size()) CHECK(pair.off[i] == doctest::Approx(right / h).epsilon(1e-14));
    }
    CHECK(pair.asymmetry_residual == 0.0);
}

TEST_CASE("mass stays positive and assembly symmetric for generic profiles") {
    const RadialProfile p = make_profile(RadialFn::gaussian(0.3, 0.5, 0.2),
                                         RadialFn::polynomial({0.1, -0.2, 0.3}), 0.3, 80);
    for (int l : {0, 1, 5}) {
        const TridiagonalPair pair =
            assemble_radial(p, l, BoundaryCondition::neumann(), OperatorVariant::Standard);
        for (double m : pair.mass) CHECK(m > 0.0);
        // symmetric tridiagonal by representation: single off-diagonal array
        CHECK(pair.off.size() == pair.diag.size() - 1);
    }
}

TEST_CASE("b -> b + const rescales A and M by the same factor") {
    const RadialProfile p0 = make_profile(RadialFn::gaussian(0.2, 0.5, 0.15),
                                          RadialFn::linear(0.1, 0.3), 0.0, 60);
    const RadialProfile p1 = make_profile(RadialFn::gaussian(0.2, 0.5, 0.15),
                                          RadialFn::polynomial({1.1, 0.3}), 0.0, 60);
    const double factor = std::exp(1.0);
    const TridiagonalPair a0 = assemble_radial(p0, 2, BoundaryCondition::dirichlet(), OperatorVariant::Standard);
    const TridiagonalPair a1 = assemble_radial(p1, 2, BoundaryCondition::dirichlet(), OperatorVariant::Standard);
    for (int i = 0; i < a0.size(); ++i) {
        CHECK(a1.diag[i] == doctest::Approx(factor * a0.diag[i]).epsilon(1e-12));
        CHECK(a1.mass[i] == doctest::Approx(factor * a0.mass[i]).epsilon(1e-12));
    }
}

TEST_CASE("dirichlet ball eigenvalues match spherical bessel zeros") {
    const RadialProfile p = euclid_ball(2000);
    const BoundaryCondition bc = BoundaryCondition::dirichlet();

    SUBCASE("l = 0: lambda_n = -(n pi)^2") {
        const std::vector<Mode> modes = solve_modes(p, 0, bc, OperatorVariant::Standard, 3);
        for (int n = 1; n <= 3; ++n) {
            const double exact = -sq(n * M_PI);
            CHECK(std::abs(modes[n - 1].lambda - exact) / std::abs(exact) < 1e-5);
        }
    }
    SUBCASE("l = 1: lambda_1 = -x^2 with tan x = x") {
        const double root = oracles::tan_x_eq_x_roots(1)[0];
        CHECK(root == doctest::Approx(4.4934094579).epsilon(1e-9));
        const std::vector<Mode> modes = solve_modes(p, 1, bc, OperatorVariant::Standard, 1);
        CHECK(std::abs(modes[0].lambda + sq(root)) / sq(root) < 1e-5);
    }
    SUBCASE("l = 2: zeros from the independent bessel oracle") {
        const std::vector<double> zeros = oracles::spherical_bessel_zeros(2, 2);
        const std::vector<Mode> modes = solve_modes(p, 2, bc, OperatorVariant::Standard, 2);
        for (int n = 1; n <= 2; ++n)
            CHECK(std::abs(modes[n - 1].lambda + sq(zeros[n - 1])) / sq(zeros[n - 1]) < 1e-5);
    }
}

TEST_CASE("annulus dirichlet l=0 eigenvalues are -(n pi / (1-R))^2") {
    // f = sin(k (r - R)) / r solves the l=0 problem with zeros at both ends.
    const double inner = 0.4;
    const RadialProfile p = make_profile(RadialFn::zero(), RadialFn::zero(), inner, 2000);
    const std::vector<Mode> modes =
        solve_modes(p, 0, BoundaryCondition::dirichlet(), OperatorVariant::Standard, 4);
    for (int n = 1; n <= 4; ++n) {
        const double k = n * M_PI / (1.0 - inner);
        CHECK(std::abs(modes[n - 1].lambda + k * k) / (k * k) < 1e-5);
        CHECK(modes[n - 1].f.front() == 0.0);
        CHECK(modes[n - 1].f.back() == 0.0);
    }
}

TEST_CASE("robin kappa=1 on the ball: tanh and tan branches at l=0") {
    // f' (1) = f(1). The sinh branch gives one positive eigenvalue k^2 with
    // tanh k = k/2; the sin branch gives lambda = -k^2 with tan k = k/2.
    auto root = [](auto fn, double lo, double hi) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (fn(lo) * fn(mid) <= 0.0) hi = mid;
            else lo = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double k_pos = root([](double k) { return std::tanh(k) - 0.5 * k; }, 1.0, 2.5);
    const double k_neg = root([](double k) { return std::tan(k) - 0.5 * k; }, M_PI + 0.3, 1.5 * M_PI - 0.05);

    const RadialProfile p = euclid_ball(2000);
    const std::vector<Mode> modes =
        solve_modes(p, 0, BoundaryCondition::robin_outer(1.0), OperatorVariant::Standard, 2);
    CHECK(std::abs(modes[0].lambda - k_pos * k_pos) / (k_pos * k_pos) < 1e-4);
    CHECK(std::abs(modes[1].lambda + k_neg * k_neg) / (k_neg * k_neg) < 1e-4);
    CHECK_THROWS_AS(modes[0].omega(), NumericalError);   // positive eigenvalue
}

TEST_CASE("neumann l=0 has the zero mode, then the tan x = x branch") {
    const RadialProfile p = euclid_ball(2000);
    const std::vector<Mode> modes =
        solve_modes(p, 0, BoundaryCondition::neumann(), OperatorVariant::Standard, 2);
    CHECK(std::abs(modes[0].lambda) < 1e-8);   // constant mode
    const double root = oracles::tan_x_eq_x_roots(1)[0];
    CHECK(std::abs(modes[1].lambda + sq(root)) / sq(root) < 1e-4);
}

TEST_CASE("second-order convergence of the ground state") {
    const double exact = -M_PI * M_PI;
    double prev_err = 0.0;
    for (int n : {250, 500, 1000, 2000}) {
        const double err = std::abs(ground_state_lambda(n) - exact);
        if (prev_err > 0.0) CHECK(prev_err / err >= 3.5);
        prev_err = err;
    }
}

TEST_CASE("eigenfunctions are M-orthonormal and satisfy the boundary rows") {
    const RadialProfile p = make_profile(RadialFn::gaussian(0.25, 0.45, 0.2),
                                         RadialFn::gaussian(-0.3, 0.6, 0.25), 0.0, 500);
    const std::vector<Mode> modes =
        solve_modes(p, 3, BoundaryCondition::dirichlet(), OperatorVariant::Standard, 6);
    for (const Mode& mi : modes) {
        CHECK(mi.f.back() == 0.0);   // eliminated Dirichlet node holds an exact zero
        for (const Mode& mj : modes) {
            double gram = 0.0;
            for (int i = 0; i < p.size(); ++i) {
                const double r = p.grid.nodes[i];
                gram += p.grid.cell_weights[i] * p.rho[i] * r * r * mi.f[i] * mj.f[i];
            }
            CHECK(std::abs(gram - (mi.n == mj.n ? 1.0 : 0.0)) < 1e-8);
        }
    }
}

TEST_CASE("gauge invariance: spectra agree for b and b + const") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> shift(-1.5, 1.5);
    const std::vector<RadialProfile> bases = {
        euclid_ball(300),
        make_profile(RadialFn::gaussian(0.3, 0.5, 0.2), RadialFn::linear(0.2, -0.4), 0.0, 300),
        make_profile(RadialFn::polynomial({0.0, 0.1, 0.2}), RadialFn::gaussian(0.5, 0.6, 0.2), 0.4, 300)};
    for (const RadialProfile& base : bases) {
        for (int trial = 0; trial < 3; ++trial) {
            const double c0 = shift(rng);
            std::vector<double> b_shifted = base.b;
            for (double& v : b_shifted) v += c0;
            const RadialProfile moved =
                make_profile(RadialFn::samples(base.grid.nodes, base.a),
                             RadialFn::samples(base.grid.nodes, b_shifted),
                             base.grid.inner_radius, base.size());
            const Spectrum s0 = full_spectrum(base, BoundaryCondition::dirichlet(),
                                              OperatorVariant::Standard, 2, 4);
            const Spectrum s1 = full_spectrum(moved, BoundaryCondition::dirichlet(),
                                              OperatorVariant::Standard, 2, 4);
            for (std::size_t k = 0; k < s0.modes.size(); ++k)
                CHECK(std::abs(s1.modes[k].lambda - s0.modes[k].lambda) <
                      1e-10 * std::abs(s0.modes[k].lambda));
        }
    }
}

TEST_CASE("full spectrum bookkeeping and lowest modes of the ball") {
    const Spectrum spec = full_spectrum(euclid_ball(2000), BoundaryCondition::dirichlet(),
                                        OperatorVariant::Standard, 1, 2);
    CHECK(spec.expanded().size() == (1 + 3) * 2);
    // lowest three expanded eigenvalues: -pi^2 once, then -(4.4934...)^2 three times
    const std::vector<double> ex = spec.expanded();
    CHECK(std::abs(ex[0] + sq(M_PI)) / sq(M_PI) < 1e-5);
    const double root = oracles::tan_x_eq_x_roots(1)[0];
    for (int k = 1; k <= 3; ++k) CHECK(std::abs(ex[k] + sq(root)) / sq(root) < 1e-5);
}

TEST_CASE("no accidental degeneracies for a generic smooth profile") {
    const RadialProfile p = make_profile(random_smooth_fn(101, 0.0, 0.4, false),
                                         random_smooth_fn(202, 0.0, 0.4, false), 0.0, 400);
    const Spectrum spec = full_spectrum(p, BoundaryCondition::dirichlet(),
                                        OperatorVariant::Standard, 8, 20);
    CHECK(spec.degeneracies.empty());
}

TEST_CASE("threaded and serial full_spectrum agree bit for bit") {
    const RadialProfile p = euclid_ball(400);
    const Spectrum serial = full_spectrum(p, BoundaryCondition::dirichlet(),
                                          OperatorVariant::Standard, 4, 3, 1);
    const Spectrum threaded = full_spectrum(p, BoundaryCondition::dirichlet(),
                                            OperatorVariant::Standard, 4, 3, 2);
    REQUIRE(serial.modes.size() == threaded.modes.size());
    for (std::size_t k = 0; k < serial.modes.size(); ++k) {
        CHECK(serial.modes[k].lambda == threaded.modes[k].lambda);
        CHECK(serial.modes[k].l == threaded.modes[k].l);
    }
}

TEST_CASE("toroidal term vanishes for constant b") {
    // d_r e^b = 0: the variant must coincide with the standard operator.
    const RadialProfile p = make_profile(RadialFn::gaussian(0.2, 0.6, 0.2),
                                         RadialFn::constant(0.4), 0.3, 400);
    const std::vector<Mode> std_modes =
        solve_modes(p, 2, BoundaryCondition::neumann(), OperatorVariant::Standard, 4);
    const std::vector<Mode> tor_modes =
        solve_modes(p, 2, BoundaryCondition::neumann(), OperatorVariant::Toroidal, 4);
    for (int k = 0; k < 4; ++k)
        CHECK(tor_modes[k].lambda == doctest::Approx(std_modes[k].lambda).epsilon(1e-14));
}

TEST_CASE("inner robin lowers the spectrum relative to inner neumann") {
    // the boundary term -p(R) kappa f(R)^2 makes the quadratic form smaller
    const RadialProfile p = make_profile(RadialFn::zero(), RadialFn::zero(), 0.4, 400);
    BoundaryCondition neumann_in{BcKind::Dirichlet, 0.0, BcKind::Neumann, 0.0};
    BoundaryCondition robin_in{BcKind::Dirichlet, 0.0, BcKind::Robin, 2.0};
    const double lam_neumann =
        solve_modes(p, 0, neumann_in, OperatorVariant::Standard, 1)[0].lambda;
    const double lam_robin = solve_modes(p, 0, robin_in, OperatorVariant::Standard, 1)[0].lambda;
    CHECK(lam_robin < lam_neumann);
}

TEST_CASE("toroidal variant runs on annulus and staggered ball grids") {
    const RadialProfile ann = make_profile(RadialFn::zero(), RadialFn::gaussian(0.4, 0.7, 0.2), 0.35, 400);
    const std::vector<Mode> m1 =
        solve_modes(ann, 2, BoundaryCondition::toroidal(), OperatorVariant::Toroidal, 3);
    CHECK(m1.size() == 3);
    const RadialProfile ball = make_profile(RadialFn::zero(), RadialFn::gaussian(0.4, 0.7, 0.2), 0.0, 400);
    const std::vector<Mode> m2 =
        solve_modes(ball, 2, BoundaryCondition::toroidal(), OperatorVariant::Toroidal, 3);
    CHECK(m2.size() == 3);
    // the added term is a multiplication operator: still a symmetric pair
    const TridiagonalPair pair = assemble_radial(ball, 2, BoundaryCondition::toroidal(),
                                                 OperatorVariant::Toroidal);
    CHECK(pair.asymmetry_residual == 0.0);
}

TEST_CASE("solver input validation") {
    const RadialProfile p = euclid_ball(64);
    CHECK_THROWS_AS(solve_modes(p, -1, BoundaryCondition::dirichlet(), OperatorVariant::Standard, 1),
                    ConfigError);
    CHECK_THROWS_AS(solve_modes(p, 0, BoundaryCondition::dirichlet(), OperatorVariant::Standard, 0),
                    ConfigError);
}

TEST_SUITE_END();
