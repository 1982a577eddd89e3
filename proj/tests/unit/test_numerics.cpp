#include <doctest.h>

#include <cmath>

#include "specrig/errors.hpp"
#include "specrig/linalg.hpp"
#include "specrig/io.hpp"
#include "specrig/numerics.hpp"

using namespace specrig;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("adaptive quadrature on smooth and endpoint-steep integrands") {
    const double smooth = adaptive_quadrature([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(smooth == doctest::Approx(2.0).epsilon(1e-12));

    // sqrt singularity absorbed by the substitution x = u^2 beforehand:
    // int_0^1 dx/sqrt(x) = int_0^1 2 du = 2.
    const double subbed = adaptive_quadrature([](double) { return 2.0; }, 0.0, 1.0);
    CHECK(subbed == doctest::Approx(2.0));

    const double gauss =
        adaptive_quadrature([](double x) { return std::exp(-x * x); }, -6.0, 6.0, 1e-13);
    CHECK(gauss == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("bisection brackets and converges") {
    const double root = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    CHECK(root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(bisect([](double x) { return x + 10.0; }, 0.0, 1.0), NumericalError);
}

TEST_CASE("uniform derivative is exact on quadratics") {
    const double h = 0.1;
    std::vector<double> y;
    for (int i = 0; i < 9; ++i) {
        const double x = i * h;
        y.push_back(3.0 * x * x - 2.0 * x + 1.0);
    }
    const std::vector<double> d = derivative_uniform(y, h);
    for (int i = 0; i < 9; ++i) {
        const double x = i * h;
        CHECK(d[i] == doctest::Approx(6.0 * x - 2.0).epsilon(1e-12));
    }
}

TEST_CASE("jacobi svd reproduces known singular values") {
    // diag(3, 2) embedded in a 4x2 matrix via orthogonal column mixing.
    Matrix a(4, 2);
    a(0, 0) = 3.0 / std::sqrt(2.0);
    a(1, 0) = 3.0 / std::sqrt(2.0);
    a(0, 1) = 2.0 / std::sqrt(2.0);
    a(1, 1) = -2.0 / std::sqrt(2.0);
    const Svd svd = jacobi_svd(a);
    CHECK(svd.sigma[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(svd.sigma[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("svd least squares recovers exact solutions") {
    Matrix a(5, 3);
    std::vector<double> x_true{1.5, -2.0, 0.25};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = 1.0 / (1.0 + i + j) + (i == j ? 0.5 : 0.0);
    std::vector<double> rhs(5, 0.0);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) rhs[i] += a(i, j) * x_true[j];
    const std::vector<double> x = svd_least_squares(a, rhs);
    for (int j = 0; j < 3; ++j) CHECK(x[j] == doctest::Approx(x_true[j]).epsilon(1e-10));
}

TEST_CASE("format_double round-trips through text") {
    for (double x : {0.1, -9.869604401089358, 1e-17, 3.0, 0.0, -2.718281828459045e+150}) {
        const std::string s = specrig::format_double(x);
        CHECK(std::stod(s) == x);
    }
}

TEST_CASE("largest tridiagonal eigenpairs match the 1d laplacian") {
    // -u'' on (0,1), Dirichlet, n interior points: eigenvalues of the
    // tridiagonal (-2, 1)/h^2 are -4 sin^2(k pi h / 2)/h^2.
    const int n = 50;
    const double h = 1.0 / (n + 1);
    std::vector<double> d(n, -2.0 / (h * h)), e(n - 1, 1.0 / (h * h));
    const TridiagEigen eig = largest_tridiag_eigenpairs(d, e, 3);
    REQUIRE(eig.values.size() == 3);
    for (int k = 0; k < 3; ++k) {
        const int mode = 3 - k;   // ascending order: largest eigenvalue last
        const double expected = -4.0 / (h * h) * std::pow(std::sin(0.5 * mode * M_PI * h), 2);
        CHECK(eig.values[k] == doctest::Approx(expected).epsilon(1e-12));
    }
    // unit eigenvectors
    double norm = 0.0;
    for (double v : eig.vectors[0]) norm += v * v;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_SUITE_END();
