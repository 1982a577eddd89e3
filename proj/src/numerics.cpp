#include "specrig/numerics.hpp"

#include <cmath>
#include <cstdlib>

#include "specrig/errors.hpp"

namespace specrig {

namespace {

// 15-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; mirrored).
constexpr int kGlHalf = 8;
constexpr double kGlNodes[kGlHalf] = {
    0.0,
    0.2011940939974345,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601701,
    0.8482065834104272,
    0.9372733924007060,
    0.9879925180204854,
};
constexpr double kGlWeights[kGlHalf] = {
    0.2025782419255613,
    0.1984314853271116,
    0.1861610000155622,
    0.1662692058169939,
    0.1395706779261543,
    0.1071592204671719,
    0.0703660474881081,
    0.0307532419961173,
};

double gl15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = kGlWeights[0] * f(mid);
    for (int i = 1; i < kGlHalf; ++i) {
        const double dx = half * kGlNodes[i];
        sum += kGlWeights[i] * (f(mid - dx) + f(mid + dx));
    }
    return sum * half;
}

double adaptive_panel(const std::function<double(double)>& f, double a, double b,
                      double whole, double tol, double scale, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gl15(f, a, mid);
    const double right = gl15(f, mid, b);
    const double refined = left + right;
    if (std::abs(refined - whole) <= tol * scale || depth <= 0) return refined;
    return adaptive_panel(f, a, mid, left, 0.5 * tol, scale, depth - 1) +
           adaptive_panel(f, mid, b, right, 0.5 * tol, scale, depth - 1);
}

} // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    const double whole = gl15(f, a, b);
    const double scale = std::max(std::abs(whole), 1e-30);
    return adaptive_panel(f, a, b, whole, rel_tol, scale, max_depth);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol, double f_tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw NumericalError("bisect: endpoints do not bracket a root");
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm) <= f_tol || (hi - lo) <= x_tol * (1.0 + std::abs(mid))) return mid;
        if (flo * fm <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> derivative_uniform(const std::vector<double>& y, double h) {
    const int n = static_cast<int>(y.size());
    std::vector<double> d(n, 0.0);
    if (n < 3) {
        if (n == 2) d[0] = d[1] = (y[1] - y[0]) / h;
        return d;
    }
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
    for (int i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
    return d;
}

double sinc(double x) {
    if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

} // namespace specrig
