#pragma once

// Independent test oracles. Everything here deliberately avoids the library's
// quadrature/eigensolver code paths so that agreement is meaningful.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "specrig/profiles.hpp"

namespace oracles {

// Spherical Bessel function j_l by upward recurrence from the closed forms
// for j_0 and j_1. Adequate for the small l and the x ranges (x > l) where
// the zeros live.
inline double spherical_bessel_j(int l, double x) {
    if (x == 0.0) return l == 0 ? 1.0 : 0.0;
    double jm = std::sin(x) / x;
    if (l == 0) return jm;
    double j = std::sin(x) / (x * x) - std::cos(x) / x;
    for (int k = 1; k < l; ++k) {
        const double jn = (2.0 * k + 1.0) / x * j - jm;
        jm = j;
        j = jn;
    }
    return j;
}

// First `count` positive zeros of j_l, located by scanning for sign changes
// and bisecting each bracket.
inline std::vector<double> spherical_bessel_zeros(int l, int count) {
    std::vector<double> zeros;
    const double step = 0.02;
    double x_prev = std::max(0.5, 0.5 * l);
    double f_prev = spherical_bessel_j(l, x_prev);
    for (double x = x_prev + step; zeros.size() < static_cast<std::size_t>(count); x += step) {
        if (x > 400.0) throw std::runtime_error("bessel zero scan ran away");
        const double f = spherical_bessel_j(l, x);
        if (f_prev * f < 0.0) {
            double lo = x - step, hi = x;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (spherical_bessel_j(l, lo) * spherical_bessel_j(l, mid) <= 0.0) hi = mid;
                else lo = mid;
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        f_prev = f;
    }
    return zeros;
}

// Roots of tan(x) = x (Neumann condition for the lowest angular sector):
// these are exactly the zeros of j_1.
inline std::vector<double> tan_x_eq_x_roots(int count) { return spherical_bessel_zeros(1, count); }

// Travel-time ray tracer in polar coordinates for a radial speed c(r):
//   r' = c^2 xi_r,  theta' = c^2 p / r^2,
//   xi_r' = -c c_r (xi_r^2 + p^2/r^2) + c^2 p^2 / r^3,
// launched inward from r = 1 and reflected specularly at the boundaries.
// Integrates a radial function along the ray with the same RK4 steps.
// Independent of the library's turning-point quadrature.
struct RayTraceResult {
    double time = 0.0;       // total travel time over n_chords chords
    double theta = 0.0;      // accumulated angular advance
    double integral = 0.0;   // int f(r(t)) dt
};

inline RayTraceResult trace_broken_ray(const specrig::RadialProfile& prof, double p, int n_chords,
                                       const std::function<double(double)>& f, double dt = 2e-4) {
    struct State {
        double r, theta, xi, acc;
    };
    auto deriv = [&](const State& s) {
        const double c = prof.speed(s.r);
        const double cr = prof.speed_deriv(s.r);
        State d;
        d.r = c * c * s.xi;
        d.theta = c * c * p / (s.r * s.r);
        d.xi = -c * cr * (s.xi * s.xi + p * p / (s.r * s.r)) + c * c * p * p / (s.r * s.r * s.r);
        d.acc = f(s.r);
        return d;
    };
    auto rk4 = [&](State s, double h) {
        const State k1 = deriv(s);
        State s2{s.r + 0.5 * h * k1.r, s.theta + 0.5 * h * k1.theta, s.xi + 0.5 * h * k1.xi, 0};
        const State k2 = deriv(s2);
        State s3{s.r + 0.5 * h * k2.r, s.theta + 0.5 * h * k2.theta, s.xi + 0.5 * h * k2.xi, 0};
        const State k3 = deriv(s3);
        State s4{s.r + h * k3.r, s.theta + h * k3.theta, s.xi + h * k3.xi, 0};
        const State k4 = deriv(s4);
        s.r += h / 6.0 * (k1.r + 2 * k2.r + 2 * k3.r + k4.r);
        s.theta += h / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta);
        s.xi += h / 6.0 * (k1.xi + 2 * k2.xi + 2 * k3.xi + k4.xi);
        s.acc += h / 6.0 * (k1.acc + 2 * k2.acc + 2 * k3.acc + k4.acc);
        return s;
    };

    const double c1 = prof.speed(1.0);
    const double inner = prof.is_ball() ? 0.0 : prof.grid.inner_radius;
    State s{1.0, 0.0, -std::sqrt(std::max(0.0, 1.0 / (c1 * c1) - p * p)), 0.0};
    double t = 0.0;
    int reflections = 0;
    int guard = 0;
    while (reflections < n_chords) {
        if (++guard > 20000000) throw std::runtime_error("ray tracer step guard tripped");
        State next = rk4(s, dt);
        const bool hit_outer = next.r >= 1.0;
        const bool hit_inner = !prof.is_ball() && next.r <= inner;
        if (hit_outer || hit_inner) {
            const double wall = hit_outer ? 1.0 : inner;
            double lo = 0.0, hi = dt;
            for (int it = 0; it < 60; ++it) {
                const double midstep = 0.5 * (lo + hi);
                const State trial = rk4(s, midstep);
                if ((hit_outer && trial.r >= wall) || (hit_inner && trial.r <= wall)) hi = midstep;
                else lo = midstep;
            }
            s = rk4(s, hi);
            t += hi;
            s.xi = -s.xi;
            if (hit_outer) ++reflections;
        } else {
            s = next;
            t += dt;
        }
    }
    return {t, s.theta, s.acc};
}

} // namespace oracles
