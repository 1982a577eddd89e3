#include "specrig/rays.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "specrig/errors.hpp"
#include "specrig/numerics.hpp"

namespace specrig {

namespace {

// Slowness-scaled radius u(r) = r / c(r); strictly increasing under a
// positive Herglotz margin, with u'(r) = d/dr (r/c) the margin integrand.
double u_of(const RadialProfile& prof, double r) { return r / prof.speed(r); }

double u_prime(const RadialProfile& prof, double r) {
    const double c = prof.speed(r);
    return (c - r * prof.speed_deriv(r)) / (c * c);
}

// Invert u(r) = target on [lo, 1] by safeguarded Newton.
double invert_u(const RadialProfile& prof, double target, double lo) {
    double a = lo, b = 1.0;
    double r = 0.5 * (a + b);
    for (int it = 0; it < 60; ++it) {
        const double f = u_of(prof, r) - target;
        if (f > 0.0) b = r; else a = r;
        const double du = u_prime(prof, r);
        double next = (du > 0.0) ? r - f / du : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - r) <= 1e-15 * (1.0 + std::abs(r))) return next;
        r = next;
    }
    return r;
}

} // namespace

RayParameter turning_point(const RadialProfile& profile, double p) {
    const double p_max = u_of(profile, 1.0);
    if (p < 0.0 || p >= p_max) throw ConfigError("ray parameter out of range [0, 1/c(1))");
    RayParameter rp;
    rp.p = p;
    const double r_inner = profile.is_ball() ? 0.0 : profile.grid.inner_radius;
    if (p == 0.0) {
        rp.turning_radius = r_inner;
        rp.reflects_inner = !profile.is_ball();
        return rp;
    }
    if (!profile.is_ball() && p <= u_of(profile, profile.grid.inner_radius)) {
        rp.turning_radius = profile.grid.inner_radius;
        rp.reflects_inner = true;
        return rp;
    }
    const double lo = profile.is_ball() ? 1e-14 : profile.grid.inner_radius;
    rp.turning_radius = invert_u(profile, p, lo);
    rp.reflects_inner = false;
    return rp;
}

double radial_pass_integral(const RadialProfile& profile, double p,
                            const std::function<double(double)>& f, double rel_tol) {
    if (rel_tol <= 0.0)
        rel_tol = (profile.a_fn && profile.a_fn->analytic()) ? 1e-12 : 1e-9;
    const RayParameter rp = turning_point(profile, p);

    if (p == 0.0) {
        // Radial pass: the square root is identically 1.
        auto integrand = [&](double r) { return f(r) / profile.speed(r); };
        return adaptive_quadrature(integrand, rp.turning_radius, 1.0, rel_tol);
    }

    // Integrate in v = sqrt(r/c - p). The square-root factor is carried by v
    // itself, so neither an interior turning point (v_lo = 0) nor a grazing
    // inner reflection (small positive v_lo) produces a singular integrand:
    //   1 - (pc/r)^2 = (u - p)(c/r)(1 + pc/r),  dr = 2v / u'(r) dv.
    const double r_lo = rp.turning_radius;
    const double v_lo = rp.reflects_inner ? std::sqrt(u_of(profile, r_lo) - p) : 0.0;
    const double v_max = std::sqrt(u_of(profile, 1.0) - p);
    auto integrand = [&](double v) {
        const double r = (v <= v_lo) ? r_lo
                                     : std::min(1.0, invert_u(profile, p + v * v, r_lo));
        const double c = profile.speed(r);
        const double w = (c / r) * (1.0 + p * c / r);
        return 2.0 * f(r) / (c * u_prime(profile, r) * std::sqrt(w));
    };
    return adaptive_quadrature(integrand, v_lo, v_max, rel_tol);
}

double chord_time(const RadialProfile& profile, double p) {
    return 2.0 * radial_pass_integral(profile, p, [](double) { return 1.0; });
}

double angular_advance(const RadialProfile& profile, double p) {
    if (p == 0.0) return profile.is_ball() ? M_PI : 0.0;   // geometric limits
    auto f = [&](double r) {
        const double c = profile.speed(r);
        return p * c * c / (r * r);
    };
    return 2.0 * radial_pass_integral(profile, p, f);
}

double abel_transform(const RadialProfile& profile, const std::function<double(double)>& f, double r) {
    const double r_inner = profile.is_ball() ? 0.0 : profile.grid.inner_radius;
    if (!(r > r_inner) || !(r < 1.0)) throw ConfigError("abel_transform: radius out of range (R, 1)");
    const double p = u_of(profile, r);
    return radial_pass_integral(profile, p, f);
}

LengthSpectrum find_periodic_orbits(const RadialProfile& profile, int n_max_chords, int m_windings_max) {
    if (n_max_chords < 2 || m_windings_max < 1)
        throw ConfigError("find_periodic_orbits: need n_max_chords >= 2, m_max >= 1");
    if (herglotz_margin(profile) <= 0.0)
        throw NumericalError("find_periodic_orbits: Herglotz condition violated (margin <= 0)");

    const double p_max = u_of(profile, 1.0);
    const int n_samples = 512;
    std::vector<double> ps(n_samples), dtheta(n_samples);
    for (int j = 0; j < n_samples; ++j) {
        ps[j] = p_max * (1.0 - 1e-9) * j / (n_samples - 1);
        dtheta[j] = angular_advance(profile, ps[j]);
    }

    LengthSpectrum out;
    for (int n = 2; n <= n_max_chords; ++n) {
        for (int m = 1; m <= m_windings_max; ++m) {
            if (std::gcd(n, m) != 1) continue;
            const double target = 2.0 * M_PI * m / n;

            // Diametral family: the angular advance reaches pi in the p -> 0
            // limit of a ball, outside the reach of sign-change bracketing.
            bool found = false;
            if (profile.is_ball() && n == 2 * m) {
                out.orbits.push_back({0.0, n, m, n * chord_time(profile, 0.0), 0.0, false});
                found = true;
            }

            for (int j = 0; j + 1 < n_samples; ++j) {
                const double f0 = dtheta[j] - target;
                const double f1 = dtheta[j + 1] - target;
                if (f0 == 0.0 && ps[j] == 0.0) continue;   // endpoint handled above
                if (f0 == 0.0 || f0 * f1 < 0.0) {
                    double p_root;
                    if (f0 == 0.0) {
                        p_root = ps[j];
                    } else {
                        p_root = bisect(
                            [&](double p) { return n * angular_advance(profile, p) - 2.0 * M_PI * m; },
                            ps[j], ps[j + 1], 1e-15, 1e-10);
                    }
                    const RayParameter rp = turning_point(profile, p_root);
                    out.orbits.push_back({p_root, n, m, n * chord_time(profile, p_root),
                                          rp.turning_radius, rp.reflects_inner});
                    found = true;
                }
            }
            const double dt_max = *std::max_element(dtheta.begin(), dtheta.end());
            const double dt_min = *std::min_element(dtheta.begin(), dtheta.end());
            if (!found && target <= dt_max && target >= dt_min)
                out.warnings.push_back("bracketing failure for orbit (n=" + std::to_string(n) +
                                       ", m=" + std::to_string(m) + ")");
        }
    }

    std::sort(out.orbits.begin(), out.orbits.end(),
              [](const PeriodicOrbit& x, const PeriodicOrbit& y) { return x.length < y.length; });

    // Simple-length-spectrum check: merge coincident lengths with a warning.
    std::vector<PeriodicOrbit> merged;
    for (const PeriodicOrbit& orb : out.orbits) {
        if (!merged.empty() && std::abs(orb.length - merged.back().length) < 1e-9) {
            out.warnings.push_back("merged duplicate length T=" + std::to_string(orb.length) +
                                   " from orbit (n=" + std::to_string(orb.n_chords) +
                                   ", m=" + std::to_string(orb.m_windings) + ")");
            continue;
        }
        merged.push_back(orb);
    }
    out.orbits = std::move(merged);
    return out;
}

double orbit_time_integral(const RadialProfile& profile, const PeriodicOrbit& orbit,
                           const std::function<double(double)>& f) {
    return 2.0 * orbit.n_chords * radial_pass_integral(profile, orbit.p, f);
}

double delta_T(const RadialProfile& profile, const PeriodicOrbit& orbit, const RadialFn& a_dir) {
    auto f = [&](double r) {
        const double c = profile.speed(r);
        return -a_dir(r) / (c * c);
    };
    return orbit.n_chords * radial_pass_integral(profile, orbit.p, f);
}

} // namespace specrig
