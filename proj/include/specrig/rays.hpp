#pragma once

#include <functional>
#include <string>
#include <vector>

#include "specrig/profiles.hpp"

namespace specrig {

/// Ray parameter p in [0, 1/c(1)) with its turning data. Under a positive
/// Herglotz margin r/c(r) is strictly increasing, so the turning radius
/// r/c(r) = p is unique; rays with r_*(p) <= R reflect at the inner sphere.
struct RayParameter {
    double p = 0.0;
    double turning_radius = 0.0;   // clamped to R when the ray reflects
    bool reflects_inner = false;
};

RayParameter turning_point(const RadialProfile& profile, double p);

/// Integral of F(r) dt along one descending (or ascending) radial pass,
///   int_{r_lo}^{1} F(r) / (c sqrt(1 - p^2 c^2 / r^2)) dr,
/// with the inverse-square-root turning singularity absorbed by integrating
/// in v = sqrt(r/c - p). A boundary-to-boundary chord is two passes.
/// rel_tol <= 0 selects the default: 1e-12 for analytic speed profiles,
/// 1e-9 for sampled ones (whose interpolant is only piecewise smooth).
double radial_pass_integral(const RadialProfile& profile, double p,
                            const std::function<double(double)>& f, double rel_tol = 0.0);

/// Travel time of one chord, T_chord(p) = 2 int_{r_*}^1 dr / (c sqrt(...)).
double chord_time(const RadialProfile& profile, double p);

/// Angular advance of one chord, 2 int_{r_*}^1 (p c / r^2) dr / sqrt(...).
/// At p = 0 this is the geometric limit: pi through the center of a ball,
/// 0 for a radially reflecting annulus chord.
double angular_advance(const RadialProfile& profile, double p);

/// Abel transform of a radial function at radius r in (R, 1):
///   int_r^1 (f/c) (1 - (r c(r') / (r' c(r)))^2)^{-1/2} dr'.
double abel_transform(const RadialProfile& profile, const std::function<double(double)>& f, double r);

/// Periodic broken ray closing after n chords and m windings (coprime),
/// n * dtheta(p) = 2 pi m, of total travel time T = n * T_chord(p).
struct PeriodicOrbit {
    double p = 0.0;
    int n_chords = 0;
    int m_windings = 0;
    double length = 0.0;            // T
    double turning_radius = 0.0;
    bool reflects_inner = false;
};

struct LengthSpectrum {
    std::vector<PeriodicOrbit> orbits;    // sorted by length
    std::vector<std::string> warnings;    // merged duplicates, bracketing failures
};

/// Enumerate periodic orbits for all coprime (n, m), n <= n_max_chords,
/// m <= m_windings_max, whose angular target 2 pi m / n is attained.
/// Roots of n * dtheta(p) = 2 pi m are bisected to 1e-10 on the residual;
/// lengths closer than 1e-9 are merged with a warning.
LengthSpectrum find_periodic_orbits(const RadialProfile& profile, int n_max_chords, int m_windings_max);

/// Integral of a radial function over the orbit with respect to travel time,
/// computed by the turning-point reduction (2n radial passes).
double orbit_time_integral(const RadialProfile& profile, const PeriodicOrbit& orbit,
                           const std::function<double(double)>& f);

/// First-order change of the orbit length under a -> a + s a':
///   delta T = (1/2) int_0^T (d/ds c_s^{-2})|_0 (gamma(t)) dt,
/// with (d/ds) c_s^{-2}|_0 = -a' c^{-2}.
double delta_T(const RadialProfile& profile, const PeriodicOrbit& orbit, const RadialFn& a_dir);

} // namespace specrig
