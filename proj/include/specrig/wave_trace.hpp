#pragma once

#include <string>
#include <vector>

#include "specrig/eigensolver.hpp"
#include "specrig/perturbation.hpp"
#include "specrig/rays.hpp"

namespace specrig {

/// Frequency taper applied to the mode sum. The cosine-squared taper
/// w(omega) = cos^2(pi omega / (2 omega_max)) on [0, omega_max] sets the peak
/// width of the smoothed trace to ~pi/omega_max.
struct TraceWindow {
    enum class Shape { CosineSquared, Boxcar };
    double omega_max = 60.0;
    Shape shape = Shape::CosineSquared;

    double weight(double omega) const;

    static TraceWindow from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct Peak {
    double t = 0.0;
    double prominence = 0.0;
};

/// Windowed wave trace s(t) = sum_k w(omega_k) cos(t omega_k) over the
/// expanded spectrum, omega_k = sqrt(-lambda_k). `quadrature` holds the
/// companion sine sum, so hypot(values, quadrature) is the exact modulus of
/// the analytic signal sum_k w e^{i t omega_k} (the carrier-free envelope).
struct TraceSeries {
    std::vector<double> t;
    std::vector<double> values;
    std::vector<double> quadrature;
    TraceWindow window;
};

std::vector<double> uniform_time_grid(double t_min, double t_max, double dt);

TraceSeries trace_series(const Spectrum& spectrum, const TraceWindow& window,
                         const std::vector<double>& t_grid);
/// Same, from a raw expanded eigenvalue list.
TraceSeries trace_series(const std::vector<double>& expanded_lambdas, const TraceWindow& window,
                         const std::vector<double>& t_grid);

/// First-order trace perturbation
///   ds(t) = sum_k w(omega_k) (dlambda_k / (2 omega_k)) t sin(t omega_k),
/// with window weights frozen at the base spectrum (the taper mollifies the
/// distribution and does not move with the family). Linear in delta_spectrum.
TraceSeries delta_trace(const Spectrum& spectrum, const std::vector<ModeDelta>& deltas,
                        const TraceWindow& window, const std::vector<double>& t_grid);

/// Local maxima of |s(t)| with prominence >= min_prominence, positions
/// refined by three-point parabolic interpolation.
std::vector<Peak> detect_peaks(const TraceSeries& series, double min_prominence);

/// Same detector on the analytic-signal envelope. Singularities of the trace
/// produce one envelope maximum each, where plain |s(t)| shows a train of
/// carrier arches; peak/orbit matching uses this variant.
std::vector<Peak> detect_envelope_peaks(const TraceSeries& series, double min_prominence);

/// Two-sided peak/orbit comparison. An orbit length is `qualified` when the
/// nearest other length is at least `separation` away; `matched` when a peak
/// lies within `match_tol`. A peak is `prominent` when its prominence is at
/// least prominent_frac of the largest.
struct OrbitMatch {
    int n_chords = 0, m_windings = 0;
    double length = 0.0;
    double nearest_peak = 0.0;
    double gap = 0.0;
    bool qualified = false;
    bool matched = false;
};
struct PeakMatch {
    double t = 0.0;
    double prominence = 0.0;
    double nearest_orbit_length = 0.0;
    double gap = 0.0;
    bool prominent = false;
    bool matched = false;
};
struct MatchReport {
    std::vector<OrbitMatch> orbits;
    std::vector<PeakMatch> peaks;
    bool all_qualified_orbits_matched = true;
    bool all_prominent_peaks_matched = true;
};

MatchReport match_peaks(const std::vector<Peak>& peaks, const std::vector<PeriodicOrbit>& orbits,
                        double t_lo, double t_hi, double match_tol, double separation,
                        double prominent_frac = 0.2);

} // namespace specrig
