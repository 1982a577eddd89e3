#include "specrig/wave_trace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "specrig/errors.hpp"
#include "specrig/numerics.hpp"

namespace specrig {

double TraceWindow::weight(double omega) const {
    if (omega < 0.0 || omega > omega_max) return 0.0;
    if (shape == Shape::Boxcar) return 1.0;
    const double c = std::cos(0.5 * M_PI * omega / omega_max);
    return c * c;
}

TraceWindow TraceWindow::from_json(const nlohmann::json& j) {
    TraceWindow w;
    w.omega_max = j.value("omega_max", 60.0);
    const std::string shape = j.value("shape", "cosine2");
    if (shape == "cosine2") w.shape = Shape::CosineSquared;
    else if (shape == "boxcar") w.shape = Shape::Boxcar;
    else throw ConfigError("unknown window shape '" + shape + "'");
    if (!(w.omega_max > 0.0)) throw ConfigError("window omega_max must be positive");
    return w;
}

nlohmann::json TraceWindow::to_json() const {
    return {{"omega_max", omega_max},
            {"shape", shape == Shape::CosineSquared ? "cosine2" : "boxcar"}};
}

std::vector<double> uniform_time_grid(double t_min, double t_max, double dt) {
    if (!(t_min > 0.0)) throw ConfigError("time grid: t_min must be positive");
    if (!(t_max > t_min) || !(dt > 0.0)) throw ConfigError("time grid: need t_max > t_min, dt > 0");
    std::vector<double> t;
    const int count = static_cast<int>(std::floor((t_max - t_min) / dt)) + 1;
    t.reserve(count);
    for (int i = 0; i < count; ++i) t.push_back(t_min + i * dt);
    return t;
}

namespace {

struct WeightedModeSum {
    std::vector<double> omega, weight;
};

WeightedModeSum windowed_frequencies(const std::vector<double>& expanded, const TraceWindow& window) {
    if (expanded.empty()) throw ConfigError("trace: empty spectrum");
    WeightedModeSum sum;
    sum.omega.reserve(expanded.size());
    for (double lambda : expanded) {
        if (lambda > 1e-12)
            throw NumericalError("trace: positive eigenvalue in spectrum has no real frequency");
        const double omega = std::sqrt(std::max(0.0, -lambda));
        const double w = window.weight(omega);
        if (w == 0.0) continue;
        sum.omega.push_back(omega);
        sum.weight.push_back(w);
    }
    return sum;
}

} // namespace

TraceSeries trace_series(const std::vector<double>& expanded_lambdas, const TraceWindow& window,
                         const std::vector<double>& t_grid) {
    const WeightedModeSum sum = windowed_frequencies(expanded_lambdas, window);
    TraceSeries series;
    series.window = window;
    series.t = t_grid;
    series.values.assign(t_grid.size(), 0.0);
    series.quadrature.assign(t_grid.size(), 0.0);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        double acc_c = 0.0, acc_s = 0.0;
        for (std::size_t k = 0; k < sum.omega.size(); ++k) {
            acc_c += sum.weight[k] * std::cos(t * sum.omega[k]);
            acc_s += sum.weight[k] * std::sin(t * sum.omega[k]);
        }
        series.values[i] = acc_c;
        series.quadrature[i] = acc_s;
    }
    return series;
}

TraceSeries trace_series(const Spectrum& spectrum, const TraceWindow& window,
                         const std::vector<double>& t_grid) {
    return trace_series(spectrum.expanded(), window, t_grid);
}

TraceSeries delta_trace(const Spectrum& spectrum, const std::vector<ModeDelta>& deltas,
                        const TraceWindow& window, const std::vector<double>& t_grid) {
    if (spectrum.modes.empty()) throw ConfigError("delta_trace: empty spectrum");
    std::map<std::pair<int, int>, double> by_mode;
    for (const ModeDelta& d : deltas) by_mode[{d.l, d.n}] = d.dlambda;

    // Expanded (omega, dlambda, weight) triples; weights frozen at the base
    // spectrum. t sin(t omega)/(2 omega) is written through sinc so the
    // omega -> 0 limit t^2/2 is taken smoothly.
    std::vector<double> omega, scale;
    for (const Mode& mode : spectrum.modes) {
        const auto it = by_mode.find({mode.l, mode.n});
        if (it == by_mode.end())
            throw ConfigError("delta_trace: delta_spectrum does not cover mode (l=" +
                              std::to_string(mode.l) + ", n=" + std::to_string(mode.n) + ")");
        const double om = mode.omega();
        const double w = window.weight(om);
        if (w == 0.0) continue;
        for (int copy = 0; copy < mode.multiplicity(); ++copy) {
            omega.push_back(om);
            scale.push_back(w * it->second * 0.5);
        }
    }

    TraceSeries series;
    series.window = window;
    series.t = t_grid;
    series.values.assign(t_grid.size(), 0.0);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        double acc = 0.0;
        for (std::size_t k = 0; k < omega.size(); ++k)
            acc += scale[k] * t * t * sinc(t * omega[k]);
        series.values[i] = acc;
    }
    return series;
}

namespace {

std::vector<Peak> detect_peaks_on(const std::vector<double>& t, const std::vector<double>& y,
                                  double min_prominence) {
    const std::size_t n = y.size();
    std::vector<Peak> peaks;
    if (n < 3) return peaks;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] > y[i + 1])) continue;

        // Prominence: lowest valley on each side before a higher sample
        // (or the series end); drop to the higher of the two valleys.
        double left_min = y[i];
        for (std::size_t j = i; j-- > 0;) {
            left_min = std::min(left_min, y[j]);
            if (y[j] > y[i]) break;
        }
        double right_min = y[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            right_min = std::min(right_min, y[j]);
            if (y[j] > y[i]) break;
        }
        const double prominence = y[i] - std::max(left_min, right_min);
        if (prominence < min_prominence) continue;

        const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
        const double shift = (denom != 0.0) ? 0.5 * (y[i - 1] - y[i + 1]) / denom : 0.0;
        const double dt = t[i + 1] - t[i];
        peaks.push_back({t[i] + shift * dt, prominence});
    }
    return peaks;
}

} // namespace

std::vector<Peak> detect_peaks(const TraceSeries& series, double min_prominence) {
    std::vector<double> y(series.values.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::abs(series.values[i]);
    return detect_peaks_on(series.t, y, min_prominence);
}

std::vector<Peak> detect_envelope_peaks(const TraceSeries& series, double min_prominence) {
    if (series.quadrature.size() != series.values.size())
        throw ConfigError("detect_envelope_peaks: series carries no quadrature component");
    std::vector<double> y(series.values.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = std::hypot(series.values[i], series.quadrature[i]);
    return detect_peaks_on(series.t, y, min_prominence);
}

MatchReport match_peaks(const std::vector<Peak>& peaks, const std::vector<PeriodicOrbit>& orbits,
                        double t_lo, double t_hi, double match_tol, double separation,
                        double prominent_frac) {
    MatchReport report;

    double max_prom = 0.0;
    for (const Peak& pk : peaks)
        if (pk.t >= t_lo && pk.t <= t_hi) max_prom = std::max(max_prom, pk.prominence);

    for (const PeriodicOrbit& orb : orbits) {
        if (orb.length < t_lo || orb.length > t_hi) continue;
        OrbitMatch om;
        om.n_chords = orb.n_chords;
        om.m_windings = orb.m_windings;
        om.length = orb.length;
        double sep = 1e30;
        for (const PeriodicOrbit& other : orbits) {
            if (&other == &orb) continue;
            sep = std::min(sep, std::abs(other.length - orb.length));
        }
        om.qualified = sep >= separation;
        om.gap = 1e30;
        for (const Peak& pk : peaks) {
            const double gap = std::abs(pk.t - orb.length);
            if (gap < om.gap) {
                om.gap = gap;
                om.nearest_peak = pk.t;
            }
        }
        om.matched = om.gap <= match_tol;
        if (om.qualified && !om.matched) report.all_qualified_orbits_matched = false;
        report.orbits.push_back(om);
    }

    for (const Peak& pk : peaks) {
        if (pk.t < t_lo || pk.t > t_hi) continue;
        PeakMatch pm;
        pm.t = pk.t;
        pm.prominence = pk.prominence;
        pm.prominent = max_prom > 0.0 && pk.prominence >= prominent_frac * max_prom;
        pm.gap = 1e30;
        for (const PeriodicOrbit& orb : orbits) {
            const double gap = std::abs(pk.t - orb.length);
            if (gap < pm.gap) {
                pm.gap = gap;
                pm.nearest_orbit_length = orb.length;
            }
        }
        pm.matched = pm.gap <= match_tol;
        if (pm.prominent && !pm.matched) report.all_prominent_peaks_matched = false;
        report.peaks.push_back(pm);
    }
    return report;
}

} // namespace specrig
