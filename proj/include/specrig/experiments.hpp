#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "specrig/perturbation.hpp"
#include "specrig/profiles.hpp"
#include "specrig/wave_trace.hpp"

namespace specrig {

/// Documented default thresholds; every value can be overridden from the
/// config file and is embedded in the reports.
struct Tolerances {
    double null_rel = 1e-8;        // max|dlambda| <= null_rel * max|lambda| for a null family
    double detect_rel = 1e-6;      // max|dlambda| >= detect_rel * max|lambda| flags a non-null family
    double fd_step_first = 1e-4;   // central FD step, first order
    double fd_step_second = 1e-3;  // central FD step, second order
    double ibp_abs = 1e-8;         // integration-by-parts identity, absolute
    double peak_match = 0.05;      // peak <-> orbit matching distance
    double orbit_separation = 0.15;// isolation required of a testable orbit length
    double degeneracy_rel = 1e-8;  // accidental degeneracy flag
    double duplicate_length = 1e-9;// length-spectrum merge distance

    static Tolerances from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct TraceParams {
    double t_min = 0.5;
    double t_max = 8.5;
    double dt = 1.0 / 512.0;
    TraceWindow window;
    double min_prominence_frac = 0.005;  // of max|s|

    static TraceParams from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct LengthParams {
    int n_max_chords = 12;
    int m_max = 3;

    static LengthParams from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct DensityParams {
    std::vector<int> k_list = {20, 40, 60, 80};
    int j_count = 8;

    static DensityParams from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ExperimentConfig {
    ProfileSpec profile;
    int l_max = 2;
    int n_max = 5;
    PerturbationFamily family;
    TraceParams trace;
    LengthParams lengths;
    DensityParams density;
    Tolerances tol;
    std::uint64_t seed = 1u;
    int threads = 1;
    int eigenfunction_export = 8;
    std::filesystem::path out_dir = "out";

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;      // canonical form, hashed into reports
    static ExperimentConfig load(const std::filesystem::path& config_path);
};

/// Spectrum CSV + eigenfunction CSV + summary JSON.
void run_spectrum(const ExperimentConfig& cfg);

/// Per-mode formula-vs-FD perturbation report (JSON).
void run_perturb(const ExperimentConfig& cfg);

/// Length spectrum CSV + summary JSON.
void run_lengths(const ExperimentConfig& cfg);

/// Trace CSV, peak JSON, matched-peak report JSON.
void run_trace(const ExperimentConfig& cfg);

/// Gram matrices, sigma_min trend, reconstruction residuals (CSV + JSON).
void run_density(const ExperimentConfig& cfg);

/// Forward rigidity chain: first-order shifts, null/detect classification,
/// integration-by-parts identity, energy identity, optional second order.
/// Returns the report; also persisted as JSON.
struct RigidityReport {
    double lambda_abs_max = 0.0;
    double max_abs_dlambda = 0.0;
    std::string family_class;           // "null", "gauge", or "active"
    bool null_ok = false;               // family_class null/gauge: below threshold
    bool detect_ok = false;             // family_class active: above threshold
    double ibp_gradient = 0.0;          // delta_lambda_b, gradient form (worst mode)
    double ibp_divergence = 0.0;        // divergence form (same mode)
    double ibp_gap = 0.0;               // max abs difference over modes
    double energy_value = 0.0;          // -int e^b (d_r b')^2 r^2 dr
    double energy_pairing_value = 0.0;  // int b' Div(e^b grad b') r^2 dr
    double energy_gap = 0.0;
    double abel_residual_sup = 0.0;     // sup_r |Abel[(d/ds) c_s^{-2}]| (a-side)
    double b_grad_sup = 0.0;            // sup |d_r b'| (b-side)
    bool second_order_run = false;
    double second_order_formula = 0.0;  // worst-mode values
    double second_order_fd = 0.0;
    double second_order_rel_err = 0.0;
    std::vector<std::string> verdicts;
};
RigidityReport run_rigidity(const ExperimentConfig& cfg);

} // namespace specrig
