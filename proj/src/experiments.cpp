#include "specrig/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include "specrig/errors.hpp"
#include "specrig/io.hpp"
#include "specrig/numerics.hpp"
#include "specrig/rays.hpp"

namespace specrig {

Tolerances Tolerances::from_json(const nlohmann::json& j) {
    Tolerances t;
    t.null_rel = j.value("null_rel", t.null_rel);
    t.detect_rel = j.value("detect_rel", t.detect_rel);
    t.fd_step_first = j.value("fd_step_first", t.fd_step_first);
    t.fd_step_second = j.value("fd_step_second", t.fd_step_second);
    t.ibp_abs = j.value("ibp_abs", t.ibp_abs);
    t.peak_match = j.value("peak_match", t.peak_match);
    t.orbit_separation = j.value("orbit_separation", t.orbit_separation);
    t.degeneracy_rel = j.value("degeneracy_rel", t.degeneracy_rel);
    t.duplicate_length = j.value("duplicate_length", t.duplicate_length);
    for (double v : {t.null_rel, t.detect_rel, t.fd_step_first, t.fd_step_second, t.ibp_abs,
                     t.peak_match, t.orbit_separation, t.degeneracy_rel, t.duplicate_length})
        if (!(v > 0.0)) throw ConfigError("tolerances must be positive");
    return t;
}

nlohmann::json Tolerances::to_json() const {
    return {{"null_rel", null_rel},
            {"detect_rel", detect_rel},
            {"fd_step_first", fd_step_first},
            {"fd_step_second", fd_step_second},
            {"ibp_abs", ibp_abs},
            {"peak_match", peak_match},
            {"orbit_separation", orbit_separation},
            {"degeneracy_rel", degeneracy_rel},
            {"duplicate_length", duplicate_length}};
}

TraceParams TraceParams::from_json(const nlohmann::json& j) {
    TraceParams t;
    t.t_min = j.value("t_min", t.t_min);
    t.t_max = j.value("t_max", t.t_max);
    t.dt = j.value("dt", t.dt);
    if (j.contains("window")) t.window = TraceWindow::from_json(j.at("window"));
    t.min_prominence_frac = j.value("min_prominence_frac", t.min_prominence_frac);
    return t;
}

nlohmann::json TraceParams::to_json() const {
    return {{"t_min", t_min},
            {"t_max", t_max},
            {"dt", dt},
            {"window", window.to_json()},
            {"min_prominence_frac", min_prominence_frac}};
}

LengthParams LengthParams::from_json(const nlohmann::json& j) {
    LengthParams p;
    p.n_max_chords = j.value("n_max_chords", p.n_max_chords);
    p.m_max = j.value("m_max", p.m_max);
    return p;
}

nlohmann::json LengthParams::to_json() const {
    return {{"n_max_chords", n_max_chords}, {"m_max", m_max}};
}

DensityParams DensityParams::from_json(const nlohmann::json& j) {
    DensityParams p;
    if (j.contains("K_list")) p.k_list = j.at("K_list").get<std::vector<int>>();
    p.j_count = j.value("J", p.j_count);
    if (p.k_list.empty()) throw ConfigError("density: K_list must not be empty");
    return p;
}

nlohmann::json DensityParams::to_json() const {
    return {{"K_list", k_list}, {"J", j_count}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    if (j.contains("profile")) c.profile = ProfileSpec::from_json(j.at("profile"));
    c.l_max = j.value("l_max", c.l_max);
    c.n_max = j.value("n_max", c.n_max);
    if (j.contains("family")) c.family = PerturbationFamily::from_json(j.at("family"));
    if (j.contains("trace")) c.trace = TraceParams::from_json(j.at("trace"));
    if (j.contains("lengths")) c.lengths = LengthParams::from_json(j.at("lengths"));
    if (j.contains("density")) c.density = DensityParams::from_json(j.at("density"));
    if (j.contains("tolerances")) c.tol = Tolerances::from_json(j.at("tolerances"));
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.eigenfunction_export = j.value("eigenfunction_export", c.eigenfunction_export);
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    if (c.l_max < 0 || c.n_max < 1) throw ConfigError("need l_max >= 0 and n_max >= 1");
    if (c.threads < 1) throw ConfigError("threads must be >= 1");
    return c;
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"profile", profile.to_json()},
            {"l_max", l_max},
            {"n_max", n_max},
            {"family", family.to_json()},
            {"trace", trace.to_json()},
            {"lengths", lengths.to_json()},
            {"density", density.to_json()},
            {"tolerances", tol.to_json()},
            {"seed", seed},
            {"threads", threads},
            {"eigenfunction_export", eigenfunction_export},
            {"out", out_dir.string()}};
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& config_path) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot read config file " + config_path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    return from_json(j);
}

namespace {

nlohmann::json report_header(const ExperimentConfig& cfg) {
    return {{"config_hash", config_hash_hex(cfg.to_json())},
            {"tolerances", cfg.tol.to_json()},
            {"seed", cfg.seed}};
}

void ensure_out_dir(const ExperimentConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir.string());
}

std::string mode_label(const Mode& m) {
    return "f_l" + std::to_string(m.l) + "_n" + std::to_string(m.n);
}

} // namespace

void run_spectrum(const ExperimentConfig& cfg) {
    ensure_out_dir(cfg);
    const RadialProfile profile = make_profile(cfg.profile);
    const Spectrum spec = full_spectrum(profile, cfg.profile.bc, cfg.profile.variant,
                                        cfg.l_max, cfg.n_max, cfg.threads, cfg.tol.degeneracy_rel);

    {
        CsvWriter csv(cfg.out_dir / "spectrum.csv");
        csv.row({"l", "n", "lambda", "multiplicity"});
        for (const Mode& m : spec.modes)
            csv.row({CsvWriter::num(m.l), CsvWriter::num(m.n), CsvWriter::num(m.lambda),
                     CsvWriter::num(m.multiplicity())});
    }
    {
        const int count = std::min<int>(cfg.eigenfunction_export, static_cast<int>(spec.modes.size()));
        CsvWriter csv(cfg.out_dir / "eigenfunctions.csv");
        std::vector<std::string> header{"r"};
        for (int k = 0; k < count; ++k) header.push_back(mode_label(spec.modes[k]));
        csv.row(header);
        for (int i = 0; i < profile.size(); ++i) {
            std::vector<std::string> row{CsvWriter::num(profile.grid.nodes[i])};
            for (int k = 0; k < count; ++k) row.push_back(CsvWriter::num(spec.modes[k].f[i]));
            csv.row(row);
        }
    }

    nlohmann::json summary = report_header(cfg);
    summary["l_max"] = cfg.l_max;
    summary["n_max"] = cfg.n_max;
    summary["mode_count"] = spec.modes.size();
    summary["expanded_count"] = spec.expanded().size();
    summary["lambda_first"] = spec.modes.empty() ? 0.0 : spec.modes.front().lambda;
    summary["herglotz_margin"] = herglotz_margin(profile);
    nlohmann::json degen = nlohmann::json::array();
    for (const DegeneracyFlag& d : spec.degeneracies)
        degen.push_back({{"l1", d.l1}, {"n1", d.n1}, {"l2", d.l2}, {"n2", d.n2},
                         {"lambda1", d.lambda1}, {"lambda2", d.lambda2}});
    summary["degeneracies"] = degen;
    write_json(cfg.out_dir / "spectrum_summary.json", summary);
}

void run_perturb(const ExperimentConfig& cfg) {
    ensure_out_dir(cfg);
    const RadialProfile profile = make_profile(cfg.profile);
    const std::vector<ModeDelta> formula =
        delta_spectrum(profile, cfg.profile.bc, cfg.profile.variant, cfg.family,
                       cfg.l_max, cfg.n_max, cfg.threads);
    const std::vector<ModeDelta> fd =
        fd_delta_spectrum(profile, cfg.profile.bc, cfg.profile.variant, cfg.family,
                          cfg.l_max, cfg.n_max, cfg.tol.fd_step_first, cfg.threads);
    std::map<std::pair<int, int>, double> fd_map;
    for (const ModeDelta& d : fd) fd_map[{d.l, d.n}] = d.dlambda;

    double max_rel = 0.0;
    nlohmann::json modes = nlohmann::json::array();
    for (const ModeDelta& d : formula) {
        const double fd_val = fd_map.at({d.l, d.n});
        const double rel = std::abs(d.dlambda - fd_val) / std::abs(d.lambda);
        max_rel = std::max(max_rel, rel);
        modes.push_back({{"l", d.l}, {"n", d.n}, {"lambda", d.lambda},
                         {"dlambda_formula", d.dlambda}, {"dlambda_fd", fd_val},
                         {"rel_err", rel}});
    }
    nlohmann::json report = report_header(cfg);
    report["modes"] = modes;
    report["max_rel_err"] = max_rel;   // relative to |lambda| per mode
    report["fd_step"] = cfg.tol.fd_step_first;
    write_json(cfg.out_dir / "perturbation.json", report);
}

void run_lengths(const ExperimentConfig& cfg) {
    ensure_out_dir(cfg);
    const RadialProfile profile = make_profile(cfg.profile);
    const LengthSpectrum ls = find_periodic_orbits(profile, cfg.lengths.n_max_chords, cfg.lengths.m_max);

    CsvWriter csv(cfg.out_dir / "length_spectrum.csv");
    csv.row({"n", "m", "p", "T"});
    for (const PeriodicOrbit& orb : ls.orbits)
        csv.row({CsvWriter::num(orb.n_chords), CsvWriter::num(orb.m_windings),
                 CsvWriter::num(orb.p), CsvWriter::num(orb.length)});

    nlohmann::json summary = report_header(cfg);
    summary["orbit_count"] = ls.orbits.size();
    summary["warnings"] = ls.warnings;
    summary["herglotz_margin"] = herglotz_margin(profile);
    summary["n_max_chords"] = cfg.lengths.n_max_chords;
    summary["m_max"] = cfg.lengths.m_max;
    write_json(cfg.out_dir / "lengths_summary.json", summary);
}

void run_trace(const ExperimentConfig& cfg) {
    ensure_out_dir(cfg);
    const RadialProfile profile = make_profile(cfg.profile);
    const Spectrum spec = full_spectrum(profile, cfg.profile.bc, cfg.profile.variant,
                                        cfg.l_max, cfg.n_max, cfg.threads, cfg.tol.degeneracy_rel);
    const std::vector<double> t_grid = uniform_time_grid(cfg.trace.t_min, cfg.trace.t_max, cfg.trace.dt);
    const TraceSeries series = trace_series(spec, cfg.trace.window, t_grid);

    // Matching runs on the envelope: one peak per singular time, no carrier.
    double env_max = 0.0;
    for (std::size_t i = 0; i < series.values.size(); ++i)
        env_max = std::max(env_max, std::hypot(series.values[i], series.quadrature[i]));
    const std::vector<Peak> peaks =
        detect_envelope_peaks(series, cfg.trace.min_prominence_frac * env_max);

    const LengthSpectrum ls = find_periodic_orbits(profile, cfg.lengths.n_max_chords, cfg.lengths.m_max);
    const MatchReport match = match_peaks(peaks, ls.orbits, cfg.trace.t_min, cfg.trace.t_max,
                                          cfg.tol.peak_match, cfg.tol.orbit_separation);

    {
        CsvWriter csv(cfg.out_dir / "trace.csv");
        csv.row({"t", "value"});
        for (std::size_t i = 0; i < series.t.size(); ++i)
            csv.row({CsvWriter::num(series.t[i]), CsvWriter::num(series.values[i])});
    }

    nlohmann::json peaks_json = nlohmann::json::array();
    for (const PeakMatch& pm : match.peaks)
        peaks_json.push_back({{"t", pm.t}, {"prominence", pm.prominence},
                              {"nearest_orbit_T", pm.nearest_orbit_length}, {"gap", pm.gap}});
    nlohmann::json peak_report = report_header(cfg);
    peak_report["peaks"] = peaks_json;
    write_json(cfg.out_dir / "trace_peaks.json", peak_report);

    nlohmann::json orbits_json = nlohmann::json::array();
    for (const OrbitMatch& om : match.orbits)
        orbits_json.push_back({{"n", om.n_chords}, {"m", om.m_windings}, {"T", om.length},
                               {"nearest_peak", om.nearest_peak}, {"gap", om.gap},
                               {"qualified", om.qualified}, {"matched", om.matched}});
    nlohmann::json match_report = report_header(cfg);
    match_report["orbits"] = orbits_json;
    match_report["peaks"] = peaks_json;
    match_report["all_qualified_orbits_matched"] = match.all_qualified_orbits_matched;
    match_report["all_prominent_peaks_matched"] = match.all_prominent_peaks_matched;
    match_report["window"] = cfg.trace.window.to_json();
    write_json(cfg.out_dir / "trace_match.json", match_report);
}

void run_density(const ExperimentConfig& cfg) {
    ensure_out_dir(cfg);
    const RadialProfile profile = make_profile(cfg.profile);
    const Spectrum spec = full_spectrum(profile, cfg.profile.bc, cfg.profile.variant,
                                        cfg.l_max, cfg.n_max, cfg.threads, cfg.tol.degeneracy_rel);
    const int k_max = *std::max_element(cfg.density.k_list.begin(), cfg.density.k_list.end());
    if (static_cast<int>(spec.modes.size()) < k_max)
        throw ConfigError("density: spectrum has fewer modes than the largest K");
    const auto basis = legendre_basis(profile.grid, cfg.density.j_count);

    nlohmann::json sigma = nlohmann::json::object();
    bool trend_ok = true;
    double prev = -1.0;
    GramResult last;
    for (int k : cfg.density.k_list) {
        const std::vector<Mode> subset(spec.modes.begin(), spec.modes.begin() + k);
        GramResult gram = density_gram(subset, basis, profile);
        sigma[std::to_string(k)] = gram.sigma_min;
        if (prev >= 0.0 && gram.sigma_min < 0.99 * prev) trend_ok = false;
        prev = gram.sigma_min;

        CsvWriter csv(cfg.out_dir / ("gram_K" + std::to_string(k) + ".csv"));
        for (int row = 0; row < gram.q.rows; ++row) {
            std::vector<std::string> cells;
            for (int col = 0; col < gram.q.cols; ++col) cells.push_back(CsvWriter::num(gram.q(row, col)));
            csv.row(cells);
        }
        last = std::move(gram);
    }

    // In-span reconstruction: random coefficients, pairings from direct
    // quadrature, recovered by least squares on the largest Gram matrix.
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> coeff(cfg.density.j_count);
    for (double& v : coeff) v = unit(rng);
    std::vector<double> f_samples(profile.size(), 0.0);
    for (int j = 0; j < cfg.density.j_count; ++j)
        for (int i = 0; i < profile.size(); ++i) f_samples[i] += coeff[j] * basis[j][i];

    auto pairings = [&](const std::vector<double>& fn) {
        std::vector<double> y(k_max);
        for (int k = 0; k < k_max; ++k) {
            double acc = 0.0;
            for (int i = 0; i < profile.size(); ++i) {
                const double r = profile.grid.nodes[i];
                acc += profile.grid.cell_weights[i] * fn[i] * profile.rho[i] * r * r *
                       sq(spec.modes[k].f[i]);
            }
            y[k] = acc;
        }
        return y;
    };
    auto reconstruct_residual = [&](const std::vector<double>& fn) {
        const std::vector<double> x = svd_least_squares(last.q, pairings(fn));
        double num = 0.0, den = 0.0;
        for (int i = 0; i < profile.size(); ++i) {
            double fit = 0.0;
            for (int j = 0; j < cfg.density.j_count; ++j) fit += x[j] * basis[j][i];
            num += sq(fit - fn[i]);
            den += sq(fn[i]);
        }
        return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    };

    std::vector<double> heldout(profile.size());
    for (int i = 0; i < profile.size(); ++i) heldout[i] = std::sin(4.0 * profile.grid.nodes[i]);

    nlohmann::json report = report_header(cfg);
    report["J"] = cfg.density.j_count;
    report["sigma_min"] = sigma;
    report["trend_ok"] = trend_ok;
    report["recon_in_span_rel"] = reconstruct_residual(f_samples);
    report["recon_heldout_rel"] = reconstruct_residual(heldout);
    write_json(cfg.out_dir / "density.json", report);
}

RigidityReport run_rigidity(const ExperimentConfig& cfg) {
    ensure_out_dir(cfg);
    const RadialProfile profile = make_profile(cfg.profile);
    const Spectrum spec = full_spectrum(profile, cfg.profile.bc, cfg.profile.variant,
                                        cfg.l_max, cfg.n_max, cfg.threads, cfg.tol.degeneracy_rel);
    const std::vector<double> a_dir = profile.sample(cfg.family.a_dir);
    const std::vector<double> b_dir = profile.sample(cfg.family.b_dir);

    RigidityReport rep;
    rep.lambda_abs_max = spec.lambda_abs_max();

    const bool a_zero = cfg.family.a_dir.is_zero();
    const bool b_zero = cfg.family.b_dir.is_zero();
    const bool b_const = cfg.family.b_dir.kind == RadialFn::Kind::Constant;
    if (a_zero && b_zero) rep.family_class = "null";
    else if (a_zero && b_const) rep.family_class = "gauge";
    else rep.family_class = "active";

    // (i) first-order shifts, and (iv)'s per-mode integration-by-parts gap.
    for (const Mode& mode : spec.modes) {
        double d = 0.0;
        if (!a_zero) d += delta_lambda_a(mode, a_dir, profile);
        if (!b_zero) d += delta_lambda_b(mode, b_dir, profile);
        rep.max_abs_dlambda = std::max(rep.max_abs_dlambda, std::abs(d));

        const double grad = delta_lambda_b(mode, b_dir, profile);
        const double divr = delta_lambda_b_divergence(mode, b_dir, profile);
        if (std::abs(grad - divr) >= rep.ibp_gap) {
            rep.ibp_gap = std::abs(grad - divr);
            rep.ibp_gradient = grad;
            rep.ibp_divergence = divr;
        }
    }

    // (ii)/(iii) classification thresholds.
    const double tol_null = cfg.tol.null_rel * rep.lambda_abs_max;
    const double tol_detect = cfg.tol.detect_rel * rep.lambda_abs_max;
    if (rep.family_class == "active") {
        rep.detect_ok = rep.max_abs_dlambda >= tol_detect;
        rep.verdicts.push_back(rep.detect_ok
                                   ? "active family detected: max|dlambda| >= detect threshold"
                                   : "active family NOT detected: max|dlambda| below detect threshold");
    } else {
        rep.null_ok = rep.max_abs_dlambda <= tol_null;
        rep.verdicts.push_back(rep.null_ok
                                   ? "null/gauge family: first-order spectrum shift below null threshold"
                                   : "null/gauge family FAILED the null threshold");
    }

    // (iv) energy identity.
    rep.energy_value = energy_gradient(profile, b_dir);
    rep.energy_pairing_value = energy_pairing(profile, b_dir);
    rep.energy_gap = std::abs(rep.energy_value - rep.energy_pairing_value);
    rep.verdicts.push_back(rep.energy_gap <= cfg.tol.ibp_abs
                               ? "energy identity holds to tolerance"
                               : "energy identity gap exceeds tolerance");
    rep.verdicts.push_back(rep.ibp_gap <= cfg.tol.ibp_abs
                               ? "gradient/divergence forms agree to tolerance"
                               : "gradient/divergence gap exceeds tolerance");

    // Constraint residuals: a-side through the turning-ray transform of
    // (d/ds) c_s^{-2} = -a' c^{-2}; b-side as sup |d_r b'|.
    if (!a_zero) {
        auto f = [&](double r) {
            const double c = profile.speed(r);
            return -cfg.family.a_dir(r) / (c * c);
        };
        const double r_in = profile.is_ball() ? 0.0 : profile.grid.inner_radius;
        for (int k = 1; k <= 40; ++k) {
            const double r = r_in + (1.0 - r_in) * k / 41.0;
            rep.abel_residual_sup = std::max(rep.abel_residual_sup,
                                             std::abs(abel_transform(profile, f, r)));
        }
    }
    const std::vector<double> b_grad = derivative_uniform(b_dir, profile.grid.h);
    for (double v : b_grad) rep.b_grad_sup = std::max(rep.b_grad_sup, std::abs(v));
    rep.verdicts.push_back("a-side transform residual sup = " + format_double(rep.abel_residual_sup));
    rep.verdicts.push_back("b-side |d_r b'| sup = " + format_double(rep.b_grad_sup));

    // (v) second-order step, valid when the first-order b-direction vanishes.
    // The relative comparison is restricted to modes whose second-order shift
    // is not near a zero crossing, where a relative error is ill-posed.
    if (cfg.family.b_dir2 && b_zero && a_zero) {
        rep.second_order_run = true;
        const std::vector<double> b2 = profile.sample(*cfg.family.b_dir2);
        const int count = std::min<std::size_t>(5, spec.modes.size());
        std::vector<std::pair<double, double>> pairs;
        double fd_scale = 0.0;
        for (int k = 0; k < count; ++k) {
            const Mode& mode = spec.modes[k];
            const double formula = delta2_lambda_b(mode, b2, profile);
            const double fd = fd_delta2_lambda(profile, cfg.profile.bc, cfg.profile.variant,
                                               cfg.family, mode.l, mode.n, cfg.tol.fd_step_second);
            pairs.emplace_back(formula, fd);
            fd_scale = std::max(fd_scale, std::abs(fd));
        }
        for (const auto& [formula, fd] : pairs) {
            if (std::abs(fd) < 0.1 * fd_scale) continue;
            const double rel = std::abs(formula - fd) / std::abs(fd);
            if (rel >= rep.second_order_rel_err) {
                rep.second_order_rel_err = rel;
                rep.second_order_formula = formula;
                rep.second_order_fd = fd;
            }
        }
        rep.verdicts.push_back("second-order step max rel err = " +
                               format_double(rep.second_order_rel_err));
    }

    nlohmann::json out = report_header(cfg);
    out["family_class"] = rep.family_class;
    out["lambda_abs_max"] = rep.lambda_abs_max;
    out["max_abs_dlambda"] = rep.max_abs_dlambda;
    out["tol_null"] = tol_null;
    out["tol_detect"] = tol_detect;
    out["null_ok"] = rep.null_ok;
    out["detect_ok"] = rep.detect_ok;
    out["ibp_gradient"] = rep.ibp_gradient;
    out["ibp_divergence"] = rep.ibp_divergence;
    out["ibp_gap"] = rep.ibp_gap;
    out["energy_value"] = rep.energy_value;
    out["energy_pairing"] = rep.energy_pairing_value;
    out["energy_gap"] = rep.energy_gap;
    out["abel_residual_sup"] = rep.abel_residual_sup;
    out["b_grad_sup"] = rep.b_grad_sup;
    if (rep.second_order_run) {
        out["second_order"] = {{"formula", rep.second_order_formula},
                               {"fd", rep.second_order_fd},
                               {"rel_err", rep.second_order_rel_err}};
    }
    out["verdicts"] = rep.verdicts;
    write_json(cfg.out_dir / "rigidity.json", out);
    return rep;
}

} // namespace specrig
