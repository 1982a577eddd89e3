#include <cstdint>
#include <functional>
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "specrig/errors.hpp"
#include "specrig/experiments.hpp"

namespace {

constexpr const char* kDisclaimer =
    "note: geometric admissibility is certified only through the Herglotz margin; "
    "conjugacy, clean-intersection and spreading conditions are assumed, not verified.";

int dispatch(const std::string& command, const specrig::ExperimentConfig& cfg) {
    using namespace specrig;
    if (command == "spectrum") run_spectrum(cfg);
    else if (command == "perturb") run_perturb(cfg);
    else if (command == "lengths") run_lengths(cfg);
    else if (command == "trace") run_trace(cfg);
    else if (command == "density") run_density(cfg);
    else if (command == "rigidity") run_rigidity(cfg);
    else throw ConfigError("unknown experiment '" + command + "'");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"specrig: spectral and geometric experiments for radial coefficient profiles"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    int threads_override = 0;
    std::uint64_t seed_override = 0;
    bool seed_set = false;

    int n_chords_override = 0;
    int m_windings_override = 0;

    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--out", out_override, "output directory (overrides config)");
    app.add_option("--threads", threads_override, "worker threads (overrides config)");
    app.add_option("--seed", seed_override, "random seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--n-chords", n_chords_override, "orbit search chord bound (overrides config)");
    app.add_option("--m-windings", m_windings_override, "orbit search winding bound (overrides config)");

    const std::pair<const char*, const char*> experiments[] = {
        {"spectrum", "eigenvalues and radial eigenfunctions"},
        {"perturb", "first-order eigenvalue shifts vs finite differences"},
        {"lengths", "periodic broken-ray length spectrum"},
        {"trace", "windowed wave trace with peak/orbit matching"},
        {"density", "squared-eigenfunction Gram conditioning"},
        {"rigidity", "forward rigidity chain with identity checks"},
    };
    for (const auto& [name, blurb] : experiments)
        app.add_subcommand(name, blurb)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        specrig::ExperimentConfig cfg = specrig::ExperimentConfig::load(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (threads_override > 0) cfg.threads = threads_override;
        if (seed_set) cfg.seed = seed_override;
        if (n_chords_override > 0) cfg.lengths.n_max_chords = n_chords_override;
        if (m_windings_override > 0) cfg.lengths.m_max = m_windings_override;
        std::cout << kDisclaimer << '\n';
        dispatch(command, cfg);
        std::cout << "ok: " << command << " artifacts written to " << cfg.out_dir.string() << '\n';
        return 0;
    } catch (const specrig::ConfigError& e) {
        std::cout << nlohmann::json{{"error", e.what()}, {"kind", "config"}}.dump() << '\n';
        return 2;
    } catch (const specrig::NumericalError& e) {
        std::cout << nlohmann::json{{"error", e.what()}, {"kind", "numerical"}}.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cout << nlohmann::json{{"error", e.what()}, {"kind", "internal"}}.dump() << '\n';
        return 1;
    }
}
