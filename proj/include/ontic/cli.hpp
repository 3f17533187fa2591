// cli.hpp
// Command-line front end. Subcommands: antidistinguish, verify, maxoverlap,
// simulate, helstrom, model-zoo. Every artifact carries a metadata header;
// validation failures exit 1 with a machine-readable error JSON on stderr.
// For verify the exit code encodes the verdict: 0 overlap_zero,
// 2 hypotheses_not_met, 3 witness_found, 4 inconclusive.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ontic/antidistinguish.hpp"
#include "ontic/experiment.hpp"
#include "ontic/model_zoo.hpp"
#include "ontic/nogo.hpp"
#include "ontic/serialize.hpp"

namespace ontic::cli {

namespace detail {

inline std::string resolve_path(const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    if (const char* dir = std::getenv("ONTIC_OUT_DIR"))
        return (std::filesystem::path(dir) / p).string();
    return path;
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        if (!text.empty() && text.back() != '\n') out << "\n";
    } else {
        write_text_file(resolve_path(out_path), text);
    }
}

struct PairSpec {
    double overlap2 = 0.5;
    std::string psi_path, phi_path;

    std::pair<PureState, PureState> resolve() const {
        if (!psi_path.empty() || !phi_path.empty()) {
            if (psi_path.empty() || phi_path.empty())
                throw validation_error("state_pair", "--psi and --phi must be given together");
            return {state_from_json(load_json_file(resolve_path(psi_path))),
                    state_from_json(load_json_file(resolve_path(phi_path)))};
        }
        return qubit_pair_with_overlap2(overlap2);
    }
};

inline void add_pair_options(CLI::App* cmd, PairSpec& pair) {
    cmd->add_option("--overlap2", pair.overlap2,
                    "Squared overlap of the canonical qubit pair")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--psi", pair.psi_path, "Path to a state JSON for psi");
    cmd->add_option("--phi", pair.phi_path, "Path to a state JSON for phi");
}

inline DeviceConfig parse_device_config(std::size_t n, const std::string& correlation,
                                        const std::vector<double>& bias) {
    DeviceConfig cfg;
    cfg.n = n;
    cfg.choice_bias = bias;
    if (correlation == "independent" || correlation.empty()) {
        cfg.correlation = CorrelationKind::independent;
    } else {
        const auto colon = correlation.find(':');
        const std::string kind = correlation.substr(0, colon);
        if (kind == "shared")
            cfg.correlation = CorrelationKind::shared_randomness;
        else if (kind == "common")
            cfg.correlation = CorrelationKind::common_supply;
        else
            throw validation_error("correlation",
                                   "unknown correlation '" + correlation +
                                       "' (independent | shared:X | common:X)");
        cfg.strength = colon == std::string::npos
                           ? 1.0
                           : std::stod(correlation.substr(colon + 1));
    }
    cfg.validate();
    return cfg;
}

// Builds or loads the antidistinguishing measurement for a pair.
inline AntidistinguishingResult obtain_measurement(const PureState& psi, const PureState& phi,
                                                   const std::string& meas_path,
                                                   std::size_t n, const SearchOptions& opts) {
    if (!meas_path.empty()) {
        AntidistinguishingResult res;
        res.measurement = measurement_from_json(load_json_file(resolve_path(meas_path)));
        res.n = n;
        res.method = AntidistinguishMethod::numerical_search;
        auto products = enumerate_product_states(psi, phi, n);
        std::vector<PureState> states;
        for (auto& [idx, st] : products) states.push_back(st);
        const auto rep = verify_antidistinguishing(res.measurement, states, 1e-8);
        res.residual = rep.max_residual;
        res.achieved = rep.pass;
        return res;
    }
    if (n == 2 && std::abs(psi.overlap2(phi) - 0.5) <= 1e-9)
        return build_half_overlap_measurement(psi, phi);
    return search_measurement(psi, phi, n, opts);
}

inline int verdict_exit_code(NoGoStatus s) {
    switch (s) {
        case NoGoStatus::overlap_zero: return 0;
        case NoGoStatus::hypotheses_not_met: return 2;
        case NoGoStatus::witness_found: return 3;
        default: return 4;
    }
}

} // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"antidistinguishability and ontological-model verification toolkit"};
    app.require_subcommand(1);

    // --- antidistinguish ---------------------------------------------------
    auto* cmd_anti = app.add_subcommand(
        "antidistinguish", "Construct a measurement whose outcome k never fires on product k");
    detail::PairSpec anti_pair;
    detail::add_pair_options(cmd_anti, anti_pair);
    std::size_t anti_n = 0;
    std::size_t anti_nmax = 5;
    SearchOptions anti_opts;
    std::string anti_method = "auto";
    std::string anti_out;
    cmd_anti->add_option("--n", anti_n, "Copy count (0 = choose the smallest feasible)");
    cmd_anti->add_option("--n-max", anti_nmax, "Largest copy count tried in auto mode");
    cmd_anti->add_option("--seed", anti_opts.seed, "Search seed");
    cmd_anti->add_option("--restarts", anti_opts.restarts, "Search restarts");
    cmd_anti->add_option("--iterations", anti_opts.iterations, "Two-level updates per restart");
    cmd_anti->add_option("--target-residual", anti_opts.target_residual, "Residual target");
    cmd_anti->add_option("--method", anti_method, "auto | explicit | search")
        ->check(CLI::IsMember({"auto", "explicit", "search"}));
    cmd_anti->add_option("--out", anti_out, "Output path (default stdout)");

    // --- verify ------------------------------------------------------------
    auto* cmd_verify =
        app.add_subcommand("verify", "Run a theorem check against a model file");
    std::string verify_model, verify_meas, verify_mid = "M", verify_out;
    int verify_theorem = 1;
    bool verify_local = false;
    double verify_zero_tol = 1e-12;
    cmd_verify->add_option("--model", verify_model, "Model JSON path")->required();
    cmd_verify->add_option("--measurement", verify_meas,
                           "Optional measurement JSON for a quantum cross-check");
    cmd_verify->add_option("--measurement-id", verify_mid, "Measurement id in the model");
    cmd_verify->add_option("--theorem", verify_theorem, "1 or 2")->check(CLI::Range(1, 2));
    cmd_verify->add_flag("--local", verify_local, "Use the product-space (local) variant");
    cmd_verify->add_option("--zero-tol", verify_zero_tol, "Forbidden-statistic tolerance");
    cmd_verify->add_option("--out", verify_out, "Output path (default stdout)");

    // --- maxoverlap ----------------------------------------------------------
    auto* cmd_max =
        app.add_subcommand("maxoverlap", "LP bound on epistemic overlap vs statistics slack");
    detail::PairSpec max_pair;
    detail::add_pair_options(cmd_max, max_pair);
    std::vector<double> max_grid{0.0, 0.01, 0.05, 0.1};
    std::size_t max_lambda = 8;
    std::size_t max_n = 2;
    MaxOverlapOptions max_opts;
    std::string max_format = "csv", max_out;
    cmd_max->add_option("--epsilon-grid", max_grid, "Epsilon values")->delimiter(',');
    cmd_max->add_option("--lambda-count", max_lambda, "Ontic state count");
    cmd_max->add_option("--n", max_n, "Copy count (2^n outcomes)");
    cmd_max->add_option("--rounds", max_opts.rounds, "Alternation rounds");
    cmd_max->add_option("--floor-c", max_opts.floor_c, "Compatibility floor constant");
    cmd_max->add_option("--format", max_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_max->add_option("--out", max_out, "Output path (default stdout)");

    // --- simulate ------------------------------------------------------------
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo of the n-device protocol");
    detail::PairSpec sim_pair;
    detail::add_pair_options(cmd_sim, sim_pair);
    std::string sim_model, sim_meas, sim_mid = "M", sim_correlation = "independent";
    std::string sim_format = "json", sim_out;
    std::size_t sim_trials = 100000, sim_n = 2;
    std::uint64_t sim_seed = 1;
    std::vector<double> sim_bias;
    SearchOptions sim_opts;
    cmd_sim->add_option("--model", sim_model, "Ontic model JSON (model-statistics run)");
    cmd_sim->add_option("--measurement", sim_meas, "Measurement JSON (quantum run)");
    cmd_sim->add_option("--measurement-id", sim_mid, "Measurement id for model runs");
    cmd_sim->add_option("--trials", sim_trials, "Trial count");
    cmd_sim->add_option("--seed", sim_seed, "RNG seed");
    cmd_sim->add_option("--n", sim_n, "Device count");
    cmd_sim->add_option("--bias", sim_bias, "Per-device probability of preparing psi")
        ->delimiter(',');
    cmd_sim->add_option("--correlation", sim_correlation,
                        "independent | shared:X | common:X");
    cmd_sim->add_option("--search-seed", sim_opts.seed, "Seed for the measurement search");
    cmd_sim->add_option("--format", sim_format, "json | csv")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_sim->add_option("--out", sim_out, "Output path (default stdout)");

    // --- helstrom ------------------------------------------------------------
    auto* cmd_hel = app.add_subcommand("helstrom", "Two-state discrimination error bound");
    detail::PairSpec hel_pair;
    detail::add_pair_options(cmd_hel, hel_pair);
    std::string hel_out;
    cmd_hel->add_option("--out", hel_out, "Output path (default stdout)");

    // --- model-zoo -----------------------------------------------------------
    auto* cmd_zoo = app.add_subcommand("model-zoo", "Write the fixture models to a directory");
    std::string zoo_dir = ".";
    double zoo_mix = 0.5;
    cmd_zoo->add_option("--out-dir", zoo_dir, "Target directory");
    cmd_zoo->add_option("--mix", zoo_mix, "Shared-atom weight of the overlapping fixture")
        ->check(CLI::Range(1e-6, 1.0 - 1e-6));

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << json{{"error", "usage"}, {"message", e.what()}}.dump(2) << "\n";
        return 1;
    }

    try {
        if (cmd_hel->parsed()) {
            const auto [psi, phi] = hel_pair.resolve();
            const double bound = helstrom_error_bound(psi, phi);
            std::ostringstream text;
            text << "# " << kToolName << " " << kToolVersion << " helstrom\n"
                 << format17(bound) << "\n";
            detail::emit(text.str(), hel_out, out);
            return 0;
        }

        if (cmd_anti->parsed()) {
            const auto [psi, phi] = anti_pair.resolve();
            AntidistinguishingResult res;
            if (anti_method == "explicit") {
                res = build_half_overlap_measurement(psi, phi);
            } else if (anti_method == "search") {
                res = search_measurement(psi, phi, anti_n == 0 ? 2 : anti_n, anti_opts);
            } else if (anti_n != 0) {
                res = detail::obtain_measurement(psi, phi, "", anti_n, anti_opts);
            } else if (std::abs(psi.overlap2(phi) - 0.5) <= 1e-9) {
                res = build_half_overlap_measurement(psi, phi);
            } else {
                res = minimal_copies(psi, phi, anti_opts.target_residual, anti_nmax,
                                     anti_opts);
            }
            json j = to_json(res);
            j["meta"] = meta_header();
            j["meta"]["seed"] = anti_opts.seed;
            detail::emit(j.dump(2), anti_out, out);
            return res.achieved ? 0 : 1;
        }

        if (cmd_verify->parsed()) {
            const OnticModel model =
                model_from_json(load_json_file(detail::resolve_path(verify_model)));
            auto scen_it = model.scenarios.find(verify_mid);
            if (scen_it == model.scenarios.end())
                throw validation_error("scenario_missing",
                                       "model has no scenario for measurement '" +
                                           verify_mid + "'");
            const auto& scen = scen_it->second;
            NoGoVerdict verdict;
            if (verify_theorem == 2)
                verdict = theorem2_check(model, verify_mid, scen.psi_id, scen.phi_id,
                                         scen.joint_ids, verify_zero_tol);
            else if (verify_local)
                verdict = theorem1_check_local(model, verify_mid, scen.psi_id, scen.phi_id,
                                               scen.joint_ids, verify_zero_tol);
            else
                verdict = theorem1_check(model, verify_mid, scen.psi_id, scen.phi_id,
                                         scen.joint_ids, verify_zero_tol);
            json j = to_json(verdict);
            j["meta"] = meta_header();
            j["meta"]["zero_tol"] = verify_zero_tol;
            if (!verify_meas.empty()) {
                // Quantum cross-check: do the recorded joint states actually
                // annihilate under the supplied measurement?
                const auto meas =
                    measurement_from_json(load_json_file(detail::resolve_path(verify_meas)));
                std::vector<PureState> states;
                for (const auto& jid : scen.joint_ids)
                    states.push_back(model.find_preparation(jid)->state);
                const auto rep = verify_antidistinguishing(meas, states, 1e-8);
                j["quantum_cross_check"] = json{{"residuals", rep.residuals},
                                                {"max_residual", rep.max_residual},
                                                {"pass", rep.pass}};
            }
            detail::emit(j.dump(2), verify_out, out);
            return detail::verdict_exit_code(verdict.status);
        }

        if (cmd_max->parsed()) {
            const auto [psi, phi] = max_pair.resolve();
            const auto labels = Measurement::default_labels(std::size_t{1} << max_n);
            const auto rows = max_overlap_grid(psi, phi, labels, max_lambda, max_grid,
                                               max_opts);
            if (max_format == "json") {
                json j{{"meta", meta_header()}, {"rows", json::array()}};
                for (const auto& r : rows) j["rows"].push_back(to_json(r));
                detail::emit(j.dump(2), max_out, out);
            } else {
                detail::emit(maxoverlap_csv(rows), max_out, out);
            }
            return 0;
        }

        if (cmd_sim->parsed()) {
            SimulationSummary summary;
            if (!sim_model.empty()) {
                const OnticModel model =
                    model_from_json(load_json_file(detail::resolve_path(sim_model)));
                const auto cfg = detail::parse_device_config(
                    [&] {
                        std::size_t n = 0;
                        const auto& scen = model.scenarios.at(sim_mid);
                        while ((std::size_t{1} << n) < scen.joint_ids.size()) ++n;
                        return n;
                    }(),
                    sim_correlation, sim_bias);
                summary = simulate_model(model, sim_mid, cfg, sim_trials, sim_seed);
            } else {
                const auto [psi, phi] = sim_pair.resolve();
                const auto cfg =
                    detail::parse_device_config(sim_n, sim_correlation, sim_bias);
                const auto res =
                    detail::obtain_measurement(psi, phi, sim_meas, sim_n, sim_opts);
                if (!res.achieved)
                    throw validation_error("measurement_not_antidistinguishing",
                                           "no measurement with residual <= target found");
                summary = simulate_quantum(psi, phi, res.measurement, cfg, sim_trials,
                                           sim_seed);
            }
            if (sim_format == "csv")
                detail::emit(summary_csv(summary), sim_out, out);
            else
                detail::emit(to_json(summary).dump(2), sim_out, out);
            return 0;
        }

        if (cmd_zoo->parsed()) {
            const auto [psi, phi] = qubit_pair_with_overlap2(0.5);
            const auto anti = build_half_overlap_measurement(psi, phi);
            std::vector<CVec> zb;
            for (std::size_t i = 0; i < 4; ++i) zb.push_back(PureState::basis(4, i).amplitudes());
            const auto m2 = Measurement::from_basis(zb);

            const std::string dir = detail::resolve_path(zoo_dir);
            std::filesystem::create_directories(dir);
            const auto put = [&](const std::string& name, const json& j) {
                write_text_file(dir + "/" + name, j.dump(2));
            };
            json manifest{{"meta", meta_header()}, {"files", json::array()}};
            const auto add = [&](const std::string& name, const json& j) {
                put(name, j);
                manifest["files"].push_back(name);
            };
            add("psi.json", to_json(psi));
            add("phi.json", to_json(phi));
            add("half_overlap_measurement.json", to_json(anti.measurement));
            add("psi_ontic.json", to_json(zoo::psi_ontic_scenario(psi, phi, anti.measurement)));
            add("overlapping_toy.json",
                to_json(zoo::overlapping_scenario(psi, phi, anti.measurement, zoo_mix, false)));
            add("overlapping_exact_zeros.json",
                to_json(zoo::overlapping_scenario(psi, phi, anti.measurement, zoo_mix, true)));
            add("factorisable_product.json",
                to_json(zoo::factorisable_product_scenario(psi, phi, anti.measurement)));
            add("diagonal_correlated.json",
                to_json(zoo::diagonal_correlated_scenario(psi, phi, anti.measurement)));
            add("shared_randomness.json",
                to_json(zoo::shared_randomness_scenario(psi, phi, anti.measurement)));
            add("measurement_dependent.json",
                to_json(zoo::measurement_dependent_scenario(psi, phi, anti.measurement, m2)));
            out << manifest.dump(2) << "\n";
            return 0;
        }
    } catch (const error& e) {
        err << json{{"error", e.code()}, {"message", e.what()}}.dump(2) << "\n";
        return 1;
    } catch (const json::exception& e) {
        err << json{{"error", "json"}, {"message", e.what()}}.dump(2) << "\n";
        return 1;
    }
    return 0;
}

} // namespace ontic::cli
