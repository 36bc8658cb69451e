#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qoc/arma.hpp"
#include "qoc/bounds.hpp"
#include "qoc/composite.hpp"
#include "qoc/control.hpp"
#include "qoc/errors.hpp"
#include "qoc/io.hpp"
#include "qoc/montecarlo.hpp"
#include "qoc/optimizer.hpp"

// Batch front-end: each subcommand reads a JSON config, drives the library,
// and writes deterministic CSV/JSON artifacts into --out.

namespace {

using qoc::io::check_keys;
using qoc::io::ConfigError;
using json = nlohmann::json;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    int threads = 1;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    std::filesystem::create_directories(args.out_dir);
    return (std::filesystem::path(args.out_dir) / name).string();
}

int require_int(const json& j, const std::string& where) {
    if (!j.is_number_integer())
        throw ConfigError(where + ": expected an integer");
    return j.get<int>();
}

double require_num(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

std::uint64_t config_seed(const json& cfg, const CommonArgs& args) {
    if (args.seed_override) return *args.seed_override;
    if (!cfg.contains("seed")) throw ConfigError("config: missing key \"seed\"");
    if (!cfg["seed"].is_number_unsigned() && !cfg["seed"].is_number_integer())
        throw ConfigError("config.seed: expected an integer");
    return cfg["seed"].get<std::uint64_t>();
}

std::vector<double> grid_values(const json& j, const std::string& where) {
    if (j.is_array()) {
        std::vector<double> out;
        for (const auto& v : j) out.push_back(require_num(v, where));
        return out;
    }
    check_keys(j, {"min", "max", "count"}, {"min", "max", "count"}, where);
    const double lo = require_num(j["min"], where + ".min");
    const double hi = require_num(j["max"], where + ".max");
    const int count = require_int(j["count"], where + ".count");
    if (count < 1) throw ConfigError(where + ".count: must be >= 1");
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1.0));
    return out;
}

// ---- subcommands ----------------------------------------------------------

void cmd_optimize(const json& cfg, const CommonArgs& args) {
    check_keys(cfg, {"noise", "theta_q", "n_min", "n_max", "max_iters", "tol"},
               {"noise", "theta_q", "n_min", "n_max"}, "config");
    const auto noise = qoc::io::noise_from_json(cfg["noise"], "config.noise");
    const double theta_q = require_num(cfg["theta_q"], "config.theta_q");
    const int n_min = require_int(cfg["n_min"], "config.n_min");
    const int n_max = require_int(cfg["n_max"], "config.n_max");
    qoc::optimizer::OptimizeOptions opts;
    if (cfg.contains("max_iters")) opts.max_iters = require_int(cfg["max_iters"], "config.max_iters");
    if (cfg.contains("tol")) opts.tol = require_num(cfg["tol"], "config.tol");

    const auto sweep = qoc::optimizer::sweep_lengths(noise, theta_q, n_min, n_max, opts);

    qoc::io::CsvWriter csv({"n", "infidelity", "share_a", "share_b", "share_c"});
    json sequences = json::array();
    for (const auto& [n, entry] : sweep.per_length) {
        const auto& b = entry.infidelity;
        const double denom = b.term_a + b.term_b + b.term_c;
        csv.add_row({static_cast<double>(n), b.total,
                     denom > 0.0 ? b.term_a / denom : 0.0,
                     denom > 0.0 ? b.term_b / denom : 0.0,
                     denom > 0.0 ? b.term_c / denom : 0.0});
        // Nested so an entry's "sequence" feeds straight into `evaluate`.
        sequences.push_back(json{{"n", n}, {"sequence", qoc::io::to_json(entry.seq)}});
    }
    csv.write(out_path(args, "sweep.csv"));
    qoc::io::write_text(out_path(args, "sequences.json"), sequences.dump(2) + "\n");
}

void cmd_evaluate(const json& cfg, const CommonArgs& args) {
    check_keys(cfg, {"sequence", "noise"}, {"sequence", "noise"}, "config");
    const auto seq = qoc::io::sequence_from_json(cfg["sequence"], "config.sequence");
    const auto noise = qoc::io::noise_from_json(cfg["noise"], "config.noise");

    const auto breakdown = qoc::control::infidelity_full(seq, noise);
    qoc::io::CsvWriter csv({"term_a", "term_b", "term_c", "total"});
    csv.add_row({breakdown.term_a, breakdown.term_b, breakdown.term_c, breakdown.total});
    csv.write(out_path(args, "breakdown.csv"));

    const auto report = qoc::bounds::weak_noise_regime_report(noise, seq);
    qoc::io::write_text(out_path(args, "report.json"),
                        qoc::io::to_json(report).dump(2) + "\n");
}

void cmd_simulate(const json& cfg, const CommonArgs& args) {
    check_keys(cfg,
               {"models", "theta_q", "lengths", "trajectories", "seed", "burn_in"},
               {"models", "theta_q", "lengths", "trajectories", "seed"}, "config");
    const double theta_q = require_num(cfg["theta_q"], "config.theta_q");
    if (!cfg["lengths"].is_array()) throw ConfigError("config.lengths: expected an array");
    const std::uint64_t seed = config_seed(cfg, args);
    qoc::montecarlo::SimConfig sim;
    sim.num_trajectories = require_int(cfg["trajectories"], "config.trajectories");
    if (sim.num_trajectories < 1)
        throw ConfigError("config.trajectories: must be >= 1");
    sim.seed = seed;
    if (cfg.contains("burn_in")) sim.burn_in = require_int(cfg["burn_in"], "config.burn_in");

    qoc::io::CsvWriter csv({"label", "n", "analytic_infid", "mc_infid", "mc_se",
                            "second_order_bound"});
    if (!cfg["models"].is_array()) throw ConfigError("config.models: expected an array");
    for (const auto& item : cfg["models"]) {
        check_keys(item, {"label", "noise"}, {"label", "noise"}, "config.models[]");
        if (!item["label"].is_string())
            throw ConfigError("config.models[].label: expected a string");
        const std::string label = item["label"].get<std::string>();
        const auto noise = qoc::io::noise_from_json(item["noise"], "config.models[].noise");

        for (const auto& jn : cfg["lengths"]) {
            const int n = require_int(jn, "config.lengths[]");
            const auto [seq, breakdown] = qoc::optimizer::optimize_full(
                noise, theta_q, n, qoc::control::PulseSequence::uniform(theta_q, n));
            const auto est =
                qoc::montecarlo::simulate_single_axis(seq, noise, sim, args.threads);
            const auto report = qoc::bounds::weak_noise_regime_report(noise, seq);
            csv.add_row(label, {static_cast<double>(n), breakdown.total,
                                est.mean_infidelity, est.standard_error,
                                report.second_order_bound});
        }
    }
    csv.write(out_path(args, "simulate.csv"));
}

void cmd_compare_cp(const json& cfg, const CommonArgs& args) {
    check_keys(cfg, {"kind", "theta_q", "total_power", "a1", "b1", "k"},
               {"kind", "theta_q", "total_power", "a1", "b1"}, "config");
    if (!cfg["kind"].is_string()) throw ConfigError("config.kind: expected a string");
    const std::string kind_name = cfg["kind"].get<std::string>();
    qoc::composite::CpKind kind;
    if (kind_name == "SK1")
        kind = qoc::composite::CpKind::sk1;
    else if (kind_name == "BB1")
        kind = qoc::composite::CpKind::bb1;
    else
        throw ConfigError("config.kind: expected \"SK1\" or \"BB1\"");
    const int expected_k = (kind == qoc::composite::CpKind::sk1) ? 3 : 4;
    if (cfg.contains("k") && require_int(cfg["k"], "config.k") != expected_k)
        throw ConfigError("config.k: sequence length does not match the kind");

    const double theta_q = require_num(cfg["theta_q"], "config.theta_q");
    const double power = require_num(cfg["total_power"], "config.total_power");
    const auto a1 = grid_values(cfg["a1"], "config.a1");
    const auto b1 = grid_values(cfg["b1"], "config.b1");

    const auto rows = qoc::composite::comparison_map(a1, b1, kind, theta_q, power);
    qoc::io::CsvWriter csv({"a1", "b1", "infid_opt", "infid_cp", "diff", "l2_to_dc"});
    for (const auto& row : rows)
        csv.add_row({row.a1, row.b1, row.infid_optimal, row.infid_cp, row.difference,
                     row.l2_to_dc});
    csv.write(out_path(args, kind == qoc::composite::CpKind::sk1
                                 ? "comparison_sk1.csv"
                                 : "comparison_bb1.csv"));
}

void cmd_spectrum(const json& cfg, const CommonArgs& args) {
    check_keys(cfg, {"model", "omega_count"}, {"model"}, "config");
    const auto model = qoc::io::arma_from_json(cfg["model"], "config.model");
    int count = 512;
    if (cfg.contains("omega_count"))
        count = require_int(cfg["omega_count"], "config.omega_count");
    if (count < 1) throw ConfigError("config.omega_count: must be >= 1");

    qoc::io::CsvWriter csv({"omega", "s"});
    for (int i = 1; i <= count; ++i) {
        const double w = std::numbers::pi * i / count;
        csv.add_row({w, qoc::arma::power_spectrum(model, w)});
    }
    csv.write(out_path(args, "spectrum.csv"));
}

void cmd_filter_function(const json& cfg, const CommonArgs& args) {
    check_keys(cfg, {"sequence", "omega_count"}, {"sequence"}, "config");
    const auto seq = qoc::io::sequence_from_json(cfg["sequence"], "config.sequence");
    int count = 512;
    if (cfg.contains("omega_count"))
        count = require_int(cfg["omega_count"], "config.omega_count");
    if (count < 1) throw ConfigError("config.omega_count: must be >= 1");

    std::vector<double> omegas;
    for (int i = 1; i <= count; ++i) omegas.push_back(std::numbers::pi * i / count);
    const auto ff = qoc::control::filter_functions(seq, omegas);

    qoc::io::CsvWriter csv({"omega", "fxx2", "fzy2"});
    for (int i = 0; i < count; ++i)
        csv.add_row({omegas[i], ff[i].first, ff[i].second});
    csv.write(out_path(args, "filter_function.csv"));
}

void cmd_sweep_robustness(const json& cfg, const CommonArgs& args) {
    check_keys(cfg,
               {"base_models", "sigma_w2", "deviations", "samples_per_eps", "theta_q",
                "n", "seed"},
               {"base_models", "deviations", "samples_per_eps", "theta_q", "n", "seed"},
               "config");
    double sigma_w2 = 1e-3;
    if (cfg.contains("sigma_w2")) sigma_w2 = require_num(cfg["sigma_w2"], "config.sigma_w2");

    std::vector<qoc::arma::ArmaModel> bases;
    if (!cfg["base_models"].is_array())
        throw ConfigError("config.base_models: expected an array");
    for (const auto& item : cfg["base_models"]) {
        check_keys(item, {"a1", "b1"}, {"a1", "b1"}, "config.base_models[]");
        try {
            bases.emplace_back(std::vector<double>{require_num(item["a1"], "a1")},
                               std::vector<double>{require_num(item["b1"], "b1")},
                               sigma_w2);
        } catch (const qoc::NonStationaryError& e) {
            throw ConfigError(std::string("config.base_models[]: ") + e.what());
        }
    }
    std::vector<double> deviations;
    for (const auto& v : cfg["deviations"])
        deviations.push_back(require_num(v, "config.deviations[]"));

    const auto rows = qoc::montecarlo::robustness_sweep(
        bases, deviations, require_int(cfg["samples_per_eps"], "config.samples_per_eps"),
        require_num(cfg["theta_q"], "config.theta_q"),
        require_int(cfg["n"], "config.n"), config_seed(cfg, args));

    qoc::io::CsvWriter csv(
        {"a1", "b1", "eps", "worst_rel_increase", "mean_rel_increase", "discarded"});
    for (const auto& row : rows) {
        const auto& base = bases[row.base_index];
        csv.add_row({base.ar()[0], base.ma()[0], row.deviation, row.worst_rel_increase,
                     row.mean_rel_increase, static_cast<double>(row.discarded)});
    }
    csv.write(out_path(args, "robustness.csv"));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal single-axis pulse sequences under ARMA control noise"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string command;
    for (const auto& name :
         {"optimize", "evaluate", "simulate", "compare-cp", "spectrum",
          "filter-function", "sweep-robustness"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "JSON experiment config")
            ->required();
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_option("--seed", args.seed_override, "override the config seed");
        sub->add_option("--threads", args.threads, "Monte Carlo worker threads");
        sub->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const json cfg = load_config(args.config_path);
        if (command == "optimize") cmd_optimize(cfg, args);
        else if (command == "evaluate") cmd_evaluate(cfg, args);
        else if (command == "simulate") cmd_simulate(cfg, args);
        else if (command == "compare-cp") cmd_compare_cp(cfg, args);
        else if (command == "spectrum") cmd_spectrum(cfg, args);
        else if (command == "filter-function") cmd_filter_function(cfg, args);
        else if (command == "sweep-robustness") cmd_sweep_robustness(cfg, args);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qoc::NonStationaryError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qoc::PhaseUndefinedError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
