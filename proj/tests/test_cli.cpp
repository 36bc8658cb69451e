#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "qoc/io.hpp"

// Drives the installed CLI binary end to end: schema rejection, exit
// codes, determinism of emitted artifacts, and a few value checks.

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
    const char* env = std::getenv("QOC_CLI");
    REQUIRE(env != nullptr);
    return env;
}

fs::path scratch_dir() {
    const char* env = std::getenv("QOC_TMP");
    REQUIRE(env != nullptr);
    fs::create_directories(env);
    return env;
}

int run_cli(const std::string& tail) {
    const std::string cmd = cli_path() + " " + tail + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("JSON wire formats round-trip") {
    const qoc::arma::ArmaModel model({0.5, -0.1}, {0.3}, 2.5e-3);
    const auto j = qoc::io::to_json(model);
    CHECK(j.dump() == R"({"ar":[0.5,-0.1],"ma":[0.3],"sigma_w2":0.0025})");
    const auto back = qoc::io::arma_from_json(j, "test");
    CHECK(back.ar() == model.ar());
    CHECK(back.ma() == model.ma());
    CHECK(back.sigma_w2() == model.sigma_w2());

    CHECK(qoc::io::to_json(qoc::arma::DcNoiseModel{1e-3}).dump() ==
          R"({"dc_variance":0.001})");

    const qoc::control::PulseSequence seq({0.25, 0.75}, 1.0);
    const auto js = qoc::io::to_json(seq);
    const auto seq2 = qoc::io::sequence_from_json(js, "test");
    CHECK(seq2.thetas() == seq.thetas());
    CHECK(seq2.target_angle() == seq.target_angle());

    CHECK_THROWS_AS(qoc::io::arma_from_json({{"ar", {2.0}}, {"sigma_w2", 1.0}}, "t"),
                    qoc::io::ConfigError);
    CHECK_THROWS_AS(qoc::io::arma_from_json({{"arr", {0.2}}, {"sigma_w2", 1.0}}, "t"),
                    qoc::io::ConfigError);
}

TEST_CASE("malformed and schema-violating configs exit 2") {
    const auto dir = scratch_dir();
    write_file(dir / "bad.json", "{ not json");
    CHECK(run_cli("optimize --config " + (dir / "bad.json").string()) == 2);

    CHECK(run_cli("optimize --config " + (dir / "missing.json").string()) == 2);

    write_file(dir / "unknown.json",
               R"({"noise": {"control": {"sigma_w2": 1e-3}}, "theta_q": 3.14,
                   "n_min": 1, "n_max": 3, "bogus": 1})");
    CHECK(run_cli("optimize --config " + (dir / "unknown.json").string()) == 2);

    // Non-stationary input model is a config-data error.
    write_file(dir / "nonstat.json",
               R"({"noise": {"control": {"ar": [1.0], "sigma_w2": 1e-3}},
                   "theta_q": 3.14, "n_min": 1, "n_max": 3})");
    CHECK(run_cli("optimize --config " + (dir / "nonstat.json").string()) == 2);

    // SK1 with k != 3 violates the schema.
    write_file(dir / "kmismatch.json",
               R"({"kind": "SK1", "k": 4, "theta_q": 3.141592653589793,
                   "total_power": 1e-3, "a1": [0.1], "b1": [0.1]})");
    CHECK(run_cli("compare-cp --config " + (dir / "kmismatch.json").string()) == 2);
}

TEST_CASE("optimize: white-noise sweep matches the closed form and reruns are identical") {
    const auto dir = scratch_dir();
    write_file(dir / "opt.json",
               R"({"noise": {"control": {"sigma_w2": 1e-3}},
                   "theta_q": 3.141592653589793, "n_min": 1, "n_max": 20})");
    const auto out1 = dir / "opt_run1";
    const auto out2 = dir / "opt_run2";
    CHECK(run_cli("optimize --config " + (dir / "opt.json").string() + " --out " +
                  out1.string()) == 0);
    CHECK(run_cli("optimize --config " + (dir / "opt.json").string() + " --out " +
                  out2.string()) == 0);

    const auto csv = read_file(out1 / "sweep.csv");
    CHECK(csv == read_file(out2 / "sweep.csv"));
    CHECK(read_file(out1 / "sequences.json") == read_file(out2 / "sequences.json"));

    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "n,infidelity,share_a,share_b,share_c");
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        ++n;
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');
        CHECK(std::stoi(cell) == n);
        std::getline(cells, cell, ',');
        const double pi = std::numbers::pi;
        const double expect = 1e-3 * pi * pi / (4.0 * n);
        CHECK(std::stod(cell) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(n == 20);
}

TEST_CASE("simulate: zero noise gives zero MC columns; seeded reruns identical") {
    const auto dir = scratch_dir();
    write_file(dir / "sim.json",
               R"({"models": [{"label": "none", "noise": {"control": {"sigma_w2": 0.0}}}],
                   "theta_q": 3.141592653589793, "lengths": [1, 4],
                   "trajectories": 200, "seed": 7})");
    const auto out1 = dir / "sim_run1";
    const auto out2 = dir / "sim_run2";
    CHECK(run_cli("simulate --config " + (dir / "sim.json").string() + " --out " +
                  out1.string()) == 0);
    CHECK(run_cli("simulate --config " + (dir / "sim.json").string() + " --out " +
                  out2.string() + " --threads 2") == 0);
    const auto csv = read_file(out1 / "simulate.csv");
    CHECK(csv == read_file(out2 / "simulate.csv"));

    // A different seed changes the sampled columns only when noise is
    // present; with a real model the bytes must differ.
    write_file(dir / "sim_noisy.json",
               R"({"models": [{"label": "ar", "noise": {"control": {"ar": [0.5], "sigma_w2": 1e-3}}}],
                   "theta_q": 3.141592653589793, "lengths": [3],
                   "trajectories": 500, "seed": 7})");
    const auto outn1 = dir / "simn_run1";
    const auto outn2 = dir / "simn_run2";
    CHECK(run_cli("simulate --config " + (dir / "sim_noisy.json").string() + " --out " +
                  outn1.string()) == 0);
    CHECK(run_cli("simulate --config " + (dir / "sim_noisy.json").string() + " --out " +
                  outn2.string() + " --seed 8") == 0);
    CHECK(read_file(outn1 / "simulate.csv") != read_file(outn2 / "simulate.csv"));

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "label,n,analytic_infid,mc_infid,mc_se,second_order_bound");
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');
        CHECK(cell == "none");
        std::getline(cells, cell, ',');  // n
        std::getline(cells, cell, ',');  // analytic
        CHECK(std::stod(cell) == 0.0);
        std::getline(cells, cell, ',');  // mc
        CHECK(std::stod(cell) <= 1e-12);
    }
}

TEST_CASE("spectrum and filter-function emit the expected flat columns") {
    const auto dir = scratch_dir();
    write_file(dir / "spec.json", R"({"model": {"sigma_w2": 2.0}, "omega_count": 8})");
    const auto out = dir / "spec_out";
    CHECK(run_cli("spectrum --config " + (dir / "spec.json").string() + " --out " +
                  out.string()) == 0);
    std::istringstream lines(read_file(out / "spectrum.csv"));
    std::string line;
    std::getline(lines, line);
    CHECK(line == "omega,s");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        const auto comma = line.find(',');
        CHECK(std::stod(line.substr(comma + 1)) == doctest::Approx(2.0));
    }
    CHECK(rows == 8);

    write_file(dir / "ff.json",
               R"({"sequence": {"thetas": [0.785398163397448, 0.785398163397448,
                                            0.785398163397448, 0.785398163397449],
                   "target_angle": 3.141592653589793}, "omega_count": 4})");
    const auto ffout = dir / "ff_out";
    CHECK(run_cli("filter-function --config " + (dir / "ff.json").string() + " --out " +
                  ffout.string()) == 0);
    const auto ff = read_file(ffout / "filter_function.csv");
    CHECK(ff.substr(0, ff.find('\n')) == "omega,fxx2,fzy2");
}

TEST_CASE("compare-cp single point emits one row") {
    const auto dir = scratch_dir();
    write_file(dir / "cp.json",
               R"({"kind": "SK1", "theta_q": 3.141592653589793, "total_power": 1e-3,
                   "a1": [0.05], "b1": [0.05]})");
    const auto out = dir / "cp_out";
    CHECK(run_cli("compare-cp --config " + (dir / "cp.json").string() + " --out " +
                  out.string()) == 0);
    const auto csv = read_file(out / "comparison_sk1.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "a1,b1,infid_opt,infid_cp,diff,l2_to_dc");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 1);
}

TEST_CASE("sweep-robustness: eps 0 row reports exactly zero increase") {
    const auto dir = scratch_dir();
    write_file(dir / "rob.json",
               R"({"base_models": [{"a1": 0.3, "b1": 0.2}], "deviations": [0.0, 0.05],
                   "samples_per_eps": 10, "theta_q": 3.141592653589793, "n": 4,
                   "seed": 5})");
    const auto out = dir / "rob_out";
    CHECK(run_cli("sweep-robustness --config " + (dir / "rob.json").string() +
                  " --out " + out.string()) == 0);
    std::istringstream lines(read_file(out / "robustness.csv"));
    std::string line;
    std::getline(lines, line);
    CHECK(line == "a1,b1,eps,worst_rel_increase,mean_rel_increase,discarded");
    std::getline(lines, line);  // eps = 0 row
    std::istringstream cells(line);
    std::string cell;
    for (int i = 0; i < 4; ++i) std::getline(cells, cell, ',');
    CHECK(std::stod(cell) == 0.0);
}

TEST_CASE("optimize output chains into evaluate") {
    const auto dir = scratch_dir();
    write_file(dir / "chain_opt.json",
               R"({"noise": {"control": {"ar": [0.5], "sigma_w2": 1e-3}},
                   "theta_q": 3.141592653589793, "n_min": 3, "n_max": 3})");
    const auto out = dir / "chain_out";
    CHECK(run_cli("optimize --config " + (dir / "chain_opt.json").string() + " --out " +
                  out.string()) == 0);

    // Lift the emitted sequence into an evaluate config verbatim.
    const auto sequences = read_file(out / "sequences.json");
    const auto key = std::string("\"sequence\":");
    const auto pos = sequences.find(key);
    REQUIRE(pos != std::string::npos);
    auto depth = 0;
    std::size_t start = sequences.find('{', pos);
    std::size_t end = start;
    for (; end < sequences.size(); ++end) {
        if (sequences[end] == '{') ++depth;
        if (sequences[end] == '}' && --depth == 0) break;
    }
    const auto seq_json = sequences.substr(start, end - start + 1);
    write_file(dir / "chain_eval.json",
               std::string(R"({"sequence": )") + seq_json +
                   R"(, "noise": {"control": {"ar": [0.5], "sigma_w2": 1e-3}}})");
    const auto out2 = dir / "chain_eval_out";
    CHECK(run_cli("evaluate --config " + (dir / "chain_eval.json").string() + " --out " +
                  out2.string()) == 0);

    // The evaluated total equals the sweep's reported infidelity.
    const auto sweep_csv = read_file(out / "sweep.csv");
    const auto breakdown_csv = read_file(out2 / "breakdown.csv");
    const auto last_field = [](const std::string& csv) {
        const auto line = csv.substr(csv.find('\n') + 1);
        return std::stod(line.substr(line.rfind(',') + 1));
    };
    const auto second_field = [](const std::string& csv) {
        auto line = csv.substr(csv.find('\n') + 1);
        line = line.substr(line.find(',') + 1);
        return std::stod(line.substr(0, line.find(',')));
    };
    CHECK(last_field(breakdown_csv) ==
          doctest::Approx(second_field(sweep_csv)).epsilon(1e-12));
}

TEST_CASE("evaluate emits the breakdown row and report") {
    const auto dir = scratch_dir();
    write_file(dir / "eval.json",
               R"({"sequence": {"thetas": [1.5707963267948966, 1.5707963267948966],
                                "target_angle": 3.141592653589793},
                   "noise": {"control": {"ar": [0.5], "sigma_w2": 1e-3},
                             "dephasing_mean": 0.001}})");
    const auto out = dir / "eval_out";
    CHECK(run_cli("evaluate --config " + (dir / "eval.json").string() + " --out " +
                  out.string()) == 0);
    const auto csv = read_file(out / "breakdown.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "term_a,term_b,term_c,total");
    const auto report = read_file(out / "report.json");
    CHECK(report.find("\"first_order\"") != std::string::npos);
    CHECK(report.find("\"weak_noise_margin\"") != std::string::npos);
    CHECK(report.find("\"pass\"") != std::string::npos);
}
