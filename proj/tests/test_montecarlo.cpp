#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qoc/arma.hpp"
#include "qoc/bounds.hpp"
#include "qoc/composite.hpp"
#include "qoc/errors.hpp"
#include "qoc/montecarlo.hpp"
#include "qoc/rng.hpp"
#include "qoc/su2.hpp"

using namespace qoc;
using arma::ArmaModel;
using control::NoiseModel;
using control::PulseSequence;
using montecarlo::SimConfig;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("step unitary basics") {
    const auto id = montecarlo::step_unitary(0.0, 0.0, 0.0, 0.0);
    CHECK(std::abs(id.a - 1.0) < 1e-15);
    CHECK(std::abs(id.b) < 1e-15);

    // theta = pi about x: -i sigma_x.
    const auto xpi = montecarlo::step_unitary(kPi, 0.0, 0.0, 0.0);
    CHECK(std::abs(xpi.a) < 1e-15);
    CHECK(std::abs(xpi.b - std::complex<double>(0.0, -1.0)) < 1e-15);
    CHECK(std::abs(xpi.c - std::complex<double>(0.0, -1.0)) < 1e-15);

    rng::Xoshiro256pp gen(3);
    for (int i = 0; i < 200; ++i) {
        const auto u = montecarlo::step_unitary(3.0 * gen.normal(), 0.3 * gen.normal(),
                                                gen.normal(), 2.0 * kPi * gen.uniform());
        CHECK(su2::unitarity_defect(u) < 1e-12);
        const auto det = u.a * u.d - u.b * u.c;
        CHECK(std::abs(std::abs(det) - 1.0) < 1e-12);
    }
}

TEST_CASE("propagators stay unitary over 200 noisy steps") {
    rng::Xoshiro256pp gen(17);
    su2::Mat2c u = su2::identity();
    for (int j = 0; j < 200; ++j)
        u = montecarlo::step_unitary(0.3 * gen.normal(), 0.1 * gen.normal(),
                                     0.05 * gen.normal(), gen.uniform()) *
            u;
    CHECK(su2::unitarity_defect(u) < 1e-10);
}

TEST_CASE("zero noise simulates to zero infidelity") {
    const NoiseModel none{ArmaModel::white(0.0), 0.0, std::nullopt};
    const auto est = montecarlo::simulate_single_axis(PulseSequence::uniform(kPi, 7),
                                                      none, {100, 5, 0});
    CHECK(est.mean_infidelity <= 1e-12);
    CHECK(est.standard_error <= 1e-12);
    CHECK(est.num_trajectories == 100);
}

TEST_CASE("commuting case: per-trajectory fidelity equals cos^2(sum eps theta / 2)") {
    const int n = 8;
    std::vector<double> thetas{0.3, -0.1, 0.9, 0.4, 0.2, 0.5, 0.6, kPi - 2.8};
    const PulseSequence seq(thetas, kPi);
    const NoiseModel noise{ArmaModel({0.5}, {}, 1e-3), 0.0, std::nullopt};
    const SimConfig cfg{1000, 77, 40};

    const auto infid = montecarlo::per_trajectory_infidelities(seq, noise, cfg);
    for (std::int64_t i = 0; i < cfg.num_trajectories; ++i) {
        const auto eps = arma::sample_trajectory(
            noise.control, n, montecarlo::trajectory_seed(cfg.seed, i, 0), cfg.burn_in);
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += eps[j] * thetas[j];
        const double expect = 1.0 - std::pow(std::cos(0.5 * acc), 2);
        CHECK(std::abs(infid[i] - expect) < 1e-10);
    }
}

TEST_CASE("white-noise 25-step pi gate matches the closed form" * doctest::timeout(120)) {
    const NoiseModel noise{ArmaModel::white(1e-3), 0.0, std::nullopt};
    const auto est = montecarlo::simulate_single_axis(PulseSequence::uniform(kPi, 25),
                                                      noise, {10000, 2024, 0});
    const double predict = 1e-3 * kPi * kPi / 100.0;
    CHECK(std::abs(est.mean_infidelity - predict) < 3.0 * est.standard_error);
}

TEST_CASE("determinism: seeds pin results; thread count is irrelevant") {
    const NoiseModel noise{ArmaModel({0.5}, {}, 1e-3), 1e-3,
                           ArmaModel({}, {0.3}, 1e-3)};
    const auto seq = PulseSequence::uniform(kPi, 9);
    const SimConfig cfg{3000, 99, -1};

    const auto a = montecarlo::simulate_single_axis(seq, noise, cfg, 1);
    const auto b = montecarlo::simulate_single_axis(seq, noise, cfg, 1);
    const auto c = montecarlo::simulate_single_axis(seq, noise, cfg, 2);
    const auto d = montecarlo::simulate_single_axis(seq, noise, cfg, 7);
    CHECK(a.mean_infidelity == b.mean_infidelity);
    CHECK(a.mean_infidelity == c.mean_infidelity);
    CHECK(a.mean_infidelity == d.mean_infidelity);
    CHECK(a.standard_error == d.standard_error);

    const auto e = montecarlo::simulate_single_axis(seq, noise, {3000, 100, -1});
    CHECK(e.mean_infidelity != a.mean_infidelity);
}

TEST_CASE("single-axis theory vs simulation with dephasing" * doctest::timeout(120)) {
    // Coherent + residual dephasing on top of 1/f^2-like control noise.
    const NoiseModel noise{ArmaModel({0.25}, {}, 1e-3), std::sqrt(1e-5),
                           ArmaModel({0.75}, {}, 2e-6)};
    const auto seq = PulseSequence::uniform(kPi, 10);
    const auto breakdown = control::infidelity_full(seq, noise);
    const auto report = bounds::weak_noise_regime_report(noise, seq);
    const auto est =
        montecarlo::simulate_single_axis(seq, noise, {20000, 31337, 2000});
    CHECK(std::abs(est.mean_infidelity - breakdown.total) <
          3.0 * est.standard_error + report.second_order_bound);
}

TEST_CASE("composite simulation: zero noise and DC suppression hierarchy") {
    const auto sk1 = composite::make_sk1(kPi);
    const auto bb1 = composite::make_bb1(kPi);

    const auto none = montecarlo::simulate_composite(sk1, ArmaModel::white(0.0),
                                                     {200, 1, 0});
    CHECK(none.mean_infidelity <= 1e-12);

    const double delta = 0.05;
    const double naive = montecarlo::fixed_dc_infidelity(
        std::vector<double>{kPi}, std::vector<double>{0.0}, kPi, delta);
    const double sk1_dc = montecarlo::fixed_dc_infidelity(sk1, delta);
    const double bb1_dc = montecarlo::fixed_dc_infidelity(bb1, delta);
    CHECK(bb1_dc < sk1_dc);
    CHECK(sk1_dc < naive);
    // First-order cancellation drops SK1 well below the quadratic naive
    // error; BB1's second-order cancellation goes further.
    CHECK(naive == doctest::Approx(std::pow(std::sin(kPi * delta / 2.0), 2)).epsilon(1e-10));
    CHECK(sk1_dc < 0.1 * naive);
    CHECK(bb1_dc < 0.1 * sk1_dc);
}

TEST_CASE("composite white-noise simulation matches first-order theory" *
          doctest::timeout(120)) {
    const auto sk1 = composite::make_sk1(kPi);
    const ArmaModel white = ArmaModel::white(1e-5);
    const double analytic =
        composite::cp_infidelity(sk1, arma::autocovariance(white, 3));
    const auto est = montecarlo::simulate_composite(sk1, white, {20000, 7, 0});
    // Pure amplitude noise on a two-axis sequence no longer commutes, so
    // allow the generic second-order slack on top of the MC band.
    const double slack = analytic * analytic;
    CHECK(std::abs(est.mean_infidelity - analytic) <
          3.0 * est.standard_error + slack);
}

TEST_CASE("DC composite simulation draws one level per trajectory") {
    const auto bb1 = composite::make_bb1(kPi);
    const auto est = montecarlo::simulate_composite(bb1, arma::DcNoiseModel{0.0025},
                                                    {2000, 5, 0});
    // Second-order cancellation: mean infidelity far below the naive
    // delta^2-scale error.
    CHECK(est.mean_infidelity < 1e-4);
    CHECK(est.mean_infidelity > 0.0);

    const auto serial =
        montecarlo::simulate_composite(bb1, ArmaModel({0.4}, {}, 1e-4), {2000, 5, 50}, 1);
    const auto threaded =
        montecarlo::simulate_composite(bb1, ArmaModel({0.4}, {}, 1e-4), {2000, 5, 50}, 3);
    CHECK(serial.mean_infidelity == threaded.mean_infidelity);
    CHECK(serial.standard_error == threaded.standard_error);
}

TEST_CASE("robustness sweep" * doctest::timeout(120)) {
    const std::vector<ArmaModel> bases{ArmaModel({0.3}, {0.2}, 1e-3),
                                       ArmaModel({0.6}, {0.1}, 1e-3)};
    const std::vector<double> devs{0.0, 0.05, 0.1};
    const auto rows = montecarlo::robustness_sweep(bases, devs, 40, kPi, 6, 11);
    CHECK(rows.size() == 6);
    for (const auto& row : rows) {
        CHECK(row.worst_rel_increase >= 0.0);
        CHECK(std::isfinite(row.worst_rel_increase));
        if (row.deviation == 0.0) {
            CHECK(row.worst_rel_increase == 0.0);
            CHECK(row.discarded == 0);
        }
    }
    // Shared directions make the worst case non-decreasing in deviation.
    for (std::size_t b = 0; b < bases.size(); ++b) {
        const double w1 = rows[b * 3 + 1].worst_rel_increase;
        const double w2 = rows[b * 3 + 2].worst_rel_increase;
        CHECK(w1 <= w2 + 1e-12);
    }

    // A base on the stationarity boundary discards AR-increasing draws;
    // with a single sample some seed must hit the all-discarded error.
    const std::vector<ArmaModel> edge{ArmaModel({0.999}, {0.0}, 1e-3)};
    const std::vector<double> big{0.5};
    bool thrown = false;
    int discarded_somewhere = 0;
    for (std::uint64_t seed = 0; seed < 50 && !thrown; ++seed) {
        try {
            const auto r = montecarlo::robustness_sweep(edge, big, 1, kPi, 4, seed);
            discarded_somewhere += r[0].discarded;
        } catch (const AllPerturbationsNonStationaryError&) {
            thrown = true;
        }
    }
    CHECK(thrown);
    (void)discarded_somewhere;
}
