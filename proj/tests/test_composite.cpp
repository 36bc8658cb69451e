#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qoc/arma.hpp"
#include "qoc/composite.hpp"
#include "qoc/errors.hpp"
#include "qoc/rng.hpp"
#include "qoc/su2.hpp"

using namespace qoc;
using arma::ArmaModel;
using composite::CompositePulse;
using composite::CpKind;

namespace {

constexpr double kPi = std::numbers::pi;

su2::Mat2c compose_ideal(const CompositePulse& cp) {
    su2::Mat2c u = su2::identity();
    for (int j = 0; j < cp.segments(); ++j) {
        u = su2::pauli_rotation(cp.thetas[j] * std::cos(cp.phis[j]),
                                cp.thetas[j] * std::sin(cp.phis[j]), 0.0) *
            u;
    }
    return u;
}

}  // namespace

TEST_CASE("SK1 prescription") {
    const auto cp = composite::make_sk1(kPi);
    CHECK(cp.segments() == 3);
    CHECK(cp.thetas[0] == doctest::Approx(kPi));
    CHECK(cp.thetas[1] == doctest::Approx(2.0 * kPi));
    CHECK(cp.thetas[2] == doctest::Approx(2.0 * kPi));
    // phi_c = arccos(-1/4); the minus sign is required for first-order
    // cancellation of systematic amplitude errors.
    CHECK(cp.phis[1] == doctest::Approx(-1.823477).epsilon(1e-6));
    CHECK(cp.phis[2] == doctest::Approx(1.823477).epsilon(1e-6));

    CHECK(composite::make_sk1(0.0).phis[2] == doctest::Approx(kPi / 2));
    CHECK_THROWS_AS(composite::make_sk1(4.0 * kPi + 0.1), PhaseUndefinedError);
}

TEST_CASE("BB1 prescription") {
    const auto cp = composite::make_bb1(kPi);
    CHECK(cp.segments() == 4);
    CHECK(cp.thetas == std::vector<double>{kPi, kPi, 2.0 * kPi, kPi});
    CHECK(cp.phis[0] == 0.0);
    CHECK(cp.phis[1] == doctest::Approx(1.823477).epsilon(1e-6));
    CHECK(cp.phis[2] == doctest::Approx(5.470430).epsilon(1e-6));
    CHECK(cp.phis[3] == doctest::Approx(1.823477).epsilon(1e-6));
}

TEST_CASE("ideal composite gates compose to R_X(theta_Q)") {
    for (double tq : {0.0, 0.4, kPi / 2, kPi, 2.0, -1.2}) {
        for (bool bb1 : {false, true}) {
            const auto cp = bb1 ? composite::make_bb1(tq) : composite::make_sk1(tq);
            const double fid = su2::gate_fidelity(su2::rx(tq), compose_ideal(cp));
            CHECK(1.0 - fid < 1e-12);
        }
    }
}

TEST_CASE("composite error vectors") {
    const auto sk1 = composite::make_sk1(kPi);
    const std::vector<double> zeros(3, 0.0);
    const auto ev0 = composite::cp_error_vector(sk1, zeros);
    CHECK(ev0.ax == 0.0);
    CHECK(ev0.ay == 0.0);
    CHECK(ev0.az == 0.0);

    // DC errors cancel at first order.
    const std::vector<double> dc(3, 0.037);
    const auto evdc = composite::cp_error_vector(sk1, dc);
    CHECK(evdc.ax == doctest::Approx(0.0));
    CHECK(evdc.ay == doctest::Approx(0.0));
    CHECK(evdc.az == doctest::Approx(0.0));

    const std::vector<double> first{1.0, 0.0, 0.0};
    const auto ev1 = composite::cp_error_vector(sk1, first);
    CHECK(ev1.ax == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(ev1.ay == doctest::Approx(0.0));
    CHECK(ev1.az == doctest::Approx(0.0));

    const auto bb1 = composite::make_bb1(kPi);
    const std::vector<double> dc4(4, -0.02);
    const auto evb = composite::cp_error_vector(bb1, dc4);
    CHECK(evb.ax == doctest::Approx(0.0));
    CHECK(evb.ay == doctest::Approx(0.0));
    CHECK(evb.az == doctest::Approx(0.0));

    CHECK_THROWS_AS(composite::cp_error_vector(sk1, dc4), LengthMismatchError);
}

TEST_CASE("closed form equals the frame-transformed sum on random inputs") {
    // cp_error_vector cross-checks internally and throws on disagreement.
    rng::Xoshiro256pp gen(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const double tq = 4.0 * kPi * (gen.uniform() - 0.5);
        const auto cp = (trial % 2) ? composite::make_bb1(tq) : composite::make_sk1(tq);
        std::vector<double> eps(cp.segments());
        for (auto& e : eps) e = 0.3 * gen.normal();
        CHECK_NOTHROW(composite::cp_error_vector(cp, eps));
    }
}

TEST_CASE("composite infidelity closed forms") {
    // DC model annihilates both sequences exactly.
    const auto dc = arma::autocovariance(arma::DcNoiseModel{0.123}, 3);
    CHECK(composite::cp_infidelity(composite::make_sk1(kPi), dc) == 0.0);
    CHECK(composite::cp_infidelity(composite::make_bb1(kPi), dc) == 0.0);
    CHECK(composite::cp_infidelity(composite::make_sk1(1.1), dc) == 0.0);

    // White noise, SK1, theta_Q = pi: 2 pi^2 s2 + pi^2 s2 / 4.
    const double s2 = 3e-4;
    const auto white = arma::autocovariance(ArmaModel::white(s2), 3);
    CHECK(composite::cp_infidelity(composite::make_sk1(kPi), white) ==
          doctest::Approx(2.0 * kPi * kPi * s2 + 0.25 * kPi * kPi * s2).epsilon(1e-12));

    const auto none = arma::autocovariance(ArmaModel::white(0.0), 3);
    CHECK(composite::cp_infidelity(composite::make_bb1(kPi), none) == 0.0);

    const auto short_g = arma::autocovariance(ArmaModel::white(s2), 2);
    CHECK_THROWS_AS(composite::cp_infidelity(composite::make_sk1(kPi), short_g),
                    InsufficientLagsError);
}

TEST_CASE("composite infidelity matches the Monte Carlo mean of |a_1|^2" *
          doctest::timeout(120)) {
    const std::vector<ArmaModel> models{
        ArmaModel::white(1e-3),
        ArmaModel({0.5}, {}, 1e-3),
        ArmaModel({}, {0.5}, 1e-3),
    };
    for (const auto& model : models) {
        for (bool bb1 : {false, true}) {
            const auto cp =
                bb1 ? composite::make_bb1(kPi) : composite::make_sk1(kPi);
            const auto gammas = arma::autocovariance(model, 3);
            const double analytic = composite::cp_infidelity(cp, gammas);

            const std::size_t trials = 100000;
            double mean = 0.0, m2 = 0.0;
            for (std::size_t i = 0; i < trials; ++i) {
                const auto eps = arma::sample_trajectory(
                    model, cp.segments(), rng::mix_seed(55, i, 0), 60);
                const double v = composite::cp_error_vector(cp, eps).norm_squared();
                const double delta = v - mean;
                mean += delta / static_cast<double>(i + 1);
                m2 += delta * (v - mean);
            }
            const double se = std::sqrt(m2 / static_cast<double>(trials - 1) /
                                        static_cast<double>(trials));
            CHECK(std::abs(mean - analytic) < 3.0 * se);
        }
    }
}

TEST_CASE("comparison map sign structure" * doctest::timeout(120)) {
    const std::vector<double> a1{0.05, 0.5, 0.95};
    const std::vector<double> b1{0.05, 0.5, 0.9};
    for (CpKind kind : {CpKind::sk1, CpKind::bb1}) {
        const auto rows = composite::comparison_map(a1, b1, kind, kPi, 1e-3);
        CHECK(rows.size() == 9);
        for (const auto& row : rows) {
            CHECK(row.infid_optimal >= 0.0);
            CHECK(row.infid_cp >= 0.0);
            CHECK(row.l2_to_dc >= 0.0);
            CHECK(row.difference ==
                  doctest::Approx(row.infid_optimal - row.infid_cp).epsilon(1e-12));
        }
        // Near-white corner: the single-axis optimum wins.
        CHECK(rows.front().difference < 0.0);
        // Most correlated corner: the composite sequence wins.
        CHECK(rows.back().difference > 0.0);
    }
}
