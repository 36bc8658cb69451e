#include "qoc/composite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qoc/errors.hpp"
#include "qoc/optimizer.hpp"
#include "qoc/su2.hpp"

namespace qoc::composite {

namespace {

constexpr double kPi = std::numbers::pi;

double corrective_phase(double theta_q) {
    const double ratio = theta_q / (4.0 * kPi);
    if (std::abs(ratio) > 1.0)
        throw PhaseUndefinedError("composite: |theta_Q| > 4pi, phase undefined");
    // arccos(-theta_Q / 4pi): the sign makes the 2pi segments cancel a
    // systematic amplitude error at first order, which is the defining
    // property of these sequences (and what the closed-form error vectors
    // below encode).
    return std::acos(-ratio);
}

/// First-order error generator sum_j P_{j-1}^dag Phi_j P_{j-1} with
/// Phi_j = eps_j theta_j / 2 (cos phi_j sigma_x + sin phi_j sigma_y),
/// evaluated with explicit matrices.
control::ErrorVector frame_sum_error_vector(const CompositePulse& cp,
                                            std::span<const double> eps) {
    su2::Mat2c p = su2::identity();
    su2::Mat2c phi_total{{0, 0}, {0, 0}, {0, 0}, {0, 0}};
    for (int j = 0; j < cp.segments(); ++j) {
        const double cphi = std::cos(cp.phis[j]);
        const double sphi = std::sin(cp.phis[j]);
        const double w = 0.5 * eps[j] * cp.thetas[j];
        // w (cos phi sigma_x + sin phi sigma_y)
        const su2::Mat2c gen{{0, 0},
                             {w * cphi, -w * sphi},
                             {w * cphi, w * sphi},
                             {0, 0}};
        const su2::Mat2c term = p.adjoint() * gen * p;
        phi_total.a += term.a;
        phi_total.b += term.b;
        phi_total.c += term.c;
        phi_total.d += term.d;
        p = su2::pauli_rotation(cp.thetas[j] * cphi, cp.thetas[j] * sphi, 0.0) * p;
    }
    control::ErrorVector ev;
    ev.ax = 0.5 * (phi_total.b + phi_total.c).real();
    ev.ay = 0.5 * (std::complex<double>(0, 1) * (phi_total.b - phi_total.c)).real();
    ev.az = 0.5 * (phi_total.a - phi_total.d).real();
    return ev;
}

}  // namespace

CompositePulse make_sk1(double theta_q) {
    const double phi_c = corrective_phase(theta_q);
    CompositePulse cp;
    cp.kind = CpKind::sk1;
    cp.target_angle = theta_q;
    cp.thetas = {theta_q, 2.0 * kPi, 2.0 * kPi};
    cp.phis = {0.0, -phi_c, phi_c};
    return cp;
}

CompositePulse make_bb1(double theta_q) {
    const double phi_c = corrective_phase(theta_q);
    CompositePulse cp;
    cp.kind = CpKind::bb1;
    cp.target_angle = theta_q;
    cp.thetas = {theta_q, kPi, 2.0 * kPi, kPi};
    cp.phis = {0.0, phi_c, 3.0 * phi_c, phi_c};
    return cp;
}

control::ErrorVector cp_error_vector(const CompositePulse& cp,
                                     std::span<const double> eps) {
    if (static_cast<int>(eps.size()) != cp.segments())
        throw LengthMismatchError("cp_error_vector: trajectory length != segments");

    const double tq = cp.target_angle;
    const double root = std::sqrt(16.0 * kPi * kPi - tq * tq);
    control::ErrorVector ev;
    if (cp.kind == CpKind::sk1) {
        ev.ax = 0.25 * tq * (2.0 * eps[0] - eps[1] - eps[2]);
        ev.ay = 0.25 * (eps[2] - eps[1]) * std::cos(tq) * root;
        ev.az = -0.25 * (eps[2] - eps[1]) * std::sin(tq) * root;
    } else {
        ev.ax = 0.125 * tq * (4.0 * eps[0] - eps[1] - 2.0 * eps[2] - eps[3]);
        ev.ay = 0.125 * (eps[1] - 2.0 * eps[2] + eps[3]) * std::cos(tq) * root;
        ev.az = -0.125 * (eps[1] - 2.0 * eps[2] + eps[3]) * std::sin(tq) * root;
    }

    const auto numeric = frame_sum_error_vector(cp, eps);
    double scale = 1.0;
    for (double e : eps) scale = std::max(scale, std::abs(e));
    const double tol = 1e-10 * scale;
    if (std::abs(numeric.ax - ev.ax) > tol || std::abs(numeric.ay - ev.ay) > tol ||
        std::abs(numeric.az - ev.az) > tol)
        throw std::logic_error(
            "cp_error_vector: closed form disagrees with the frame-transformed sum");
    return ev;
}

double cp_infidelity(const CompositePulse& cp, const arma::AutocovarianceSeq& gammas) {
    if (gammas.max_lag < 3)
        throw InsufficientLagsError("cp_infidelity: need gamma up to lag 3");
    const double tq = cp.target_angle;
    const double g0 = gammas[0], g1 = gammas[1], g2 = gammas[2], g3 = gammas[3];
    if (cp.kind == CpKind::sk1) {
        return 2.0 * kPi * kPi * (g0 - g1) + 0.25 * tq * tq * (g0 - g2);
    }
    return 0.5 * kPi * kPi * (3.0 * (g0 - g1) - (g1 - g2)) +
           0.125 * tq * tq * (2.0 * (g0 - g2) + (g1 - g3));
}

std::vector<ComparisonRow> comparison_map(std::span<const double> a1_values,
                                          std::span<const double> b1_values,
                                          CpKind kind, double theta_q,
                                          double total_power) {
    const int k = (kind == CpKind::sk1) ? 3 : 4;
    std::vector<ComparisonRow> rows;
    rows.reserve(a1_values.size() * b1_values.size());
    const arma::DcNoiseModel dc{total_power};

    for (double a1 : a1_values) {
        for (double b1 : b1_values) {
            const arma::ArmaModel raw({a1}, {b1}, 1.0);
            const auto model = arma::set_total_power(raw, total_power);
            const auto gammas = arma::autocovariance(model, std::max(k - 1, 3));

            const optimizer::QpProblem qp{arma::covariance_matrix(gammas, k), theta_q};
            const auto opt_seq = optimizer::solve_qp(qp);
            const double infid_opt =
                control::infidelity_control_only(opt_seq, gammas);

            const auto cp = (kind == CpKind::sk1) ? make_sk1(theta_q)
                                                  : make_bb1(theta_q);
            const double infid_cp = cp_infidelity(cp, gammas);

            ComparisonRow row;
            row.a1 = a1;
            row.b1 = b1;
            row.infid_optimal = infid_opt;
            row.infid_cp = infid_cp;
            row.difference = infid_opt - infid_cp;
            row.l2_to_dc =
                model_distance_l2(gammas, arma::autocovariance(dc, k - 1), k);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace qoc::composite
