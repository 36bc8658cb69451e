#ifndef QOC_COMPOSITE_HPP
#define QOC_COMPOSITE_HPP

#include <span>
#include <vector>

#include "qoc/arma.hpp"
#include "qoc/control.hpp"

// SK1/BB1 composite pulse sequences, their analytic first-order error
// vectors and infidelities under ARMA amplitude noise, and the
// optimal-vs-composite comparison map.

namespace qoc::composite {

enum class CpKind { sk1, bb1 };

/// Two-axis segment prescription: angles theta_j with per-segment drive
/// phases phi_j, targeting R_X(target_angle).
struct CompositePulse {
    std::vector<double> thetas;
    std::vector<double> phis;
    CpKind kind = CpKind::sk1;
    double target_angle = 0.0;

    int segments() const { return static_cast<int>(thetas.size()); }
};

/// theta = (theta_Q, 2pi, 2pi), phi = (0, -phi_c, +phi_c),
/// phi_c = arccos(theta_Q / 4pi).
CompositePulse make_sk1(double theta_q);

/// theta = (theta_Q, pi, 2pi, pi), phi = (0, phi_c, 3 phi_c, phi_c).
CompositePulse make_bb1(double theta_q);

/// Closed-form first-order error vector for one amplitude-noise
/// realization; cross-checked internally against the frame-transformed
/// sum of per-segment error generators.
control::ErrorVector cp_error_vector(const CompositePulse& cp,
                                     std::span<const double> eps_traj);

/// First-order infidelity under stationary amplitude noise; evaluated on
/// autocovariance differences so the DC limit is an exact zero.
double cp_infidelity(const CompositePulse& cp, const arma::AutocovarianceSeq& gammas);

struct ComparisonRow {
    double a1 = 0.0;
    double b1 = 0.0;
    double infid_optimal = 0.0;
    double infid_cp = 0.0;
    double difference = 0.0;  ///< optimal - composite
    double l2_to_dc = 0.0;
};

/// Sweep of ARMA(1,1) models at fixed total power: per grid point, the
/// equal-length single-axis optimum (K = 3 for SK1, K = 4 for BB1) against
/// the composite sequence, plus the L2 distance to the DC model.
std::vector<ComparisonRow> comparison_map(std::span<const double> a1_values,
                                          std::span<const double> b1_values,
                                          CpKind kind, double theta_q,
                                          double total_power);

}  // namespace qoc::composite

#endif
