#ifndef QOC_CONTROL_HPP
#define QOC_CONTROL_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qoc/arma.hpp"

// Pulse sequences, the first-order error vector, and the analytic A/B/C
// infidelity decomposition for single-axis control under multiplicative
// control noise and dephasing.

namespace qoc::control {

/// Piecewise-constant single-axis control: per-step angles theta_j with
/// sum theta_j = target_angle (minimum-gate-angle convention, no 2pi
/// wrapping).
class PulseSequence {
  public:
    PulseSequence(std::vector<double> thetas, double target_angle);

    static PulseSequence uniform(double target_angle, int n);

    const std::vector<double>& thetas() const { return thetas_; }
    double target_angle() const { return target_angle_; }
    int size() const { return static_cast<int>(thetas_.size()); }

    /// Accumulated angles Theta_j = theta_1 + ... + theta_j, j = 1..N.
    std::vector<double> accumulated_angles() const;

  private:
    std::vector<double> thetas_;
    double target_angle_;
};

/// Control noise process plus dephasing: coherent mean mu_J and optional
/// zero-mean stationary residual.
struct NoiseModel {
    arma::ArmaModel control;
    double dephasing_mean = 0.0;
    std::optional<arma::ArmaModel> dephasing_residual;
};

/// First-order Magnus components (a_x, a_y, a_z) for one noise realization.
struct ErrorVector {
    double ax = 0.0, ay = 0.0, az = 0.0;

    double norm_squared() const { return ax * ax + ay * ay + az * az; }
};

/// Terms A (coherent dephasing), B (correlated dephasing), C (control
/// noise); total = (A + B + C) / 4 equals <|a_1|^2>.
struct InfidelityBreakdown {
    double term_a = 0.0;
    double term_b = 0.0;
    double term_c = 0.0;
    double total = 0.0;
};

ErrorVector error_vector_first_order(const PulseSequence& seq,
                                     std::span<const double> eps_traj,
                                     std::span<const double> j_traj, double mu_j);

/// (1/4) [gamma(0) sum theta_j^2 + 2 sum_h gamma(h) sum_j theta_j theta_{j-h}],
/// the pure-control-noise objective.
double infidelity_control_only(const PulseSequence& seq,
                               const arma::AutocovarianceSeq& gammas);

InfidelityBreakdown infidelity_full(const PulseSequence& seq, const NoiseModel& noise);

/// Same decomposition with precomputed autocovariances (both to lag >= N-1);
/// pass an empty residual sequence when there is no residual dephasing.
InfidelityBreakdown infidelity_full(const PulseSequence& seq, double mu_j,
                                    const arma::AutocovarianceSeq& control_gammas,
                                    const arma::AutocovarianceSeq& residual_gammas);

/// Gradient of infidelity_full(...).total with respect to the step angles.
std::vector<double> infidelity_full_gradient(const PulseSequence& seq,
                                             const NoiseModel& noise);
std::vector<double> infidelity_full_gradient(
    const PulseSequence& seq, double mu_j,
    const arma::AutocovarianceSeq& control_gammas,
    const arma::AutocovarianceSeq& residual_gammas);

/// Independent verification path: assembles the explicit linear maps from
/// the noise vectors to the error vector and evaluates <|a_1|^2> by dense
/// matrix algebra.
double infidelity_quadratic_oracle(const PulseSequence& seq, const NoiseModel& noise);

/// F = (1/2) [1 + sum_{m=0}^{terms} (-1)^m 2^{2m}/(2m)! <|a_1|^2>^m].
double fidelity_series(double a1_sq_mean, int terms);

/// (|F_xx(w)|^2, |F_zy(w)|^2) with F_xx = sum_j theta_j e^{iwj} and
/// F_zy = sum_j sin(Theta_j) e^{iwj}.
std::vector<std::pair<double, double>> filter_functions(
    const PulseSequence& seq, std::span<const double> omegas);

struct WeakNoiseCheck {
    bool pass = false;
    double margin = 0.0;  ///< accumulated-error bound as a fraction of pi
};

/// Checks z * sqrt(gamma_eps(0) / K) * |theta_Q| < pi.
WeakNoiseCheck weak_noise_check(const NoiseModel& noise, const PulseSequence& seq,
                                double z);

}  // namespace qoc::control

#endif
