#ifndef QOC_BOUNDS_HPP
#define QOC_BOUNDS_HPP

#include "qoc/arma.hpp"
#include "qoc/control.hpp"

// Closed-form bounds on the second-order error contributions and
// weak-noise-regime diagnostics.

namespace qoc::bounds {

/// Windowed autocovariance grand sums Gamma = sum_h c(h) (N-h) gamma(h),
/// c(0) = 1 and c(h != 0) = 2, for the control (ee), dephasing (jj), and
/// cross (ej) processes, plus the peak control amplitude.
struct GammaSums {
    double gamma_ee = 0.0;
    double gamma_jj = 0.0;
    double gamma_ej = 0.0;
    double omega_max = 0.0;
    int n = 0;
};

/// sum_{h=0}^{n-1} c(h) (n-h) gamma(h); equals the grand sum of the n x n
/// covariance matrix.
double gamma_sum(const arma::AutocovarianceSeq& gammas, int n);

/// (7/16) Gamma_JJ^2 + (7/8) Omega_max^2 Gamma_ee Gamma_JJ
///   + (7/4) (Omega_max Gamma_eJ)^2.
double second_order_bound(const GammaSums& g);

/// <|a_1|^2> / 3, the ratio of the second to first order term of the
/// fidelity power series for pure control noise.
double second_to_first_ratio_control(double a1_sq_mean);

struct WeakNoiseReport {
    control::WeakNoiseCheck accumulated_angle;  ///< z = 3.291 bound check
    double first_order = 0.0;
    double second_order_bound = 0.0;        ///< Omega_max = max |theta_j|
    double second_order_bound_loose = 0.0;  ///< Omega_max = pi cap
    double ratio = 0.0;
    bool pass = false;  ///< ratio < 0.1 and bound <= first order
};

/// Gamma_JJ uses the full dephasing second moment, mu_J^2 + gamma_res(h);
/// Gamma_eJ is zero (independent processes).
WeakNoiseReport weak_noise_regime_report(const control::NoiseModel& noise,
                                         const control::PulseSequence& seq);

}  // namespace qoc::bounds

#endif
