#include "qoc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qoc/errors.hpp"
#include "qoc/kernels.hpp"

namespace qoc::bounds {

double gamma_sum(const arma::AutocovarianceSeq& gammas, int n) {
    if (gammas.max_lag < n - 1)
        throw InsufficientLagsError("gamma_sum: need gamma up to lag n-1");
    std::vector<double> terms(static_cast<std::size_t>(n));
    for (int h = 0; h < n; ++h) {
        const double c = (h == 0) ? 1.0 : 2.0;
        terms[h] = c * (n - h) * gammas[h];
    }
    return kernels::active().sum(terms.data(), terms.size());
}

double second_order_bound(const GammaSums& g) {
    const double w2 = g.omega_max * g.omega_max;
    return (7.0 / 16.0) * g.gamma_jj * g.gamma_jj +
           (7.0 / 8.0) * w2 * g.gamma_ee * g.gamma_jj +
           (7.0 / 4.0) * w2 * g.gamma_ej * g.gamma_ej;
}

double second_to_first_ratio_control(double a1_sq_mean) {
    return a1_sq_mean / 3.0;
}

WeakNoiseReport weak_noise_regime_report(const control::NoiseModel& noise,
                                         const control::PulseSequence& seq) {
    const int n = seq.size();
    WeakNoiseReport report;
    report.accumulated_angle = control::weak_noise_check(noise, seq, 3.291);
    report.first_order = control::infidelity_full(seq, noise).total;

    GammaSums sums;
    sums.n = n;
    sums.gamma_ee = gamma_sum(arma::autocovariance(noise.control, n - 1), n);
    const double mu = noise.dephasing_mean;
    double gjj = mu * mu * static_cast<double>(n) * static_cast<double>(n);
    if (noise.dephasing_residual)
        gjj += gamma_sum(arma::autocovariance(*noise.dephasing_residual, n - 1), n);
    sums.gamma_jj = gjj;
    sums.gamma_ej = 0.0;

    double peak = 0.0;
    for (double t : seq.thetas()) peak = std::max(peak, std::abs(t));
    sums.omega_max = peak;
    report.second_order_bound = second_order_bound(sums);
    sums.omega_max = std::numbers::pi;
    report.second_order_bound_loose = second_order_bound(sums);

    report.ratio = second_to_first_ratio_control(report.first_order);
    report.pass = report.ratio < 0.1 && report.second_order_bound <= report.first_order;
    return report;
}

}  // namespace qoc::bounds
