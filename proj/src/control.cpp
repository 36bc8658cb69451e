#include "qoc/control.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "qoc/errors.hpp"
#include "qoc/kernels.hpp"

namespace qoc::control {

PulseSequence::PulseSequence(std::vector<double> thetas, double target_angle)
    : thetas_(std::move(thetas)), target_angle_(target_angle) {
    if (thetas_.empty()) throw std::invalid_argument("PulseSequence: N >= 1 required");
    const double sum =
        kernels::active().sum(thetas_.data(), thetas_.size());
    if (std::abs(sum - target_angle_) > 1e-9)
        throw std::invalid_argument("PulseSequence: angles must sum to target_angle");
}

PulseSequence PulseSequence::uniform(double target_angle, int n) {
    if (n < 1) throw std::invalid_argument("PulseSequence::uniform: n >= 1 required");
    std::vector<double> thetas(static_cast<std::size_t>(n), target_angle / n);
    // Pin the sum exactly despite division rounding.
    double acc = 0.0;
    for (int j = 0; j < n - 1; ++j) acc += thetas[j];
    thetas[n - 1] = target_angle - acc;
    return {std::move(thetas), target_angle};
}

std::vector<double> PulseSequence::accumulated_angles() const {
    std::vector<double> acc(thetas_.size());
    double run = 0.0;
    for (std::size_t j = 0; j < thetas_.size(); ++j) {
        run += thetas_[j];
        acc[j] = run;
    }
    return acc;
}

ErrorVector error_vector_first_order(const PulseSequence& seq,
                                     std::span<const double> eps_traj,
                                     std::span<const double> j_traj, double mu_j) {
    const std::size_t n = seq.thetas().size();
    if (eps_traj.size() != n || j_traj.size() != n)
        throw LengthMismatchError("error_vector_first_order: trajectory length != N");
    const auto acc = seq.accumulated_angles();
    ErrorVector ev;
    for (std::size_t j = 0; j < n; ++j) {
        const double jz = 0.5 * (mu_j + j_traj[j]);
        ev.ax += 0.5 * eps_traj[j] * seq.thetas()[j];
        ev.ay += jz * std::sin(acc[j]);
        ev.az += jz * std::cos(acc[j]);
    }
    return ev;
}

double infidelity_control_only(const PulseSequence& seq,
                               const arma::AutocovarianceSeq& gammas) {
    const int n = seq.size();
    if (gammas.max_lag < n - 1)
        throw InsufficientLagsError("infidelity_control_only: need gamma to lag N-1");
    const double quad = kernels::active().toeplitz_quadform(
        seq.thetas().data(), static_cast<std::size_t>(n), gammas.gammas.data());
    return 0.25 * quad;
}

namespace {

arma::AutocovarianceSeq residual_gammas(const NoiseModel& noise, int max_lag) {
    if (noise.dephasing_residual)
        return arma::autocovariance(*noise.dephasing_residual, max_lag);
    arma::AutocovarianceSeq zero;
    zero.max_lag = max_lag;
    zero.gammas.assign(static_cast<std::size_t>(max_lag) + 1, 0.0);
    return zero;
}

void require_lags(const arma::AutocovarianceSeq& g, int n, const char* who) {
    if (!g.gammas.empty() && g.max_lag < n - 1) throw InsufficientLagsError(who);
}

}  // namespace

InfidelityBreakdown infidelity_full(const PulseSequence& seq, double mu_j,
                                    const arma::AutocovarianceSeq& control_gammas,
                                    const arma::AutocovarianceSeq& residual_gammas) {
    const int n = seq.size();
    require_lags(control_gammas, n, "infidelity_full: control gammas too short");
    require_lags(residual_gammas, n, "infidelity_full: residual gammas too short");
    const auto acc = seq.accumulated_angles();
    const bool has_res = !residual_gammas.gammas.empty();

    InfidelityBreakdown out;

    // A = mu^2 |sum_j e^{i Theta_j}|^2, the squared coherent phasor sum.
    double sc = 0.0, ss = 0.0;
    for (int j = 0; j < n; ++j) {
        sc += std::cos(acc[j]);
        ss += std::sin(acc[j]);
    }
    out.term_a = mu_j * mu_j * (sc * sc + ss * ss);

    // B = N gamma(0) + 2 sum_h gamma(h) sum_{i>h} cos(Theta_i - Theta_{i-h}).
    double b = has_res ? n * residual_gammas[0] : 0.0;
    if (has_res) {
        for (int h = 1; h <= n - 1; ++h) {
            if (residual_gammas[h] == 0.0) continue;
            double cos_sum = 0.0;
            for (int i = h; i < n; ++i) cos_sum += std::cos(acc[i] - acc[i - h]);
            b += 2.0 * residual_gammas[h] * cos_sum;
        }
    }
    out.term_b = b;

    out.term_c = control_gammas.gammas.empty()
                     ? 0.0
                     : kernels::active().toeplitz_quadform(
                           seq.thetas().data(), static_cast<std::size_t>(n),
                           control_gammas.gammas.data());
    if (out.term_a < 0.0) out.term_a = 0.0;
    if (out.term_c < 0.0) out.term_c = 0.0;

    out.total = 0.25 * (out.term_a + out.term_b + out.term_c);
    return out;
}

InfidelityBreakdown infidelity_full(const PulseSequence& seq, const NoiseModel& noise) {
    const int n = seq.size();
    return infidelity_full(seq, noise.dephasing_mean,
                           arma::autocovariance(noise.control, n - 1),
                           residual_gammas(noise, n - 1));
}

std::vector<double> infidelity_full_gradient(
    const PulseSequence& seq, double mu_j,
    const arma::AutocovarianceSeq& control_gammas,
    const arma::AutocovarianceSeq& residual_gammas) {
    const int n = seq.size();
    require_lags(control_gammas, n, "infidelity_full_gradient: control gammas too short");
    require_lags(residual_gammas, n, "infidelity_full_gradient: residual gammas too short");
    const auto acc = seq.accumulated_angles();
    const auto& theta = seq.thetas();
    const bool has_res = !residual_gammas.gammas.empty();

    std::vector<double> grad(static_cast<std::size_t>(n), 0.0);

    // dC/dtheta_k = 2 (A_eps theta)_k.
    if (!control_gammas.gammas.empty()) {
        for (int k = 0; k < n; ++k) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += control_gammas[std::abs(k - j)] * theta[j];
            grad[k] += 2.0 * row;
        }
    }

    // dA/dtheta_k = 2 mu^2 (S_s T_c(k) - S_c T_s(k)) with suffix sums
    // T_c(k) = sum_{j>=k} cos Theta_j.
    if (mu_j != 0.0) {
        double sc = 0.0, ss = 0.0;
        for (int j = 0; j < n; ++j) {
            sc += std::cos(acc[j]);
            ss += std::sin(acc[j]);
        }
        double tc = 0.0, ts = 0.0;
        for (int k = n - 1; k >= 0; --k) {
            tc += std::cos(acc[k]);
            ts += std::sin(acc[k]);
            grad[k] += 2.0 * mu_j * mu_j * (ss * tc - sc * ts);
        }
    }

    // dB/dtheta_k: each (h, i) pair contributes -2 gamma(h) sin(DTheta)
    // to every k in (i-h, i]; accumulated with a difference array.
    if (has_res) {
        std::vector<double> diff(static_cast<std::size_t>(n) + 1, 0.0);
        for (int h = 1; h <= n - 1; ++h) {
            if (residual_gammas[h] == 0.0) continue;
            for (int i = h; i < n; ++i) {
                const double v = -2.0 * residual_gammas[h] * std::sin(acc[i] - acc[i - h]);
                diff[i - h + 1] += v;
                diff[i + 1] -= v;
            }
        }
        double run = 0.0;
        for (int k = 0; k < n; ++k) {
            run += diff[k];
            grad[k] += run;
        }
    }

    for (auto& g : grad) g *= 0.25;
    return grad;
}

std::vector<double> infidelity_full_gradient(const PulseSequence& seq,
                                             const NoiseModel& noise) {
    const int n = seq.size();
    return infidelity_full_gradient(seq, noise.dephasing_mean,
                                    arma::autocovariance(noise.control, n - 1),
                                    residual_gammas(noise, n - 1));
}

double infidelity_quadratic_oracle(const PulseSequence& seq, const NoiseModel& noise) {
    const int n = seq.size();
    const auto acc = seq.accumulated_angles();
    const auto& theta = seq.thetas();

    const auto cov_eps =
        arma::covariance_matrix(arma::autocovariance(noise.control, n - 1), n);
    arma::CovarianceMatrix cov_res(n, n);
    if (noise.dephasing_residual)
        cov_res = arma::covariance_matrix(
            arma::autocovariance(*noise.dephasing_residual, n - 1), n);

    std::vector<double> mx(n), my(n), mz(n);
    for (int j = 0; j < n; ++j) {
        mx[j] = 0.5 * theta[j];
        my[j] = 0.5 * std::sin(acc[j]);
        mz[j] = 0.5 * std::cos(acc[j]);
    }

    const auto quad = [n](const std::vector<double>& v, const arma::CovarianceMatrix& m) {
        double acc2 = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc2 += v[i] * m(i, j) * v[j];
        return acc2;
    };
    const auto dot_ones = [n](const std::vector<double>& v) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += v[i];
        return s;
    };

    const double mu = noise.dephasing_mean;
    double total = quad(mx, cov_eps);
    total += quad(my, cov_res) + quad(mz, cov_res);
    const double mean_y = mu * dot_ones(my);
    const double mean_z = mu * dot_ones(mz);
    total += mean_y * mean_y + mean_z * mean_z;
    return total;
}

double fidelity_series(double a1_sq_mean, int terms) {
    if (a1_sq_mean < 0.0)
        throw std::invalid_argument("fidelity_series: a1_sq_mean < 0");
    if (terms < 1) throw std::invalid_argument("fidelity_series: terms >= 1 required");
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m <= terms; ++m) {
        term *= -4.0 * a1_sq_mean / (2.0 * m * (2.0 * m - 1.0));
        sum += term;
    }
    return 0.5 * (1.0 + sum);
}

std::vector<std::pair<double, double>> filter_functions(
    const PulseSequence& seq, std::span<const double> omegas) {
    using namespace std::complex_literals;
    const auto acc = seq.accumulated_angles();
    const auto& theta = seq.thetas();
    const int n = seq.size();

    std::vector<std::pair<double, double>> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        std::complex<double> fxx = 0.0, fzy = 0.0;
        for (int j = 0; j < n; ++j) {
            const auto phase = std::exp(1i * (w * (j + 1)));
            fxx += theta[j] * phase;
            fzy += std::sin(acc[j]) * phase;
        }
        out.emplace_back(std::norm(fxx), std::norm(fzy));
    }
    return out;
}

WeakNoiseCheck weak_noise_check(const NoiseModel& noise, const PulseSequence& seq,
                                double z) {
    if (!(z > 0.0)) throw std::invalid_argument("weak_noise_check: z must be > 0");
    const double gamma0 = arma::autocovariance(noise.control, 0)[0];
    const double sigma = std::sqrt(gamma0);
    const double k = static_cast<double>(seq.size());
    // Control noise is zero-mean, so the +/- z band is symmetric.
    const double band = z * sigma / std::sqrt(k);
    const double left = band * std::abs(seq.target_angle());
    WeakNoiseCheck out;
    out.margin = left / std::numbers::pi;
    out.pass = out.margin < 1.0;
    return out;
}

}  // namespace qoc::control
