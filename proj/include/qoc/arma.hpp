#ifndef QOC_ARMA_HPP
#define QOC_ARMA_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "qoc/linalg.hpp"
#include "qoc/rng.hpp"

// Wide-sense-stationary ARMA(p,q) noise processes:
//   beta_t = sum_i a_i beta_{t-i} + w_t + sum_j b_j w_{t-j},
// w_t ~ N(0, sigma_w^2). Exact autocovariances, power spectra, Toeplitz
// covariance matrices, sampling, and model distances.

namespace qoc::arma {

/// True iff every root of z^p - a_1 z^{p-1} - ... - a_p lies strictly
/// inside the unit circle (checked through the reflection-coefficient
/// recursion, no polynomial root finding needed).
bool is_stationary_ar(std::span<const double> ar_coeffs);

class ArmaModel {
  public:
    /// Throws NonStationaryError when the AR part is not stationary and
    /// std::invalid_argument when sigma_w2 < 0.
    ArmaModel(std::vector<double> ar_coeffs, std::vector<double> ma_coeffs,
              double white_noise_variance);

    static ArmaModel white(double sigma_w2) { return {{}, {}, sigma_w2}; }

    const std::vector<double>& ar() const { return ar_; }
    const std::vector<double>& ma() const { return ma_; }
    double sigma_w2() const { return sigma_w2_; }
    int p() const { return static_cast<int>(ar_.size()); }
    int q() const { return static_cast<int>(ma_.size()); }

  private:
    std::vector<double> ar_;
    std::vector<double> ma_;
    double sigma_w2_;
};

/// Perfectly correlated (coherent) amplitude-error model: gamma(h) = sigma^2
/// at every lag.
struct DcNoiseModel {
    double variance = 0.0;
};

/// Exact stationary autocovariances gamma(0..max_lag).
struct AutocovarianceSeq {
    std::vector<double> gammas;
    int max_lag = 0;

    double operator[](int h) const { return gammas[static_cast<std::size_t>(h)]; }
};

using CovarianceMatrix = qoc::linalg::Matrix;

/// Extended Yule-Walker solve for lags 0..p, then the AR recursion for
/// larger lags (Brockwell & Davis style).
AutocovarianceSeq autocovariance(const ArmaModel& model, int max_lag);
AutocovarianceSeq autocovariance(const DcNoiseModel& model, int max_lag);

/// S(omega) = sigma_w^2 |1 + sum_j b_j e^{-ij w}|^2 / |1 - sum_k a_k e^{-ik w}|^2.
/// The minus sign in the denominator matches the recursion convention.
double power_spectrum(const ArmaModel& model, double omega);

int default_burn_in(const ArmaModel& model);  // 10 * (p + q + 1)

/// Streaming Gaussian-driven ARMA recursion initialized at zero.
class ArmaSampler {
  public:
    ArmaSampler(const ArmaModel& model, std::uint64_t seed);
    void warm_up(int burn_in);
    double next();

  private:
    const std::vector<double> ar_;
    const std::vector<double> ma_;
    double sigma_w_;
    rng::Xoshiro256pp gen_;
    std::vector<double> beta_hist_;  // ring buffers, most recent first
    std::vector<double> w_hist_;
    std::size_t pos_b_ = 0;
    std::size_t pos_w_ = 0;
};

/// Deterministic for fixed (model, length, seed, burn_in).
std::vector<double> sample_trajectory(const ArmaModel& model, std::size_t length,
                                      std::uint64_t seed, int burn_in);

/// Toeplitz assembly A_{i,j} = gamma(|i-j|); requires n <= max_lag + 1.
CovarianceMatrix covariance_matrix(const AutocovarianceSeq& gammas, int n);

/// Rescales sigma_w^2 so that gamma(0) equals target_power; AR/MA
/// coefficients are untouched.
ArmaModel set_total_power(const ArmaModel& model, double target_power);

/// Frobenius norm of the difference of the two n x n autocovariance
/// matrices, computed lag-wise.
double model_distance_l2(const AutocovarianceSeq& g1, const AutocovarianceSeq& g2,
                         int n);
double model_distance_l2(const ArmaModel& m1, const ArmaModel& m2, int n);
double model_distance_l2(const ArmaModel& m1, const DcNoiseModel& m2, int n);
double model_distance_l2(const DcNoiseModel& m1, const ArmaModel& m2, int n);
double model_distance_l2(const DcNoiseModel& m1, const DcNoiseModel& m2, int n);

/// MA(order) model with Hamming-windowed sinc low-pass taps, normalized so
/// the leading tap is 1. Utility for bandlimited noise inputs.
ArmaModel fir_lowpass_ma(double cutoff, int order);

/// Biased sample autocovariances gamma_hat(0..max_lag) of a data vector
/// (mean removed). Runs on the active kernel set.
std::vector<double> sample_autocovariance(std::span<const double> data, int max_lag);

}  // namespace qoc::arma

#endif
