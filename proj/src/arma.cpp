#include "qoc/arma.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "qoc/errors.hpp"
#include "qoc/kernels.hpp"

namespace qoc::arma {

bool is_stationary_ar(std::span<const double> ar_coeffs) {
    // Inverse Levinson-Durbin: peel reflection coefficients off the AR
    // polynomial; all roots are inside the unit circle iff every |k| < 1.
    std::vector<double> cur(ar_coeffs.begin(), ar_coeffs.end());
    for (std::size_t m = cur.size(); m > 0; --m) {
        const double k = cur[m - 1];
        if (!(std::abs(k) < 1.0)) return false;
        if (m == 1) break;
        const double denom = 1.0 - k * k;
        std::vector<double> prev(m - 1);
        for (std::size_t i = 0; i < m - 1; ++i)
            prev[i] = (cur[i] + k * cur[m - 2 - i]) / denom;
        cur = std::move(prev);
    }
    return true;
}

ArmaModel::ArmaModel(std::vector<double> ar_coeffs, std::vector<double> ma_coeffs,
                     double white_noise_variance)
    : ar_(std::move(ar_coeffs)),
      ma_(std::move(ma_coeffs)),
      sigma_w2_(white_noise_variance) {
    if (!(sigma_w2_ >= 0.0))
        throw std::invalid_argument("ArmaModel: sigma_w2 must be >= 0");
    if (!is_stationary_ar(ar_))
        throw NonStationaryError("ArmaModel: AR root on or outside the unit circle");
}

namespace {

// psi-weights of the MA(inf) representation up to index q.
std::vector<double> psi_weights(const ArmaModel& m) {
    const int p = m.p();
    const int q = m.q();
    std::vector<double> psi(static_cast<std::size_t>(q) + 1, 0.0);
    psi[0] = 1.0;
    for (int j = 1; j <= q; ++j) {
        double v = m.ma()[j - 1];
        for (int k = 1; k <= std::min(j, p); ++k) v += m.ar()[k - 1] * psi[j - k];
        psi[j] = v;
    }
    return psi;
}

double ma_rhs_term(const ArmaModel& m, const std::vector<double>& psi, int h) {
    // sigma_w^2 * sum_{j=h}^{q} b_j psi_{j-h}, with b_0 = 1.
    const int q = m.q();
    if (h > q) return 0.0;
    double acc = 0.0;
    for (int j = h; j <= q; ++j) {
        const double bj = (j == 0) ? 1.0 : m.ma()[j - 1];
        acc += bj * psi[j - h];
    }
    return m.sigma_w2() * acc;
}

}  // namespace

AutocovarianceSeq autocovariance(const ArmaModel& model, int max_lag) {
    if (max_lag < 0) throw std::invalid_argument("autocovariance: max_lag < 0");
    const int p = model.p();
    const auto psi = psi_weights(model);

    // Yule-Walker block for gamma(0..p): row h encodes
    //   gamma(h) - sum_i a_i gamma(|h-i|) = sigma_w^2 sum_{j>=h} b_j psi_{j-h}.
    linalg::Matrix m(p + 1, p + 1);
    std::vector<double> rhs(static_cast<std::size_t>(p) + 1, 0.0);
    for (int h = 0; h <= p; ++h) {
        for (int i = 0; i <= p; ++i) {
            const double coeff = (i == 0) ? 1.0 : -model.ar()[i - 1];
            m(h, std::abs(h - i)) += coeff;
        }
        rhs[h] = ma_rhs_term(model, psi, h);
    }
    std::vector<double> head;
    if (!linalg::lu_solve(m, rhs, head))
        throw NonStationaryError("autocovariance: singular Yule-Walker system");

    AutocovarianceSeq out;
    out.max_lag = max_lag;
    out.gammas.resize(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (int h = 0; h <= std::min(p, max_lag); ++h) out.gammas[h] = head[h];
    for (int h = p + 1; h <= max_lag; ++h) {
        double v = ma_rhs_term(model, psi, h);
        for (int i = 1; i <= p; ++i) v += model.ar()[i - 1] * out.gammas[h - i];
        out.gammas[h] = v;
    }
    return out;
}

AutocovarianceSeq autocovariance(const DcNoiseModel& model, int max_lag) {
    if (max_lag < 0) throw std::invalid_argument("autocovariance: max_lag < 0");
    AutocovarianceSeq out;
    out.max_lag = max_lag;
    out.gammas.assign(static_cast<std::size_t>(max_lag) + 1, model.variance);
    return out;
}

double power_spectrum(const ArmaModel& model, double omega) {
    using namespace std::complex_literals;
    std::complex<double> num = 1.0;
    for (int j = 1; j <= model.q(); ++j)
        num += model.ma()[j - 1] * std::exp(-1i * (static_cast<double>(j) * omega));
    std::complex<double> den = 1.0;
    for (int k = 1; k <= model.p(); ++k)
        den -= model.ar()[k - 1] * std::exp(-1i * (static_cast<double>(k) * omega));
    return model.sigma_w2() * std::norm(num) / std::norm(den);
}

int default_burn_in(const ArmaModel& model) {
    return 10 * (model.p() + model.q() + 1);
}

ArmaSampler::ArmaSampler(const ArmaModel& model, std::uint64_t seed)
    : ar_(model.ar()),
      ma_(model.ma()),
      sigma_w_(std::sqrt(model.sigma_w2())),
      gen_(seed),
      beta_hist_(std::max<std::size_t>(ar_.size(), 1), 0.0),
      w_hist_(std::max<std::size_t>(ma_.size(), 1), 0.0) {}

double ArmaSampler::next() {
    const double w = sigma_w_ * gen_.normal();
    double beta = w;
    for (std::size_t j = 0; j < ma_.size(); ++j)
        beta += ma_[j] * w_hist_[(pos_w_ + j) % w_hist_.size()];
    for (std::size_t i = 0; i < ar_.size(); ++i)
        beta += ar_[i] * beta_hist_[(pos_b_ + i) % beta_hist_.size()];

    pos_w_ = (pos_w_ + w_hist_.size() - 1) % w_hist_.size();
    w_hist_[pos_w_] = w;
    pos_b_ = (pos_b_ + beta_hist_.size() - 1) % beta_hist_.size();
    beta_hist_[pos_b_] = beta;
    return beta;
}

void ArmaSampler::warm_up(int burn_in) {
    for (int i = 0; i < burn_in; ++i) next();
}

std::vector<double> sample_trajectory(const ArmaModel& model, std::size_t length,
                                      std::uint64_t seed, int burn_in) {
    if (burn_in < 0) throw std::invalid_argument("sample_trajectory: burn_in < 0");
    ArmaSampler sampler(model, seed);
    sampler.warm_up(burn_in);
    std::vector<double> out(length);
    for (auto& v : out) v = sampler.next();
    return out;
}

CovarianceMatrix covariance_matrix(const AutocovarianceSeq& gammas, int n) {
    if (n < 1) throw std::invalid_argument("covariance_matrix: n < 1");
    if (n > gammas.max_lag + 1)
        throw InsufficientLagsError("covariance_matrix: need gamma up to lag n-1");
    CovarianceMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = gammas[std::abs(i - j)];
    return a;
}

ArmaModel set_total_power(const ArmaModel& model, double target_power) {
    if (!(target_power >= 0.0))
        throw std::invalid_argument("set_total_power: target_power must be >= 0");
    const double gamma0 = autocovariance(model, 0)[0];
    if (!(gamma0 > 0.0))
        throw ZeroPowerModelError("set_total_power: model has zero process variance");
    return {model.ar(), model.ma(), model.sigma_w2() * target_power / gamma0};
}

double model_distance_l2(const AutocovarianceSeq& g1, const AutocovarianceSeq& g2,
                         int n) {
    if (n > g1.max_lag + 1 || n > g2.max_lag + 1)
        throw InsufficientLagsError("model_distance_l2: need gamma up to lag n-1");
    // Frobenius norm over the Toeplitz structure: lag h appears in
    // 2(n-h) entries off the diagonal, n entries on it.
    double acc = 0.0;
    for (int h = 0; h < n; ++h) {
        const double d = g1[h] - g2[h];
        const double mult = (h == 0) ? n : 2.0 * (n - h);
        acc += mult * d * d;
    }
    return std::sqrt(acc);
}

double model_distance_l2(const ArmaModel& m1, const ArmaModel& m2, int n) {
    return model_distance_l2(autocovariance(m1, n - 1), autocovariance(m2, n - 1), n);
}

double model_distance_l2(const ArmaModel& m1, const DcNoiseModel& m2, int n) {
    return model_distance_l2(autocovariance(m1, n - 1), autocovariance(m2, n - 1), n);
}

double model_distance_l2(const DcNoiseModel& m1, const ArmaModel& m2, int n) {
    return model_distance_l2(m2, m1, n);
}

double model_distance_l2(const DcNoiseModel& m1, const DcNoiseModel& m2, int n) {
    return model_distance_l2(autocovariance(m1, n - 1), autocovariance(m2, n - 1), n);
}

ArmaModel fir_lowpass_ma(double cutoff, int order) {
    if (order < 1) throw std::invalid_argument("fir_lowpass_ma: order < 1");
    if (!(cutoff > 0.0) || !(cutoff < std::numbers::pi))
        throw std::invalid_argument("fir_lowpass_ma: cutoff must lie in (0, pi)");
    const double mid = 0.5 * order;
    std::vector<double> taps(static_cast<std::size_t>(order) + 1);
    for (int k = 0; k <= order; ++k) {
        const double x = cutoff * (k - mid);
        const double sinc = (x == 0.0) ? 1.0 : std::sin(x) / x;
        const double window =
            0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / order);
        taps[k] = (cutoff / std::numbers::pi) * sinc * window;
    }
    if (taps[0] == 0.0)
        throw std::invalid_argument("fir_lowpass_ma: leading tap vanishes");
    std::vector<double> ma(static_cast<std::size_t>(order));
    for (int k = 1; k <= order; ++k) ma[k - 1] = taps[k] / taps[0];
    return {{}, std::move(ma), 1.0};
}

std::vector<double> sample_autocovariance(std::span<const double> data, int max_lag) {
    const auto& ops = kernels::active();
    const std::size_t n = data.size();
    if (n == 0) throw std::invalid_argument("sample_autocovariance: empty data");
    const double mean = ops.sum(data.data(), n) / static_cast<double>(n);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = data[i] - mean;
    std::vector<double> out(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (int h = 0; h <= max_lag; ++h)
        out[h] = ops.lagged_dot(centered.data(), n, static_cast<std::size_t>(h)) /
                 static_cast<double>(n);
    return out;
}

}  // namespace qoc::arma
