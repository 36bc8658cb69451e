#include "qoc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qoc/errors.hpp"
#include "qoc/kernels.hpp"
#include "qoc/optimizer.hpp"
#include "qoc/rng.hpp"

namespace qoc::montecarlo {

su2::Mat2c step_unitary(double theta, double eps, double j, double phi) {
    const double amp = (1.0 + eps) * theta;
    return su2::pauli_rotation(amp * std::cos(phi), amp * std::sin(phi), j);
}

std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index,
                              std::uint64_t stream) {
    return rng::mix_seed(seed, index, stream);
}

namespace {

constexpr std::size_t kBlock = 256;

void ideal_rx(double angle, double out[8]) {
    const auto u = su2::rx(angle);
    out[0] = u.a.real(); out[1] = u.a.imag();
    out[2] = u.b.real(); out[3] = u.b.imag();
    out[4] = u.c.real(); out[5] = u.c.imag();
    out[6] = u.d.real(); out[7] = u.d.imag();
}

/// Fills infid[first..first+count) for trajectories [first, first+count).
/// fill_block(eps, jz, global_index, lanes) populates the step-major noise
/// buffers for one batch.
template <typename FillBlock>
void run_blocks(std::span<const double> thetas, const double* phis, bool with_jz,
                double target_angle, std::int64_t first, std::int64_t count,
                std::vector<double>& infid, FillBlock&& fill_block) {
    const std::size_t n = thetas.size();
    double ideal[8];
    ideal_rx(target_angle, ideal);
    std::vector<double> eps(n * kBlock);
    std::vector<double> jz(with_jz ? n * kBlock : 0);

    std::int64_t done = 0;
    while (done < count) {
        const std::size_t lanes =
            static_cast<std::size_t>(std::min<std::int64_t>(kBlock, count - done));
        fill_block(eps, jz, first + done, lanes);

        kernels::Su2BatchArgs args{};
        args.thetas = thetas.data();
        args.phis = phis;
        args.eps = eps.data();
        args.jz = with_jz ? jz.data() : nullptr;
        args.n_steps = n;
        args.batch = lanes;
        args.ideal = ideal;
        args.infidelities = infid.data() + first + done;
        kernels::active().su2_batch_infidelity(args);
        done += static_cast<std::int64_t>(lanes);
    }
}

FidelityEstimate reduce_estimate(const std::vector<double>& infid) {
    const auto& ops = kernels::active();
    const std::int64_t m = static_cast<std::int64_t>(infid.size());
    FidelityEstimate est;
    est.num_trajectories = m;
    if (m == 0) return est;
    const double mean = ops.sum(infid.data(), infid.size()) / static_cast<double>(m);
    est.mean_infidelity = mean;
    if (m > 1) {
        std::vector<double> sq(infid.size());
        for (std::size_t i = 0; i < infid.size(); ++i) {
            const double d = infid[i] - mean;
            sq[i] = d * d;
        }
        const double ss = ops.sum(sq.data(), sq.size());
        const double sd = std::sqrt(ss / static_cast<double>(m - 1));
        est.standard_error = sd / std::sqrt(static_cast<double>(m));
    }
    return est;
}

template <typename FillBlock>
std::vector<double> run_trajectories(std::span<const double> thetas, const double* phis,
                                     bool with_jz, double target_angle,
                                     std::int64_t total, int threads,
                                     FillBlock&& fill_block) {
    std::vector<double> infid(static_cast<std::size_t>(total), 0.0);
    threads = std::max(1, threads);
    if (threads == 1 || total < static_cast<std::int64_t>(2 * kBlock)) {
        run_blocks(thetas, phis, with_jz, target_angle, 0, total, infid, fill_block);
        return infid;
    }
    // Split on block boundaries; per-trajectory seeding keeps every
    // partition bit-identical to the serial run.
    const std::int64_t nblocks = (total + static_cast<std::int64_t>(kBlock) - 1) /
                                 static_cast<std::int64_t>(kBlock);
    const std::int64_t per = (nblocks + threads - 1) / threads;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        const std::int64_t b0 = t * per;
        const std::int64_t b1 = std::min(nblocks, b0 + per);
        if (b0 >= b1) break;
        const std::int64_t first = b0 * static_cast<std::int64_t>(kBlock);
        const std::int64_t count =
            std::min(total, b1 * static_cast<std::int64_t>(kBlock)) - first;
        pool.emplace_back([&, first, count] {
            run_blocks(thetas, phis, with_jz, target_angle, first, count, infid,
                       fill_block);
        });
    }
    for (auto& th : pool) th.join();
    return infid;
}

}  // namespace

std::vector<double> per_trajectory_infidelities(const control::PulseSequence& seq,
                                                const control::NoiseModel& noise,
                                                const SimConfig& cfg, int threads) {
    const std::size_t n = seq.thetas().size();
    const int burn_eps = cfg.burn_in >= 0 ? cfg.burn_in
                                          : arma::default_burn_in(noise.control);
    const int burn_res =
        noise.dephasing_residual
            ? (cfg.burn_in >= 0 ? cfg.burn_in
                                : arma::default_burn_in(*noise.dephasing_residual))
            : 0;
    const bool with_jz =
        noise.dephasing_residual.has_value() || noise.dephasing_mean != 0.0;
    const double mu = noise.dephasing_mean;

    auto fill = [&](std::vector<double>& eps, std::vector<double>& jz,
                    std::int64_t base, std::size_t lanes) {
        for (std::size_t t = 0; t < lanes; ++t) {
            const std::uint64_t idx = static_cast<std::uint64_t>(base) + t;
            arma::ArmaSampler es(noise.control, trajectory_seed(cfg.seed, idx, 0));
            es.warm_up(burn_eps);
            for (std::size_t j = 0; j < n; ++j) eps[j * lanes + t] = es.next();
            if (!with_jz) continue;
            if (noise.dephasing_residual) {
                arma::ArmaSampler js(*noise.dephasing_residual,
                                     trajectory_seed(cfg.seed, idx, 1));
                js.warm_up(burn_res);
                for (std::size_t j = 0; j < n; ++j) jz[j * lanes + t] = mu + js.next();
            } else {
                for (std::size_t j = 0; j < n; ++j) jz[j * lanes + t] = mu;
            }
        }
    };

    return run_trajectories(seq.thetas(), nullptr, with_jz, seq.target_angle(),
                            cfg.num_trajectories, threads, fill);
}

FidelityEstimate simulate_single_axis(const control::PulseSequence& seq,
                                      const control::NoiseModel& noise,
                                      const SimConfig& cfg, int threads) {
    return reduce_estimate(per_trajectory_infidelities(seq, noise, cfg, threads));
}

FidelityEstimate simulate_composite(const composite::CompositePulse& cp,
                                    const arma::ArmaModel& amp_noise,
                                    const SimConfig& cfg, int threads) {
    const std::size_t n = cp.thetas.size();
    const int burn = cfg.burn_in >= 0 ? cfg.burn_in : arma::default_burn_in(amp_noise);
    auto fill = [&](std::vector<double>& eps, std::vector<double>&, std::int64_t base,
                    std::size_t lanes) {
        for (std::size_t t = 0; t < lanes; ++t) {
            const std::uint64_t idx = static_cast<std::uint64_t>(base) + t;
            arma::ArmaSampler es(amp_noise, trajectory_seed(cfg.seed, idx, 0));
            es.warm_up(burn);
            for (std::size_t j = 0; j < n; ++j) eps[j * lanes + t] = es.next();
        }
    };
    return reduce_estimate(run_trajectories(cp.thetas, cp.phis.data(), false,
                                            cp.target_angle, cfg.num_trajectories,
                                            threads, fill));
}

FidelityEstimate simulate_composite(const composite::CompositePulse& cp,
                                    const arma::DcNoiseModel& amp_noise,
                                    const SimConfig& cfg, int threads) {
    const std::size_t n = cp.thetas.size();
    const double sigma = std::sqrt(amp_noise.variance);
    auto fill = [&](std::vector<double>& eps, std::vector<double>&, std::int64_t base,
                    std::size_t lanes) {
        for (std::size_t t = 0; t < lanes; ++t) {
            const std::uint64_t idx = static_cast<std::uint64_t>(base) + t;
            rng::Xoshiro256pp gen(trajectory_seed(cfg.seed, idx, 0));
            const double level = sigma * gen.normal();
            for (std::size_t j = 0; j < n; ++j) eps[j * lanes + t] = level;
        }
    };
    return reduce_estimate(run_trajectories(cp.thetas, cp.phis.data(), false,
                                            cp.target_angle, cfg.num_trajectories,
                                            threads, fill));
}

double fixed_dc_infidelity(std::span<const double> thetas,
                           std::span<const double> phis, double target_angle,
                           double delta) {
    if (thetas.size() != phis.size())
        throw LengthMismatchError("fixed_dc_infidelity: thetas/phis mismatch");
    su2::Mat2c u = su2::identity();
    for (std::size_t j = 0; j < thetas.size(); ++j)
        u = step_unitary(thetas[j], delta, 0.0, phis[j]) * u;
    return 1.0 - su2::gate_fidelity(su2::rx(target_angle), u);
}

double fixed_dc_infidelity(const composite::CompositePulse& cp, double delta) {
    return fixed_dc_infidelity(cp.thetas, cp.phis, cp.target_angle, delta);
}

std::vector<RobustnessRow> robustness_sweep(std::span<const arma::ArmaModel> base_models,
                                            std::span<const double> deviations,
                                            int samples_per_eps, double theta_q, int n,
                                            std::uint64_t seed) {
    if (samples_per_eps < 1)
        throw std::invalid_argument("robustness_sweep: samples_per_eps >= 1");
    std::vector<RobustnessRow> rows;

    for (std::size_t bi = 0; bi < base_models.size(); ++bi) {
        const auto& base = base_models[bi];
        if (base.p() < 1 || base.q() < 1)
            throw std::invalid_argument(
                "robustness_sweep: base models must be ARMA(1,1)");
        const auto base_gammas = arma::autocovariance(base, n - 1);
        const auto base_opt = optimizer::solve_qp(
            {arma::covariance_matrix(base_gammas, n), theta_q});

        for (std::size_t ei = 0; ei < deviations.size(); ++ei) {
            const double eps = deviations[ei];
            RobustnessRow row;
            row.base_index = bi;
            row.deviation = eps;
            double sum_rel = 0.0;
            int kept = 0;

            for (int s = 0; s < samples_per_eps; ++s) {
                // Directions depend on (seed, base, sample) only, so a
                // deviation list shares directions across magnitudes.
                rng::Xoshiro256pp gen(
                    rng::mix_seed(seed, bi * 100003ULL + static_cast<std::uint64_t>(s), 2));
                const double frac = gen.uniform();
                const bool flip_a = gen.next() & 1;
                const bool flip_b = gen.next() & 1;
                const double da = (flip_a ? -1.0 : 1.0) * frac * eps;
                const double db = (flip_b ? -1.0 : 1.0) * (1.0 - frac) * eps;

                auto ar = base.ar();
                auto ma = base.ma();
                ar[0] += da;
                ma[0] += db;
                if (!arma::is_stationary_ar(ar)) {
                    ++row.discarded;
                    continue;
                }
                const arma::ArmaModel pert(ar, ma, base.sigma_w2());
                const auto pert_gammas = arma::autocovariance(pert, n - 1);
                const double infid_base_seq =
                    control::infidelity_control_only(base_opt, pert_gammas);
                const auto pert_opt = optimizer::solve_qp(
                    {arma::covariance_matrix(pert_gammas, n), theta_q});
                const double infid_matched =
                    control::infidelity_control_only(pert_opt, pert_gammas);
                const double rel =
                    (infid_matched > 0.0)
                        ? (infid_base_seq - infid_matched) / infid_matched
                        : 0.0;
                row.worst_rel_increase = std::max(row.worst_rel_increase, rel);
                sum_rel += rel;
                ++kept;
            }
            if (kept == 0)
                throw AllPerturbationsNonStationaryError(
                    "robustness_sweep: every perturbation non-stationary");
            row.mean_rel_increase = sum_rel / kept;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace qoc::montecarlo
