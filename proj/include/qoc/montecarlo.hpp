#ifndef QOC_MONTECARLO_HPP
#define QOC_MONTECARLO_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "qoc/arma.hpp"
#include "qoc/composite.hpp"
#include "qoc/control.hpp"
#include "qoc/su2.hpp"

// Exact SU(2) simulation of noisy piecewise-constant control. Propagators
// are exact exponentials per step, so the only approximation anywhere is
// statistical.

namespace qoc::montecarlo {

struct SimConfig {
    std::int64_t num_trajectories = 10000;
    std::uint64_t seed = 0;
    /// Samples discarded after the zero initialization; negative selects
    /// the model default 10 (p + q + 1).
    int burn_in = -1;
};

struct FidelityEstimate {
    double mean_infidelity = 0.0;
    double standard_error = 0.0;
    std::int64_t num_trajectories = 0;
};

/// exp(-i [ (j/2) sigma_z + (1+eps)(theta/2)(cos phi sigma_x + sin phi sigma_y) ]).
su2::Mat2c step_unitary(double theta, double eps, double j, double phi);

/// Sub-seed for trajectory `index`; stream 0 drives the control noise,
/// stream 1 the dephasing residual. Serial and parallel runs agree exactly.
std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index,
                              std::uint64_t stream);

/// Per-trajectory infidelities 1 - |Tr(R_X(theta_Q)^dag U)|^2/4, indexed by
/// trajectory; identical for any thread count.
std::vector<double> per_trajectory_infidelities(const control::PulseSequence& seq,
                                                const control::NoiseModel& noise,
                                                const SimConfig& cfg, int threads = 1);

FidelityEstimate simulate_single_axis(const control::PulseSequence& seq,
                                      const control::NoiseModel& noise,
                                      const SimConfig& cfg, int threads = 1);

FidelityEstimate simulate_composite(const composite::CompositePulse& cp,
                                    const arma::ArmaModel& amp_noise,
                                    const SimConfig& cfg, int threads = 1);

/// DC amplitude noise: one constant N(0, variance) level per trajectory.
FidelityEstimate simulate_composite(const composite::CompositePulse& cp,
                                    const arma::DcNoiseModel& amp_noise,
                                    const SimConfig& cfg, int threads = 1);

/// Deterministic infidelity of a fixed systematic amplitude error delta.
double fixed_dc_infidelity(std::span<const double> thetas,
                           std::span<const double> phis, double target_angle,
                           double delta);
double fixed_dc_infidelity(const composite::CompositePulse& cp, double delta);

struct RobustnessRow {
    std::size_t base_index = 0;
    double deviation = 0.0;           ///< epsilon = |eps_a| + |eps_b|
    double worst_rel_increase = 0.0;  ///< vs the matched-model optimum
    double mean_rel_increase = 0.0;
    int discarded = 0;                ///< non-stationary perturbations
};

/// For each ARMA(1,1) base model: optimal control from the base covariance,
/// evaluated under models perturbed on the L1 sphere |eps_a| + |eps_b| =
/// epsilon; reports the spread of the relative infidelity increase against
/// each perturbed model's own optimum.
std::vector<RobustnessRow> robustness_sweep(std::span<const arma::ArmaModel> base_models,
                                            std::span<const double> deviations,
                                            int samples_per_eps, double theta_q, int n,
                                            std::uint64_t seed);

}  // namespace qoc::montecarlo

#endif
