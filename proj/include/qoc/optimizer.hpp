#ifndef QOC_OPTIMIZER_HPP
#define QOC_OPTIMIZER_HPP

#include <map>
#include <span>
#include <vector>

#include "qoc/arma.hpp"
#include "qoc/control.hpp"

// Convex QP for pure control noise (exact, via the KKT system) and
// projected-gradient descent with forward/reverse sweep initialization for
// the nonconvex control + dephasing objective.

namespace qoc::optimizer {

/// Minimize x^T A x subject to sum(x) = target_angle.
struct QpProblem {
    arma::CovarianceMatrix covariance;
    double target_angle = 0.0;
};

/// Global minimizer theta* = theta_Q A^{-1} 1 / (1^T A^{-1} 1), through the
/// bordered KKT solve; a ridge 1e-12 tr(A)/N is added on singularity.
control::PulseSequence solve_qp(const QpProblem& problem);

/// (1/4) x^T A x, the infidelity value of a feasible point.
double qp_objective(const QpProblem& problem, std::span<const double> x);

/// max(|stationarity residual| / (||A||_inf |theta_Q|), |feasibility| / |theta_Q|).
double qp_kkt_residual(const QpProblem& problem, const control::PulseSequence& seq);

struct OptimizeOptions {
    int max_iters = 100000;
    double tol = 1e-10;  ///< projected-gradient 2-norm threshold
};

/// Projected-gradient descent (Armijo backtracking, Barzilai-Borwein trial
/// steps) on infidelity_full(...).total over the hyperplane sum(theta) =
/// theta_q. The returned objective never exceeds the initial one.
std::pair<control::PulseSequence, control::InfidelityBreakdown> optimize_full(
    const control::NoiseModel& noise, double theta_q, int n,
    const control::PulseSequence& init, const OptimizeOptions& opts = {});

enum class SweepDirection { forward, reverse };

struct SweepEntry {
    control::PulseSequence seq;
    control::InfidelityBreakdown infidelity;
    SweepDirection source = SweepDirection::forward;
};

struct SweepResult {
    std::map<int, SweepEntry> per_length;
};

/// Forward pass from uniform initial conditions, then a reverse pass that
/// shrinks each length-(N+1) solution (drop the lowest-|theta| step and
/// spread its angle over the rest); keeps the better result per length.
SweepResult sweep_lengths(const control::NoiseModel& noise, double theta_q,
                          int n_min, int n_max, const OptimizeOptions& opts = {});

struct CrossoverRow {
    int n = 0;
    double share_a = 0.0;  ///< coherent dephasing fraction of A+B+C
    double share_b = 0.0;  ///< correlated dephasing fraction
    double share_c = 0.0;  ///< control noise fraction
};

/// Relative term contributions at the optimized sequence per length; the
/// diagnostic that locates the hard-decision discontinuity.
std::vector<CrossoverRow> crossover_scan(const control::NoiseModel& noise,
                                         double theta_q, int n_min, int n_max,
                                         const OptimizeOptions& opts = {});

}  // namespace qoc::optimizer

#endif
