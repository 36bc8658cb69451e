#include "qoc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qoc/errors.hpp"
#include "qoc/linalg.hpp"

namespace qoc::optimizer {

namespace {

bool solve_kkt(const arma::CovarianceMatrix& a, double theta_q, double ridge,
               std::vector<double>& x) {
    const std::size_t n = a.rows();
    // Equilibrate: divide the quadratic block by its magnitude so the
    // singularity test is not dominated by the all-ones border.
    double scale = std::abs(ridge);
    for (double v : a.data()) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return false;

    linalg::Matrix kkt(n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) kkt(i, j) = a(i, j) / scale;
        kkt(i, i) += ridge / scale;
        kkt(i, n) = 1.0;
        kkt(n, i) = 1.0;
    }
    std::vector<double> rhs(n + 1, 0.0);
    rhs[n] = theta_q;
    std::vector<double> sol;
    if (!linalg::lu_solve(kkt, rhs, sol)) return false;
    x.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(n));
    return true;
}

}  // namespace

control::PulseSequence solve_qp(const QpProblem& problem) {
    const std::size_t n = problem.covariance.rows();
    if (n == 0 || problem.covariance.cols() != n)
        throw std::invalid_argument("solve_qp: covariance must be square, N >= 1");

    std::vector<double> x;
    if (!solve_kkt(problem.covariance, problem.target_angle, 0.0, x)) {
        double trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += problem.covariance(i, i);
        const double ridge = 1e-12 * trace / static_cast<double>(n);
        if (!solve_kkt(problem.covariance, problem.target_angle, ridge, x))
            throw SingularAfterRidgeError("solve_qp: KKT singular after ridge");
    }

    // Pin feasibility exactly (pure rescale along the solution ray).
    double sum = 0.0;
    for (double v : x) sum += v;
    if (problem.target_angle != 0.0 && sum != 0.0) {
        const double f = problem.target_angle / sum;
        for (auto& v : x) v *= f;
    }
    return {std::move(x), problem.target_angle};
}

double qp_objective(const QpProblem& problem, std::span<const double> x) {
    const std::size_t n = problem.covariance.rows();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) acc += x[i] * problem.covariance(i, j) * x[j];
    return 0.25 * acc;
}

double qp_kkt_residual(const QpProblem& problem, const control::PulseSequence& seq) {
    const std::size_t n = problem.covariance.rows();
    const auto ax = linalg::matvec(problem.covariance, seq.thetas());
    double lambda = 0.0;
    for (double v : ax) lambda += v;
    lambda /= -static_cast<double>(n);
    double stat = 0.0;
    for (double v : ax) stat = std::max(stat, std::abs(v + lambda));
    double sum = 0.0;
    for (double v : seq.thetas()) sum += v;
    const double feas = std::abs(sum - problem.target_angle);
    const double scale_a = std::max(linalg::inf_norm(problem.covariance), 1e-300);
    const double scale_t = std::max(std::abs(problem.target_angle), 1e-300);
    return std::max(stat / (scale_a * scale_t), feas / scale_t);
}

namespace {

struct Objective {
    double mu_j;
    arma::AutocovarianceSeq g_eps;
    arma::AutocovarianceSeq g_res;
    double theta_q;

    control::InfidelityBreakdown breakdown(const std::vector<double>& x) const {
        return control::infidelity_full({x, theta_q}, mu_j, g_eps, g_res);
    }
    double value(const std::vector<double>& x) const { return breakdown(x).total; }
    std::vector<double> gradient(const std::vector<double>& x) const {
        return control::infidelity_full_gradient({x, theta_q}, mu_j, g_eps, g_res);
    }
};

Objective make_objective(const control::NoiseModel& noise, double theta_q, int n) {
    Objective obj;
    obj.mu_j = noise.dephasing_mean;
    obj.g_eps = arma::autocovariance(noise.control, n - 1);
    if (noise.dephasing_residual)
        obj.g_res = arma::autocovariance(*noise.dephasing_residual, n - 1);
    obj.theta_q = theta_q;
    return obj;
}

void recenter(std::vector<double>& x, double theta_q) {
    double sum = 0.0;
    for (double v : x) sum += v;
    const double shift = (theta_q - sum) / static_cast<double>(x.size());
    for (auto& v : x) v += shift;
}

std::vector<double> project_zero_sum(std::vector<double> g) {
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    for (auto& v : g) v -= mean;
    return g;
}

double norm2(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

}  // namespace

std::pair<control::PulseSequence, control::InfidelityBreakdown> optimize_full(
    const control::NoiseModel& noise, double theta_q, int n,
    const control::PulseSequence& init, const OptimizeOptions& opts) {
    if (init.size() != n)
        throw BadInitError("optimize_full: init length != n");
    double init_sum = 0.0;
    for (double v : init.thetas()) init_sum += v;
    if (std::abs(init_sum - theta_q) > 1e-9)
        throw BadInitError("optimize_full: init violates the angle constraint");

    const Objective obj = make_objective(noise, theta_q, n);

    std::vector<double> x = init.thetas();
    recenter(x, theta_q);
    double f = obj.value(x);
    if (!std::isfinite(f))
        throw NonFiniteObjectiveError("optimize_full: objective not finite at init");
    std::vector<double> g = project_zero_sum(obj.gradient(x));

    double alpha = 0.0;
    std::vector<double> x_prev, g_prev;
    for (int iter = 0; iter < opts.max_iters; ++iter) {
        const double gnorm = norm2(g);
        if (gnorm < opts.tol) break;

        // Barzilai-Borwein trial step after the first iteration.
        double trial;
        if (x_prev.empty()) {
            trial = f / (0.5 * gnorm * gnorm);
        } else {
            double sts = 0.0, sty = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double s = x[i] - x_prev[i];
                const double y = g[i] - g_prev[i];
                sts += s * s;
                sty += s * y;
            }
            trial = (sty > 0.0) ? sts / sty : 2.0 * alpha;
        }
        if (!std::isfinite(trial) || trial <= 0.0) trial = 1.0;
        trial = std::clamp(trial, 1e-16, 1e12);

        // Armijo backtracking by halving, c = 1e-4.
        double step = trial;
        std::vector<double> cand(x.size());
        double f_cand = std::numeric_limits<double>::infinity();
        bool accepted = false;
        while (step > 1e-20 * trial && step > 1e-300) {
            for (std::size_t i = 0; i < x.size(); ++i) cand[i] = x[i] - step * g[i];
            recenter(cand, theta_q);
            f_cand = obj.value(cand);
            if (!std::isfinite(f_cand))
                throw NonFiniteObjectiveError("optimize_full: objective not finite");
            if (f_cand <= f - 1e-4 * step * gnorm * gnorm) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no descent direction progress left

        x_prev = std::move(x);
        g_prev = std::move(g);
        x = std::move(cand);
        f = f_cand;
        g = project_zero_sum(obj.gradient(x));
        alpha = step;
    }

    control::PulseSequence seq(std::move(x), theta_q);
    return {seq, obj.breakdown(seq.thetas())};
}

namespace {

/// Reverse-sweep shrink: drop the lowest-|theta| step of a length-(K+1)
/// solution and add theta_min/K to each survivor, preserving the sum.
control::PulseSequence shrink_sequence(const control::PulseSequence& longer) {
    const auto& th = longer.thetas();
    std::size_t drop = 0;
    for (std::size_t j = 1; j < th.size(); ++j)
        if (std::abs(th[j]) < std::abs(th[drop])) drop = j;
    const double removed = th[drop];
    std::vector<double> shorter;
    shorter.reserve(th.size() - 1);
    for (std::size_t j = 0; j < th.size(); ++j)
        if (j != drop) shorter.push_back(th[j] + removed / (th.size() - 1.0));
    double sum = 0.0;
    for (double v : shorter) sum += v;
    shorter.back() += longer.target_angle() - sum;
    return {std::move(shorter), longer.target_angle()};
}

}  // namespace

SweepResult sweep_lengths(const control::NoiseModel& noise, double theta_q,
                          int n_min, int n_max, const OptimizeOptions& opts) {
    if (n_min < 1 || n_max < n_min)
        throw std::invalid_argument("sweep_lengths: require 1 <= n_min <= n_max");

    SweepResult result;
    for (int n = n_min; n <= n_max; ++n) {
        auto [seq, infid] = optimize_full(
            noise, theta_q, n, control::PulseSequence::uniform(theta_q, n), opts);
        result.per_length.emplace(
            n, SweepEntry{std::move(seq), infid, SweepDirection::forward});
    }

    for (int n = n_max - 1; n >= n_min; --n) {
        const auto& longer = result.per_length.at(n + 1).seq;
        auto init = shrink_sequence(longer);
        auto [seq, infid] = optimize_full(noise, theta_q, n, init, opts);
        auto& entry = result.per_length.at(n);
        // Ties within 1e-14 keep the forward result.
        if (infid.total < entry.infidelity.total - 1e-14) {
            entry = SweepEntry{std::move(seq), infid, SweepDirection::reverse};
        }
    }
    return result;
}

std::vector<CrossoverRow> crossover_scan(const control::NoiseModel& noise,
                                         double theta_q, int n_min, int n_max,
                                         const OptimizeOptions& opts) {
    const auto sweep = sweep_lengths(noise, theta_q, n_min, n_max, opts);
    std::vector<CrossoverRow> rows;
    rows.reserve(sweep.per_length.size());
    for (const auto& [n, entry] : sweep.per_length) {
        const auto& b = entry.infidelity;
        const double denom = b.term_a + b.term_b + b.term_c;
        CrossoverRow row;
        row.n = n;
        if (denom > 0.0) {
            row.share_a = b.term_a / denom;
            row.share_b = b.term_b / denom;
            row.share_c = b.term_c / denom;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qoc::optimizer
