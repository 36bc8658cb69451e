#ifndef QOC_KERNELS_HPP
#define QOC_KERNELS_HPP

#include <cstddef>

// Data-parallel inner loops: long-trajectory reductions and batched SU(2)
// propagation. Each kernel has a scalar reference implementation and an
// AVX2 variant selected at runtime; the two are equivalence-tested. The
// SU(2) batch kernel is written so both paths produce bit-identical
// output (lane arithmetic mirrors the scalar expression trees, no FMA).

namespace qoc::kernels {

/// Batched noisy SU(2) propagation: for each trajectory t, compose
/// U = U_n ... U_1 with per-step generator
///   (jz/2) sigma_z + (1+eps) (theta/2) (cos(phi) sigma_x + sin(phi) sigma_y)
/// and write 1 - |Tr(ideal^dag U)|^2 / 4 into infidelities[t].
struct Su2BatchArgs {
    const double* thetas;  ///< [n_steps] step angles
    const double* phis;    ///< [n_steps] drive phases, or nullptr for all-zero
    const double* eps;     ///< [n_steps * batch], step-major: eps[j*batch + t]
    const double* jz;      ///< [n_steps * batch] dephasing, or nullptr
    std::size_t n_steps;
    std::size_t batch;
    const double* ideal;    ///< [8] target unitary, row-major re/im pairs
    double* infidelities;   ///< [batch] output
};

struct Ops {
    const char* name;
    /// Compensated (Neumaier) sum.
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    /// sum_{i=0}^{n-h-1} x[i] * x[i+h]
    double (*lagged_dot)(const double* x, std::size_t n, std::size_t h);
    /// x^T A x for symmetric Toeplitz A with first row gamma[0..n-1]:
    /// gamma[0]*sum x_i^2 + 2*sum_h gamma[h]*lagged_dot(x, h).
    double (*toeplitz_quadform)(const double* x, std::size_t n, const double* gamma);
    void (*su2_batch_infidelity)(const Su2BatchArgs& args);
};

const Ops& scalar_ops();

/// AVX2 variant; only valid to call when avx2_supported().
const Ops& avx2_ops();
bool avx2_supported();

/// Best supported implementation, overridable with QOC_KERNELS=scalar|avx2.
const Ops& active();

}  // namespace qoc::kernels

#endif
