#ifndef QOC_KERNELS_DETAIL_HPP
#define QOC_KERNELS_DETAIL_HPP

#include <cmath>
#include <cstddef>

// Shared per-step math for the SU(2) kernels. The step rotation
//   S = cos(m/2) I - i sin(m/2) (v / m) . sigma,  m = |v|,
// is parameterized here by (c, sx, sy, sz) = (cos(m/2), k*vx, k*vy, k*vz)
// with k = sin(m/2)/m. Both the scalar and the SIMD path call this exact
// function per lane so their outputs match bit for bit.

namespace qoc::kernels::detail {

struct StepCoeffs {
    double c, sx, sy, sz;
};

inline StepCoeffs step_coeffs(double theta, double cphi, double sphi,
                              double eps, double jz) {
    const double amp = (1.0 + eps) * theta;
    const double vx = amp * cphi;
    const double vy = amp * sphi;
    const double vz = jz;
    const double m = std::sqrt((vx * vx + vy * vy) + vz * vz);
    const double c = std::cos(0.5 * m);
    const double k = (m > 0.0) ? std::sin(0.5 * m) / m : 0.5;
    return {c, k * vx, k * vy, k * vz};
}

}  // namespace qoc::kernels::detail

#endif
