#include "qoc/kernels.hpp"

#include <cmath>

#include "kernels_detail.hpp"

namespace qoc::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
    // Neumaier variant of Kahan summation.
    double s = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = s + x[i];
        if (std::abs(s) >= std::abs(x[i]))
            comp += (s - t) + x[i];
        else
            comp += (x[i] - t) + s;
        s = t;
    }
    return s + comp;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double lagged_dot_scalar(const double* x, std::size_t n, std::size_t h) {
    if (h >= n) return 0.0;
    double acc = 0.0;
    const std::size_t m = n - h;
    for (std::size_t i = 0; i < m; ++i) acc += x[i] * x[i + h];
    return acc;
}

double toeplitz_quadform_scalar(const double* x, std::size_t n, const double* gamma) {
    double acc = gamma[0] * lagged_dot_scalar(x, n, 0);
    for (std::size_t h = 1; h < n; ++h)
        acc += 2.0 * gamma[h] * lagged_dot_scalar(x, n, h);
    return acc;
}

void su2_batch_scalar(const Su2BatchArgs& args) {
    for (std::size_t t = 0; t < args.batch; ++t) {
        // U starts as the identity; entries (a b; c d), re/im split.
        double ar = 1.0, ai = 0.0, br = 0.0, bi = 0.0;
        double cr = 0.0, ci = 0.0, dr = 1.0, di = 0.0;

        for (std::size_t j = 0; j < args.n_steps; ++j) {
            const double theta = args.thetas[j];
            const double phi = args.phis ? args.phis[j] : 0.0;
            const double cphi = args.phis ? std::cos(phi) : 1.0;
            const double sphi = args.phis ? std::sin(phi) : 0.0;
            const double eps = args.eps[j * args.batch + t];
            const double jz = args.jz ? args.jz[j * args.batch + t] : 0.0;
            const auto s = detail::step_coeffs(theta, cphi, sphi, eps, jz);

            // S = (c - i sz, -sy - i sx; sy - i sx, c + i sz); U <- S U.
            const double s00r = s.c, s00i = -s.sz;
            const double s01r = -s.sy, s01i = -s.sx;
            const double s10r = s.sy, s10i = -s.sx;
            const double s11r = s.c, s11i = s.sz;

            const double nar = (s00r * ar - s00i * ai) + (s01r * cr - s01i * ci);
            const double nai = (s00r * ai + s00i * ar) + (s01r * ci + s01i * cr);
            const double nbr = (s00r * br - s00i * bi) + (s01r * dr - s01i * di);
            const double nbi = (s00r * bi + s00i * br) + (s01r * di + s01i * dr);
            const double ncr = (s10r * ar - s10i * ai) + (s11r * cr - s11i * ci);
            const double nci = (s10r * ai + s10i * ar) + (s11r * ci + s11i * cr);
            const double ndr = (s10r * br - s10i * bi) + (s11r * dr - s11i * di);
            const double ndi = (s10r * bi + s10i * br) + (s11r * di + s11i * dr);
            ar = nar; ai = nai; br = nbr; bi = nbi;
            cr = ncr; ci = nci; dr = ndr; di = ndi;
        }

        const double* id = args.ideal;
        const double p00 = (id[0] * ar + id[1] * ai);
        const double p01 = (id[2] * br + id[3] * bi);
        const double p10 = (id[4] * cr + id[5] * ci);
        const double p11 = (id[6] * dr + id[7] * di);
        const double q00 = (id[0] * ai - id[1] * ar);
        const double q01 = (id[2] * bi - id[3] * br);
        const double q10 = (id[4] * ci - id[5] * cr);
        const double q11 = (id[6] * di - id[7] * dr);
        const double tre = (p00 + p01) + (p10 + p11);
        const double tim = (q00 + q01) + (q10 + q11);
        double infid = 1.0 - 0.25 * (tre * tre + tim * tim);
        if (infid < 0.0) infid = 0.0;
        if (infid > 1.0) infid = 1.0;
        args.infidelities[t] = infid;
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{
        "scalar",         sum_scalar,
        dot_scalar,       lagged_dot_scalar,
        toeplitz_quadform_scalar, su2_batch_scalar,
    };
    return ops;
}

}  // namespace qoc::kernels
