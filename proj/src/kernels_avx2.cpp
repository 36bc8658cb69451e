#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "kernels_detail.hpp"
#include "qoc/kernels.hpp"

// AVX2 variants. Reductions differ from the scalar reference only by
// association; the SU(2) batch mirrors the scalar expression trees per
// lane and matches it bit for bit (FMA contraction is disabled).

namespace qoc::kernels {
namespace {

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d s = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d t = _mm256_add_pd(s, v);
        const __m256d s_abs = _mm256_and_pd(s, absmask);
        const __m256d v_abs = _mm256_and_pd(v, absmask);
        const __m256d ge = _mm256_cmp_pd(s_abs, v_abs, _CMP_GE_OQ);
        const __m256d c1 = _mm256_add_pd(_mm256_sub_pd(s, t), v);
        const __m256d c2 = _mm256_add_pd(_mm256_sub_pd(v, t), s);
        comp = _mm256_add_pd(comp, _mm256_blendv_pd(c2, c1, ge));
        s = t;
    }
    double lanes_s[4], lanes_c[4];
    _mm256_storeu_pd(lanes_s, s);
    _mm256_storeu_pd(lanes_c, comp);
    double total = ((lanes_s[0] + lanes_s[1]) + (lanes_s[2] + lanes_s[3])) +
                   ((lanes_c[0] + lanes_c[1]) + (lanes_c[2] + lanes_c[3]));
    for (; i < n; ++i) total += x[i];
    return total;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i),
                                                 _mm256_loadu_pd(y + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(x + i + 4),
                                                 _mm256_loadu_pd(y + i + 4)));
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i),
                                                 _mm256_loadu_pd(y + i)));
    double total = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) total += x[i] * y[i];
    return total;
}

double lagged_dot_avx2(const double* x, std::size_t n, std::size_t h) {
    if (h >= n) return 0.0;
    return dot_avx2(x, x + h, n - h);
}

double toeplitz_quadform_avx2(const double* x, std::size_t n, const double* gamma) {
    double acc = gamma[0] * lagged_dot_avx2(x, n, 0);
    for (std::size_t h = 1; h < n; ++h)
        acc += 2.0 * gamma[h] * lagged_dot_avx2(x, n, h);
    return acc;
}

void su2_batch_avx2(const Su2BatchArgs& args) {
    const std::size_t full = args.batch - args.batch % 4;

    for (std::size_t t = 0; t < full; t += 4) {
        __m256d ar = _mm256_set1_pd(1.0), ai = _mm256_setzero_pd();
        __m256d br = _mm256_setzero_pd(), bi = _mm256_setzero_pd();
        __m256d cr = _mm256_setzero_pd(), ci = _mm256_setzero_pd();
        __m256d dr = _mm256_set1_pd(1.0), di = _mm256_setzero_pd();

        for (std::size_t j = 0; j < args.n_steps; ++j) {
            const double theta = args.thetas[j];
            const double phi = args.phis ? args.phis[j] : 0.0;
            const double cphi = args.phis ? std::cos(phi) : 1.0;
            const double sphi = args.phis ? std::sin(phi) : 0.0;
            const double* eps = args.eps + j * args.batch + t;
            const double* jz = args.jz ? args.jz + j * args.batch + t : nullptr;

            // Per-lane trig/sqrt goes through the shared scalar helper so
            // the lanes reproduce the reference path exactly.
            double c[4], sx[4], sy[4], sz[4];
            for (int l = 0; l < 4; ++l) {
                const auto s = detail::step_coeffs(theta, cphi, sphi, eps[l],
                                                   jz ? jz[l] : 0.0);
                c[l] = s.c; sx[l] = s.sx; sy[l] = s.sy; sz[l] = s.sz;
            }
            const __m256d vc = _mm256_loadu_pd(c);
            const __m256d vsx = _mm256_loadu_pd(sx);
            const __m256d vsy = _mm256_loadu_pd(sy);
            const __m256d vsz = _mm256_loadu_pd(sz);
            const __m256d neg = _mm256_set1_pd(-0.0);
            const __m256d s00r = vc, s00i = _mm256_xor_pd(vsz, neg);
            const __m256d s01r = _mm256_xor_pd(vsy, neg), s01i = _mm256_xor_pd(vsx, neg);
            const __m256d s10r = vsy, s10i = _mm256_xor_pd(vsx, neg);
            const __m256d s11r = vc, s11i = vsz;

            const auto cmuladd = [](__m256d pr, __m256d pi, __m256d ur, __m256d ui,
                                    __m256d qr, __m256d qi, __m256d vr, __m256d vi,
                                    __m256d& outr, __m256d& outi) {
                outr = _mm256_add_pd(
                    _mm256_sub_pd(_mm256_mul_pd(pr, ur), _mm256_mul_pd(pi, ui)),
                    _mm256_sub_pd(_mm256_mul_pd(qr, vr), _mm256_mul_pd(qi, vi)));
                outi = _mm256_add_pd(
                    _mm256_add_pd(_mm256_mul_pd(pr, ui), _mm256_mul_pd(pi, ur)),
                    _mm256_add_pd(_mm256_mul_pd(qr, vi), _mm256_mul_pd(qi, vr)));
            };

            __m256d nar, nai, nbr, nbi, ncr, nci, ndr, ndi;
            cmuladd(s00r, s00i, ar, ai, s01r, s01i, cr, ci, nar, nai);
            cmuladd(s00r, s00i, br, bi, s01r, s01i, dr, di, nbr, nbi);
            cmuladd(s10r, s10i, ar, ai, s11r, s11i, cr, ci, ncr, nci);
            cmuladd(s10r, s10i, br, bi, s11r, s11i, dr, di, ndr, ndi);
            ar = nar; ai = nai; br = nbr; bi = nbi;
            cr = ncr; ci = nci; dr = ndr; di = ndi;
        }

        double uar[4], uai[4], ubr[4], ubi[4], ucr[4], uci[4], udr[4], udi[4];
        _mm256_storeu_pd(uar, ar); _mm256_storeu_pd(uai, ai);
        _mm256_storeu_pd(ubr, br); _mm256_storeu_pd(ubi, bi);
        _mm256_storeu_pd(ucr, cr); _mm256_storeu_pd(uci, ci);
        _mm256_storeu_pd(udr, dr); _mm256_storeu_pd(udi, di);

        const double* id = args.ideal;
        for (int l = 0; l < 4; ++l) {
            const double p00 = (id[0] * uar[l] + id[1] * uai[l]);
            const double p01 = (id[2] * ubr[l] + id[3] * ubi[l]);
            const double p10 = (id[4] * ucr[l] + id[5] * uci[l]);
            const double p11 = (id[6] * udr[l] + id[7] * udi[l]);
            const double q00 = (id[0] * uai[l] - id[1] * uar[l]);
            const double q01 = (id[2] * ubi[l] - id[3] * ubr[l]);
            const double q10 = (id[4] * uci[l] - id[5] * ucr[l]);
            const double q11 = (id[6] * udi[l] - id[7] * udr[l]);
            const double tre = (p00 + p01) + (p10 + p11);
            const double tim = (q00 + q01) + (q10 + q11);
            double infid = 1.0 - 0.25 * (tre * tre + tim * tim);
            if (infid < 0.0) infid = 0.0;
            if (infid > 1.0) infid = 1.0;
            args.infidelities[t + l] = infid;
        }
    }

    if (full < args.batch) {
        // Tail trajectories run through the scalar reference, which is
        // bit-identical by construction.
        Su2BatchArgs tail = args;
        tail.eps = nullptr;  // re-pointed below; layout is step-major
        const std::size_t rem = args.batch - full;
        // Gather the tail lanes into a compact buffer.
        thread_local std::vector<double> eps_buf, jz_buf;
        eps_buf.resize(args.n_steps * rem);
        for (std::size_t j = 0; j < args.n_steps; ++j)
            for (std::size_t l = 0; l < rem; ++l)
                eps_buf[j * rem + l] = args.eps[j * args.batch + full + l];
        tail.eps = eps_buf.data();
        if (args.jz) {
            jz_buf.resize(args.n_steps * rem);
            for (std::size_t j = 0; j < args.n_steps; ++j)
                for (std::size_t l = 0; l < rem; ++l)
                    jz_buf[j * rem + l] = args.jz[j * args.batch + full + l];
            tail.jz = jz_buf.data();
        }
        tail.batch = rem;
        tail.infidelities = args.infidelities + full;
        scalar_ops().su2_batch_infidelity(tail);
    }
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{
        "avx2",         sum_avx2,
        dot_avx2,       lagged_dot_avx2,
        toeplitz_quadform_avx2, su2_batch_avx2,
    };
    return ops;
}

}  // namespace qoc::kernels
