#ifndef QOC_SU2_HPP
#define QOC_SU2_HPP

#include <cmath>
#include <complex>

namespace qoc::su2 {

/// 2x2 complex matrix, entries (a b; c d).
struct Mat2c {
    std::complex<double> a{1.0, 0.0}, b{0.0, 0.0};
    std::complex<double> c{0.0, 0.0}, d{1.0, 0.0};

    friend Mat2c operator*(const Mat2c& x, const Mat2c& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }

    Mat2c adjoint() const {
        return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
    }

    std::complex<double> trace() const { return a + d; }
};

inline Mat2c identity() { return {}; }

/// exp(-i (v . sigma) / 2) via the Pauli-vector formula
/// cos(|v|/2) I - i sin(|v|/2) (v/|v|) . sigma.
inline Mat2c pauli_rotation(double vx, double vy, double vz) {
    const double m = std::sqrt(vx * vx + vy * vy + vz * vz);
    const double c = std::cos(0.5 * m);
    const double k = (m > 0.0) ? std::sin(0.5 * m) / m : 0.5;
    const double sx = k * vx, sy = k * vy, sz = k * vz;
    return {{c, -sz}, {-sy, -sx}, {sy, -sx}, {c, sz}};
}

inline Mat2c rx(double angle) { return pauli_rotation(angle, 0.0, 0.0); }

/// |Tr(U_ideal^dag U)|^2 / 4, insensitive to global phase.
inline double gate_fidelity(const Mat2c& ideal, const Mat2c& u) {
    const std::complex<double> t = (ideal.adjoint() * u).trace();
    return 0.25 * std::norm(t);
}

/// max-entry magnitude of U^dag U - I.
inline double unitarity_defect(const Mat2c& u) {
    const Mat2c g = u.adjoint() * u;
    double worst = std::abs(g.a - 1.0);
    worst = std::max(worst, std::abs(g.d - 1.0));
    worst = std::max(worst, std::abs(g.b));
    worst = std::max(worst, std::abs(g.c));
    return worst;
}

}  // namespace qoc::su2

#endif
