#include "ftm/density_matrix.hpp"

#include <cmath>

namespace ftm {

Mat2 Mat2::operator+(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.e[i] = e[i] + o.e[i];
    return r;
}

Mat2 Mat2::operator-(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.e[i] = e[i] - o.e[i];
    return r;
}

Mat2 Mat2::operator*(const Mat2& o) const {
    Mat2 r;
    r.e[0] = e[0] * o.e[0] + e[1] * o.e[2];
    r.e[1] = e[0] * o.e[1] + e[1] * o.e[3];
    r.e[2] = e[2] * o.e[0] + e[3] * o.e[2];
    r.e[3] = e[2] * o.e[1] + e[3] * o.e[3];
    return r;
}

Mat2 Mat2::adjoint() const {
    Mat2 r;
    r.e[0] = std::conj(e[0]);
    r.e[1] = std::conj(e[2]);
    r.e[2] = std::conj(e[1]);
    r.e[3] = std::conj(e[3]);
    return r;
}

Mat2 operator*(cplx s, const Mat2& m) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.e[i] = s * m.e[i];
    return r;
}

Mat2 pauli_x() { return Mat2{{cplx(0), cplx(1), cplx(1), cplx(0)}}; }
Mat2 pauli_y() {
    return Mat2{{cplx(0), cplx(0, -1), cplx(0, 1), cplx(0)}};
}
Mat2 pauli_z() { return Mat2{{cplx(1), cplx(0), cplx(0), cplx(-1)}}; }
Mat2 identity2() { return Mat2{{cplx(1), cplx(0), cplx(0), cplx(1)}}; }

Mat2 DensityMatrix::matrix() const {
    return Mat2{{cplx(rho11), rho12, std::conj(rho12), cplx(1.0 - rho11)}};
}

DensityMatrix make_density(double rho11, cplx rho12, Basis basis) {
    if (!std::isfinite(rho11) || !std::isfinite(rho12.real()) ||
        !std::isfinite(rho12.imag()))
        throw RangeError("density matrix entries must be finite");
    if (rho11 < -1e-12 || rho11 > 1.0 + 1e-12)
        throw RangeError("rho11 must lie in [0, 1]");
    DensityMatrix s;
    s.rho11 = rho11;
    s.rho12 = rho12;
    s.basis = basis;
    if (min_eigenvalue(s) < -1e-12)
        throw PositivityError("state has a negative eigenvalue");
    return s;
}

double min_eigenvalue(const DensityMatrix& state) {
    double d = 2.0 * state.rho11 - 1.0;
    return 0.5 * (1.0 - std::sqrt(d * d + 4.0 * std::norm(state.rho12)));
}

DensityMatrix to_x_basis(const DensityMatrix& state) {
    DensityMatrix r;
    r.rho11 = 0.5 + state.rho12.real();
    r.rho12 = cplx(state.rho11 - 0.5, -state.rho12.imag());
    r.basis = state.basis == Basis::Z ? Basis::X : Basis::Z;
    return r;
}

double expect(const Mat2& op, const DensityMatrix& state) {
    return (op * state.matrix()).trace().real();
}

double max_abs_diff(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.basis != b.basis)
        throw BasisError("states are expressed in different bases");
    return std::max(std::abs(a.rho11 - b.rho11), std::abs(a.rho12 - b.rho12));
}

} // namespace ftm
