#pragma once

#include <array>
#include <complex>

#include "ftm/errors.hpp"

namespace ftm {

using cplx = std::complex<double>;

// Dense 2x2 complex matrix, row-major. Small enough that everything is by
// value.
struct Mat2 {
    std::array<cplx, 4> e{};

    cplx& operator()(int i, int j) { return e[2 * i + j]; }
    const cplx& operator()(int i, int j) const { return e[2 * i + j]; }

    Mat2 operator+(const Mat2& o) const;
    Mat2 operator-(const Mat2& o) const;
    Mat2 operator*(const Mat2& o) const;
    Mat2 adjoint() const;
    cplx trace() const { return e[0] + e[3]; }
};

Mat2 operator*(cplx s, const Mat2& m);

Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
Mat2 identity2();

enum class Basis { Z, X };

// Qubit state stored as (rho11, rho12) so the trace is exactly 1 and
// Hermiticity holds by construction. basis marks which measurement basis the
// entries refer to.
struct DensityMatrix {
    double rho11 = 1.0;
    cplx rho12{0.0, 0.0};
    Basis basis = Basis::Z;

    double rho22() const { return 1.0 - rho11; }
    cplx rho21() const { return std::conj(rho12); }
    Mat2 matrix() const;
};

// Validating constructor: rho11 must sit in [0,1] and the state must be
// positive semidefinite (up to a 1e-12 tolerance).
DensityMatrix make_density(double rho11, cplx rho12, Basis basis = Basis::Z);

// Smaller eigenvalue of the state, from the closed 2x2 form.
double min_eigenvalue(const DensityMatrix& state);

// Conjugation by the basis-exchange involution (the Hadamard matrix): maps a
// Z-basis representation to the X-basis one and back. Applying it twice is
// the identity.
DensityMatrix to_x_basis(const DensityMatrix& state);

// Real expectation value tr(op * rho) of a Hermitian op.
double expect(const Mat2& op, const DensityMatrix& state);

// Largest entrywise deviation between two states in the same basis.
double max_abs_diff(const DensityMatrix& a, const DensityMatrix& b);

} // namespace ftm
