#ifndef QGEOM_LINALG_HPP
#define QGEOM_LINALG_HPP

#include <Eigen/Dense>
#include <complex>

#include "qgeom/errors.hpp"

namespace qgeom {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Normalized state on a finite Hilbert space.
class StateVector {
public:
    explicit StateVector(CVector amplitudes);

    int dim() const { return static_cast<int>(amps_.size()); }
    const CVector& amplitudes() const { return amps_; }
    double norm() const { return amps_.norm(); }

    // Rescales to unit norm; throws NumericalFailure on a zero vector.
    void normalize();

private:
    CVector amps_;
};

// Dense self-adjoint operator. Construction enforces max|M - M^dag| below
// an absolute tolerance scaled by the largest entry.
class HermitianOperator {
public:
    explicit HermitianOperator(CMatrix entries, double tol = 1e-12);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const CMatrix& matrix() const { return mat_; }

private:
    CMatrix mat_;
};

// Full spectrum of a HermitianOperator: ascending energies, phase-fixed
// orthonormal eigenvectors (columns), plus gap diagnostics.
struct EigenSystem {
    RVector energies;
    CMatrix states;     // column n = |Psi_n>
    double gap01 = 0.0; // E_1 - E_0 (0 for dim-1 spaces)
    double residual = 0.0;
    double h_scale = 0.0; // max |E_n|, used for relative thresholds

    int dim() const { return static_cast<int>(energies.size()); }
    CVector state(int n) const { return states.col(n); }

    // Relative ground-state degeneracy test: gap01 < rel_tol * h_scale.
    bool ground_degenerate(double rel_tol = 1e-9) const;
};

// Dense eigendecomposition. Deterministic: each eigenvector's
// largest-modulus component is made real positive (lowest index on ties).
EigenSystem eigendecompose(const HermitianOperator& H);

// <psi|O|psi>; the imaginary residual of the quadratic form must stay below
// `imag_tol` or NumericalFailure is thrown.
double expectation(const HermitianOperator& O, const StateVector& psi,
                   double imag_tol = 1e-12);
double expectation(const CMatrix& O, const CVector& psi, double imag_tol = 1e-12);

// AB - BA (anti-Hermitian for Hermitian A, B).
CMatrix commutator(const HermitianOperator& A, const HermitianOperator& B);
CMatrix commutator(const CMatrix& A, const CMatrix& B);

// max |M| entrywise
double max_abs(const CMatrix& M);

} // namespace qgeom

#endif
