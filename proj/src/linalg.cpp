#include "qgeom/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qgeom {

double max_abs(const CMatrix& M) {
    return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

StateVector::StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0)
        throw InvalidParameter("state vector must have positive dimension");
}

void StateVector::normalize() {
    double n = amps_.norm();
    if (n < 1e-300)
        throw NumericalFailure("cannot normalize a zero state vector");
    amps_ /= n;
}

HermitianOperator::HermitianOperator(CMatrix entries, double tol) : mat_(std::move(entries)) {
    if (mat_.rows() == 0 || mat_.rows() != mat_.cols())
        throw InvalidParameter("operator must be square with positive dimension");
    double scale = std::max(1.0, max_abs(mat_));
    double dev = max_abs(mat_ - mat_.adjoint());
    if (dev > tol * scale)
        throw NotHermitian("max |M - M^dag| = " + std::to_string(dev));
}

bool EigenSystem::ground_degenerate(double rel_tol) const {
    if (dim() < 2) return false;
    return gap01 < rel_tol * std::max(h_scale, 1e-300);
}

namespace {

// Largest-modulus component real positive; ties resolved to the lowest index.
void fix_phase(Eigen::Ref<CVector> v) {
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < v.size(); ++i) {
        double a = std::abs(v[i]);
        if (a > best + 1e-15) {
            best = a;
            imax = i;
        }
    }
    Complex z = v[imax];
    if (std::abs(z) > 0) v *= std::conj(z) / std::abs(z);
}

} // namespace

EigenSystem eigendecompose(const HermitianOperator& H) {
    const CMatrix& M = H.matrix();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(M);
    if (solver.info() != Eigen::Success)
        throw NumericalFailure("eigensolver did not converge");

    EigenSystem sys;
    sys.energies = solver.eigenvalues();
    sys.states = solver.eigenvectors();
    for (int n = 0; n < sys.states.cols(); ++n) fix_phase(sys.states.col(n));

    sys.h_scale = std::max(std::abs(sys.energies[0]),
                           std::abs(sys.energies[sys.dim() - 1]));
    sys.gap01 = sys.dim() > 1 ? sys.energies[1] - sys.energies[0] : 0.0;
    sys.residual = max_abs(M * sys.states - sys.states * sys.energies.asDiagonal().toDenseMatrix());
    if (sys.residual > 1e-10 * std::max(1.0, sys.h_scale))
        throw NumericalFailure("eigendecomposition residual " + std::to_string(sys.residual));
    return sys;
}

double expectation(const CMatrix& O, const CVector& psi, double imag_tol) {
    if (O.rows() != psi.size())
        throw DimensionMismatch("operator dim " + std::to_string(O.rows()) +
                                " vs state dim " + std::to_string(psi.size()));
    Complex q = psi.dot(O * psi);
    double scale = std::max(1.0, std::abs(q));
    if (std::abs(q.imag()) > imag_tol * scale)
        throw NumericalFailure("expectation has imaginary residual " + std::to_string(q.imag()));
    return q.real();
}

double expectation(const HermitianOperator& O, const StateVector& psi, double imag_tol) {
    return expectation(O.matrix(), psi.amplitudes(), imag_tol);
}

CMatrix commutator(const CMatrix& A, const CMatrix& B) {
    if (A.rows() != B.rows())
        throw DimensionMismatch("commutator of dim " + std::to_string(A.rows()) +
                                " with dim " + std::to_string(B.rows()));
    return A * B - B * A;
}

CMatrix commutator(const HermitianOperator& A, const HermitianOperator& B) {
    return commutator(A.matrix(), B.matrix());
}

} // namespace qgeom
