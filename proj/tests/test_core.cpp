#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qgeom/linalg.hpp"
#include "qgeom/models/two_level.hpp"

using namespace qgeom;
using models::pauli_x;
using models::pauli_y;
using models::pauli_z;

namespace {

CMatrix random_hermitian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
    return (a + a.adjoint()) / 2;
}

CMatrix random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<CMatrix> qr(a);
    return qr.householderQ();
}

} // namespace

TEST_CASE("eigendecompose: identity matrix") {
    EigenSystem sys = eigendecompose(HermitianOperator(CMatrix::Identity(3, 3)));
    for (int n = 0; n < 3; ++n) CHECK(sys.energies[n] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_abs(sys.states.adjoint() * sys.states - CMatrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("eigendecompose: already diagonal") {
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = -1;
    d(1, 1) = 2;
    EigenSystem sys = eigendecompose(HermitianOperator(d));
    CHECK(sys.energies[0] == doctest::Approx(-1.0));
    CHECK(sys.energies[1] == doctest::Approx(2.0));
    CHECK(std::abs(sys.states(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(sys.states(1, 1)) == doctest::Approx(1.0));
    CHECK(sys.gap01 == doctest::Approx(3.0));
}

TEST_CASE("eigendecompose: pauli-x") {
    EigenSystem sys = eigendecompose(HermitianOperator(pauli_x));
    CHECK(sys.energies[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(sys.energies[1] == doctest::Approx(1.0).epsilon(1e-14));
    // eigenvectors (1, -1)/sqrt(2) and (1, 1)/sqrt(2) up to phase
    CVector v0 = sys.state(0), v1 = sys.state(1);
    CHECK(std::abs(v0[0] + v0[1]) < 1e-12);
    CHECK(std::abs(v1[0] - v1[1]) < 1e-12);
    CHECK(std::abs(std::abs(v0[0]) - 1 / std::sqrt(2)) < 1e-12);
}

TEST_CASE("eigendecompose rejects a non-Hermitian matrix") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(HermitianOperator{m}, NotHermitian);
}

TEST_CASE("eigendecompose: spectrum invariant under a unitary change of basis") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        CMatrix h = random_hermitian(12, rng);
        CMatrix q = random_unitary(12, rng);
        EigenSystem a = eigendecompose(HermitianOperator(h));
        EigenSystem b = eigendecompose(HermitianOperator(((q * h * q.adjoint()) +
                                                          (q * h * q.adjoint()).adjoint()) / 2));
        CHECK((a.energies - b.energies).cwiseAbs().maxCoeff() < 1e-10 * a.h_scale);
    }
}

TEST_CASE("eigendecompose: completeness of the eigenbasis") {
    std::mt19937_64 rng(11);
    CMatrix h = random_hermitian(20, rng);
    EigenSystem sys = eigendecompose(HermitianOperator(h));
    CMatrix sum = CMatrix::Zero(20, 20);
    for (int n = 0; n < 20; ++n) sum += sys.state(n) * sys.state(n).adjoint();
    CHECK(max_abs(sum - CMatrix::Identity(20, 20)) < 1e-10);
    // pairwise orthonormality
    CHECK(max_abs(sys.states.adjoint() * sys.states - CMatrix::Identity(20, 20)) < 1e-10);
    // residual invariant
    CHECK(sys.residual < 1e-10 * std::max(1.0, sys.h_scale));
}

TEST_CASE("eigendecompose: deterministic phase fixing") {
    std::mt19937_64 rng(3);
    CMatrix h = random_hermitian(9, rng);
    EigenSystem a = eigendecompose(HermitianOperator(h));
    EigenSystem b = eigendecompose(HermitianOperator(h));
    CHECK(max_abs(a.states - b.states) == 0.0);
}

TEST_CASE("degenerate ground state is flagged, not thrown, by eigendecompose") {
    EigenSystem sys = eigendecompose(HermitianOperator(CMatrix::Identity(4, 4)));
    CHECK(sys.ground_degenerate());
    CMatrix d = CMatrix::Zero(2, 2);
    d(1, 1) = 1.0;
    CHECK_FALSE(eigendecompose(HermitianOperator(d)).ground_degenerate());
}

TEST_CASE("expectation: identity on any normalized state") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    CVector v(6);
    for (int i = 0; i < 6; ++i) v[i] = Complex(g(rng), g(rng));
    StateVector psi(v);
    psi.normalize();
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expectation(HermitianOperator(CMatrix::Identity(6, 6)), psi) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("expectation: eigenstate picks out its eigenvalue") {
    CMatrix d = CMatrix::Zero(2, 2);
    d(1, 1) = 5.0;
    CVector v(2);
    v << 1, 0;
    CHECK(expectation(HermitianOperator(d), StateVector(v)) == doctest::Approx(0.0));
}

TEST_CASE("expectation: pauli-x on the symmetric combination") {
    CVector v(2);
    v << 1 / std::sqrt(2), 1 / std::sqrt(2);
    CHECK(expectation(HermitianOperator(pauli_x), StateVector(v)) == doctest::Approx(1.0));
}

TEST_CASE("expectation: dimension mismatch and realness") {
    CVector v(3);
    v << 1, 0, 0;
    CHECK_THROWS_AS(expectation(HermitianOperator(pauli_x), StateVector(v)), DimensionMismatch);

    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        CMatrix h = random_hermitian(8, rng);
        CVector w(8);
        for (int i = 0; i < 8; ++i) w[i] = Complex(g(rng), g(rng));
        w /= w.norm();
        CHECK_NOTHROW(expectation(h, w)); // imaginary residual below threshold
    }
}

TEST_CASE("commutator: basic identities") {
    CHECK(max_abs(commutator(pauli_x, pauli_x)) == 0.0);

    CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
    a(0, 0) = 1.1;
    a(1, 1) = -0.3;
    b(0, 0) = 0.2;
    b(1, 1) = 4.0;
    CHECK(max_abs(commutator(a, b)) == 0.0);

    // [sx, sy] = 2i sz
    CMatrix c = commutator(pauli_x, pauli_y);
    CHECK(max_abs(c - Complex(0, 2) * pauli_z) < 1e-14);
}

TEST_CASE("commutator of Hermitian operators is anti-Hermitian") {
    std::mt19937_64 rng(23);
    CMatrix a = random_hermitian(10, rng), b = random_hermitian(10, rng);
    CMatrix c = commutator(a, b);
    CHECK(max_abs(c + c.adjoint()) < 1e-12 * std::max(1.0, max_abs(c)));
}

TEST_CASE("state vector normalization and zero-state failure") {
    CVector v(2);
    v << 3, 4;
    StateVector psi(v);
    psi.normalize();
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CVector z = CVector::Zero(2);
    StateVector bad(z);
    CHECK_THROWS_AS(bad.normalize(), NumericalFailure);
}
