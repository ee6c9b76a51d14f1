// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "duoplanck/errors.hpp"
#include "duoplanck/operator_core.hpp"
#include "oracles.hpp"

using namespace duoplanck;

TEST_CASE("commutator examples") {
  CHECK(oracle::max_abs(commutator(pauli_x(), pauli_y()) - 2.0 * kI * pauli_z()) == 0.0);
  std::mt19937_64 rng(1);
  const ComplexMatrix a = oracle::random_matrix(rng, 3);
  CHECK(oracle::max_abs(commutator(a, a)) <= 1e-14);
  const ComplexMatrix b = oracle::random_matrix(rng, 3);
  CHECK(oracle::max_abs(commutator(a, b) - oracle::commutator_loops(a, b)) <= 1e-13);
}

TEST_CASE("anticommutator examples") {
  CHECK(oracle::max_abs(anticommutator(pauli_x(), pauli_x()) - 2.0 * identity(2)) == 0.0);
  std::mt19937_64 rng(2);
  const ComplexMatrix a = oracle::random_matrix(rng, 3);
  const ComplexMatrix b = oracle::random_matrix(rng, 3);
  CHECK(oracle::max_abs(anticommutator(identity(3), b) - 2.0 * b) <= 1e-15);
  CHECK(oracle::max_abs(anticommutator(a, b) - oracle::anticommutator_loops(a, b)) <= 1e-13);
}

TEST_CASE("commutator rejects mismatched shapes") {
  CHECK_THROWS_AS(commutator(identity(2), identity(3)), UsageError);
}

TEST_CASE("min eigenvalue") {
  CHECK(min_eigenvalue(identity(2)) == doctest::Approx(1.0));
  CHECK(min_eigenvalue(pauli_z()) == doctest::Approx(-1.0));
  ComplexMatrix m(2, 2);
  m << 2, 1, 1, 2;
  CHECK(min_eigenvalue(HermitianOperator(m)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("spectrum is unitarily invariant") {
  std::mt19937_64 rng(3);
  const ComplexMatrix h = oracle::random_hermitian(rng, 5);
  const Eigen::HouseholderQR<ComplexMatrix> qr(oracle::random_matrix(rng, 5));
  const ComplexMatrix u = qr.householderQ();
  const RealVector a = hermitian_eigenvalues(h);
  const RealVector b = hermitian_eigenvalues(u * h * u.adjoint());
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("tensor product") {
  CHECK(oracle::max_abs(tensor(identity(2), identity(2)) - identity(4)) == 0.0);
  std::mt19937_64 rng(4);
  const ComplexMatrix a = oracle::random_matrix(rng, 2);
  const ComplexMatrix b = oracle::random_matrix(rng, 3);
  const ComplexMatrix t = tensor(a, b);
  CHECK(std::abs(t.trace() - a.trace() * b.trace()) <= 1e-13);
  const ComplexMatrix zx = tensor(pauli_z(), pauli_x());
  const ComplexMatrix z = pauli_z();
  const ComplexMatrix x = pauli_x();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int a2 = 0; a2 < 2; ++a2) {
        for (int b2 = 0; b2 < 2; ++b2) {
          CHECK(zx(i * 2 + a2, j * 2 + b2) == z(i, j) * x(a2, b2));
        }
      }
    }
  }
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(5);
  const ComplexMatrix a = oracle::random_matrix(rng, 2);
  const ComplexMatrix b = oracle::random_matrix(rng, 3);
  const ComplexMatrix ab = tensor(a, b);
  CHECK(oracle::max_abs(partial_trace(ab, 2, 3, 1) - b.trace() * a) <= 1e-13);
  CHECK(oracle::max_abs(partial_trace(ab, 2, 3, 2) - a.trace() * b) <= 1e-13);
  CHECK(std::abs(partial_trace(ab, 2, 3, 1).trace() - ab.trace()) <= 1e-13);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix p = bell * bell.adjoint();
  CHECK(oracle::max_abs(partial_trace(p, 2, 2, 1) - 0.5 * identity(2)) <= 1e-15);
  CHECK(oracle::max_abs(partial_trace(p, 2, 2, 2) - 0.5 * identity(2)) <= 1e-15);
  CHECK_THROWS_AS(partial_trace(p, 2, 2, 3), UsageError);
  CHECK_THROWS_AS(partial_trace(p, 3, 2, 1), UsageError);
}

TEST_CASE("purity and trace distance") {
  ComplexMatrix up = ComplexMatrix::Zero(2, 2);
  up(0, 0) = 1.0;
  ComplexMatrix down = ComplexMatrix::Zero(2, 2);
  down(1, 1) = 1.0;
  CHECK(purity(up) == doctest::Approx(1.0));
  CHECK(purity(0.5 * identity(2)) == doctest::Approx(0.5));
  CHECK(trace_distance(up, down) == doctest::Approx(1.0));
  CHECK(trace_distance(up, up) == doctest::Approx(0.0));
}

TEST_CASE("validated operator types") {
  CHECK_THROWS_AS(HermitianOperator(pauli_x() + kI * identity(2)), UsageError);
  ComplexMatrix bad = pauli_z();
  CHECK_THROWS_AS(DensityOperator{bad}, UsageError);
  CHECK_THROWS_AS(DensityOperator{identity(2)}, UsageError);
  CHECK_NOTHROW(DensityOperator{0.5 * identity(2)});
  ComplexVector psi(2);
  psi << 1.0, kI;
  psi /= std::sqrt(2.0);
  CHECK(purity(DensityOperator::pure(psi).matrix()) == doctest::Approx(1.0));
  ComplexMatrix nan = identity(2);
  nan(0, 1) = std::nan("");
  CHECK_THROWS_AS(require_square_finite(nan, "m"), UsageError);
}
