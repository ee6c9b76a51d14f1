// SPDX-License-Identifier: Apache-2.0
//
// Dense complex matrix algebra for finite-dimensional quantum operators.
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace duoplanck {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

/// Hermiticity tolerance applied when an operator is constructed.
inline constexpr double kHermitianTolerance = 1e-12;
/// Looser hermiticity tolerance for states produced by time integration.
inline constexpr double kEvolvedHermitianTolerance = 1e-9;

/// Throws UsageError unless `m` is square with finite entries.
void require_square_finite(const ComplexMatrix& m, const char* what);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |M - M^dagger| over all entries.
double hermiticity_defect(const ComplexMatrix& m);

/// Ascending spectrum of the Hermitian part (M + M^dagger)/2.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Trace over one factor of a d1*d2 dimensional operator. `keep` is 1 or 2.
ComplexMatrix partial_trace(const ComplexMatrix& m, Eigen::Index d1,
                            Eigen::Index d2, int keep);

/// tr(rho^2), real part.
double purity(const ComplexMatrix& rho);

/// Half the trace norm of (a - b), both taken Hermitian.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix identity(Eigen::Index d);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Observable-like operator: square, finite, hermiticity defect <= tolerance.
class HermitianOperator {
public:
  explicit HermitianOperator(ComplexMatrix m,
                             double tolerance = kHermitianTolerance);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

private:
  ComplexMatrix m_;
};

/// Unit-trace, positive semidefinite Hermitian operator.
class DensityOperator {
public:
  explicit DensityOperator(ComplexMatrix m, double trace_tolerance = 1e-10,
                           double eigen_tolerance = 1e-10);

  /// Pure state |psi><psi| from a normalized vector.
  static DensityOperator pure(const ComplexVector& psi);

  const ComplexMatrix& matrix() const noexcept { return op_.matrix(); }
  const HermitianOperator& hermitian() const noexcept { return op_; }
  Eigen::Index dim() const noexcept { return op_.dim(); }

private:
  HermitianOperator op_;
};

double min_eigenvalue(const HermitianOperator& a);
/// Same as above on the Hermitian part of an unchecked matrix.
double min_eigenvalue(const ComplexMatrix& a);

} // namespace duoplanck
