// SPDX-License-Identifier: Apache-2.0
#include "duoplanck/operator_core.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "duoplanck/errors.hpp"

namespace duoplanck {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b,
                      const char* what) {
  require_square_finite(a, what);
  require_square_finite(b, what);
  if (a.rows() != b.rows()) {
    throw UsageError(std::string(what) + ": dimension mismatch (" +
                     std::to_string(a.rows()) + " vs " +
                     std::to_string(b.rows()) + ")");
  }
}

} // namespace

void require_square_finite(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw UsageError(std::string(what) + ": matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw UsageError(std::string(what) + ": matrix has non-finite entries");
  }
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  require_square_finite(m, "hermitian_eigenvalues");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw RuntimeError("hermitian_eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues();
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square_finite(a, "tensor");
  require_square_finite(b, "tensor");
  const Eigen::Index da = a.rows();
  const Eigen::Index db = b.rows();
  ComplexMatrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Eigen::Index d1,
                            Eigen::Index d2, int keep) {
  require_square_finite(m, "partial_trace");
  if (d1 <= 0 || d2 <= 0 || m.rows() != d1 * d2) {
    throw UsageError("partial_trace: dimension " + std::to_string(m.rows()) +
                     " is not " + std::to_string(d1) + " x " +
                     std::to_string(d2));
  }
  if (keep == 1) {
    ComplexMatrix out(d1, d1);
    for (Eigen::Index i = 0; i < d1; ++i) {
      for (Eigen::Index j = 0; j < d1; ++j) {
        out(i, j) = m.block(i * d2, j * d2, d2, d2).trace();
      }
    }
    return out;
  }
  if (keep == 2) {
    ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
    for (Eigen::Index i = 0; i < d1; ++i) {
      out += m.block(i * d2, i * d2, d2, d2);
    }
    return out;
  }
  throw UsageError("partial_trace: keep must be 1 or 2");
}

double purity(const ComplexMatrix& rho) {
  // tr(rho rho) without forming the product
  return (rho.transpose().cwiseProduct(rho)).sum().real();
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const RealVector ev = hermitian_eigenvalues(a - b);
  return 0.5 * ev.cwiseAbs().sum();
}

ComplexMatrix identity(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

HermitianOperator::HermitianOperator(ComplexMatrix m, double tolerance)
    : m_(std::move(m)) {
  require_square_finite(m_, "HermitianOperator");
  const double defect = hermiticity_defect(m_);
  if (defect > tolerance) {
    throw UsageError("HermitianOperator: hermiticity defect " +
                     std::to_string(defect) + " exceeds tolerance");
  }
}

DensityOperator::DensityOperator(ComplexMatrix m, double trace_tolerance,
                                 double eigen_tolerance)
    : op_(std::move(m)) {
  const double tr = op_.matrix().trace().real();
  if (std::abs(tr - 1.0) > trace_tolerance) {
    throw UsageError("DensityOperator: trace " + std::to_string(tr) +
                     " differs from 1");
  }
  const double lo = min_eigenvalue(op_);
  if (lo < -eigen_tolerance) {
    throw UsageError("DensityOperator: negative eigenvalue " +
                     std::to_string(lo));
  }
}

DensityOperator DensityOperator::pure(const ComplexVector& psi) {
  return DensityOperator(psi * psi.adjoint());
}

double min_eigenvalue(const HermitianOperator& a) {
  return hermitian_eigenvalues(a.matrix())(0);
}

double min_eigenvalue(const ComplexMatrix& a) {
  return hermitian_eigenvalues(a)(0);
}

} // namespace duoplanck
