// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations and random inputs for the unit tests.
#pragma once

#include <cmath>
#include <random>

#include "duoplanck/operator_core.hpp"

namespace oracle {

using duoplanck::Complex;
using duoplanck::ComplexMatrix;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> n;
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      m(i, j) = Complex(n(rng), n(rng));
    }
  }
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index d) {
  const ComplexMatrix m = random_matrix(rng, d);
  return 0.5 * (m + m.adjoint());
}

inline ComplexMatrix random_density(std::mt19937_64& rng, Eigen::Index d) {
  const ComplexMatrix g = random_matrix(rng, d);
  ComplexMatrix r = g * g.adjoint();
  return r / r.trace();
}

// Plain triple loop, no Eigen products.
inline ComplexMatrix product_loops(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      Complex s = 0.0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) {
        s += a(i, k) * b(k, j);
      }
      out(i, j) = s;
    }
  }
  return out;
}

inline ComplexMatrix commutator_loops(const ComplexMatrix& a, const ComplexMatrix& b) {
  return product_loops(a, b) - product_loops(b, a);
}

inline ComplexMatrix anticommutator_loops(const ComplexMatrix& a, const ComplexMatrix& b) {
  return product_loops(a, b) + product_loops(b, a);
}

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace oracle
