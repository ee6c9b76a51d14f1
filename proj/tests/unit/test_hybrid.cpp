// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "duoplanck/errors.hpp"
#include "duoplanck/hybrid.hpp"
#include "oracles.hpp"

using namespace duoplanck;

namespace {

PhaseExpression mono(double c, int qp, int pp) {
  PhaseExpression e;
  e.monomials.push_back({c, qp, pp});
  return e;
}

PhaseExpression blob(double q0, double p0, double s) {
  PhaseExpression e;
  e.gaussians.push_back({1.0, q0, p0, s, s});
  return e;
}

const PhaseGrid kGrid(-3.0, 3.0, -3.0, 3.0, 24, 24);

// A state that is not a product: the Bloch vector rotates across phase space.
OperatorField entangled_state(const PhaseGrid& g) {
  OperatorField rho(g, 2);
  const ScalarField w = sample(blob(0.2, -0.1, 0.6), g).value;
  for (Eigen::Index i = 0; i < g.nq(); ++i) {
    for (Eigen::Index j = 0; j < g.np(); ++j) {
      const double th = 0.7 * g.q(i) - 0.4 * g.p(j);
      ComplexMatrix s = 0.5 * identity(2) + 0.4 * (std::cos(th) * pauli_x() + std::sin(th) * pauli_y());
      rho.node(g.index(i, j)) = w(i, j) * s;
    }
  }
  const double mass = integrate_field(rho).trace().real();
  rho *= Complex{1.0 / mass, 0.0};
  return rho;
}

HybridModel general_model(const PhaseGrid& g) {
  PhaseExpression h2 = mono(0.5, 0, 2);
  h2.monomials.push_back({0.3, 2, 0});
  PhaseExpression j2b = mono(1.0, 0, 1);
  j2b.gaussians.push_back({0.5, 0.0, 0.0, 1.0, 1.0});
  RealMatrix lam(2, 2);
  lam << 1.5, 0.3, 0.3, 0.8;
  return HybridModel(0.9, 0.4 * pauli_x(), sample(h2, g),
                     {{pauli_z(), sample(mono(1.0, 1, 0), g)}, {pauli_x(), sample(j2b, g)}}, lam);
}

} // namespace

TEST_CASE("hamiltonian field") {
  const PhaseGrid& g = kGrid;
  const HybridModel free(1.0, pauli_x(), sample(PhaseExpression{}, g), {},
                         RealMatrix::Zero(0, 0));
  for (Eigen::Index n = 0; n < g.nodes(); ++n) {
    CHECK(oracle::max_abs(free.hamiltonian().node(n) - pauli_x()) == 0.0);
  }
  const HybridModel m = general_model(g);
  const Eigen::Index i = 5;
  const Eigen::Index j = 17;
  const double q = g.q(i);
  const double p = g.p(j);
  const ComplexMatrix expect = 0.4 * pauli_x() + (0.5 * p * p + 0.3 * q * q) * identity(2) +
                               q * pauli_z() +
                               (p + 0.5 * std::exp(-q * q / 2 - p * p / 2)) * pauli_x();
  CHECK(oracle::max_abs(m.hamiltonian().node(g.index(i, j)) - expect) <= 1e-12);
  for (Eigen::Index n = 0; n < g.nodes(); ++n) {
    CHECK(hermiticity_defect(m.hamiltonian().node(n)) <= 1e-12);
  }
}

TEST_CASE("model validation") {
  const PhaseGrid& g = kGrid;
  const GradedField q = sample(mono(1.0, 1, 0), g);
  CHECK_THROWS_AS(HybridModel(0.0, pauli_x(), sample(PhaseExpression{}, g), {{pauli_z(), q}},
                              RealMatrix::Identity(1, 1)),
                  UsageError);
  RealMatrix bad(1, 1);
  bad << -1.0;
  CHECK_THROWS_WITH_AS(HybridModel(1.0, pauli_x(), sample(PhaseExpression{}, g), {{pauli_z(), q}}, bad),
                       doctest::Contains("lambda must be positive definite"), UsageError);
  CHECK_THROWS_AS(HybridModel(1.0, pauli_x(), sample(PhaseExpression{}, g), {{pauli_z(), q}},
                              RealMatrix::Identity(2, 2)),
                  UsageError);
}

TEST_CASE("aleksandrov rhs limits") {
  const PhaseGrid& g = kGrid;
  const OperatorField rho = entangled_state(g);
  SUBCASE("purely quantum: pointwise von Neumann") {
    const HybridModel m(0.7, pauli_y(), sample(PhaseExpression{}, g), {}, RealMatrix::Zero(0, 0));
    const OperatorField r = aleksandrov_rhs(rho, m);
    for (Eigen::Index n = 0; n < g.nodes(); ++n) {
      const ComplexMatrix x = rho.node(n);
      CHECK(oracle::max_abs(r.node(n) - (-kI / 0.7) * commutator(pauli_y(), x)) <= 1e-13);
    }
  }
  SUBCASE("purely classical: Liouville transport of each entry") {
    const HybridModel m(1.0, ComplexMatrix::Zero(2, 2), sample(mono(0.5, 0, 2), g), {},
                        RealMatrix::Zero(0, 0));
    const OperatorField r = aleksandrov_rhs(rho, m);
    const OperatorField dq = d_dq(rho);
    for (Eigen::Index i = 0; i < g.nq(); ++i) {
      for (Eigen::Index j = 0; j < g.np(); ++j) {
        const Eigen::Index n = g.index(i, j);
        const ComplexMatrix expect = -g.p(j) * ComplexMatrix(dq.node(n));
        CHECK(oracle::max_abs(r.node(n) - expect) <= 1e-12);
      }
    }
  }
}

TEST_CASE("hybrid rhs conserves trace and hermiticity") {
  const PhaseGrid& g = kGrid;
  const HybridModel m = general_model(g);
  const OperatorField rho = entangled_state(g);
  for (const OperatorField& r : {aleksandrov_rhs(rho, m), hybrid_rhs(rho, m)}) {
    CHECK(std::abs(integrate_field(r).trace()) <= 1e-10);
    CHECK(pointwise_hermiticity_defect(r) <= 1e-12);
  }
}

TEST_CASE("single-current path agrees with the general one") {
  const PhaseGrid& g = kGrid;
  PhaseExpression h2 = mono(0.5, 0, 2);
  h2.monomials.push_back({0.5, 2, 0});
  const HybridModel m(1.1, 0.3 * pauli_x(), sample(h2, g), {{pauli_z(), sample(mono(1.0, 1, 0), g)}},
                      RealMatrix::Constant(1, 1, 0.7));
  const OperatorField rho = entangled_state(g);
  const OperatorField a = hybrid_rhs(rho, m);
  const OperatorField b = hybrid_rhs_single_current(rho, m);
  double err = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    err = std::max(err, std::abs(a.data()[k] - b.data()[k]));
  }
  CHECK(err <= 1e-12);
  CHECK_THROWS_AS(hybrid_rhs_single_current(rho, general_model(g)), UsageError);
}

TEST_CASE("noisy aleksandrov rhs") {
  const PhaseGrid& g = kGrid;
  const HybridModel m = general_model(g);
  const OperatorField rho = entangled_state(g);
  const OperatorField base = aleksandrov_rhs(rho, m);
  const auto diff = [&](const OperatorField& x, const OperatorField& y) {
    double e = 0.0;
    for (std::size_t k = 0; k < x.data().size(); ++k) {
      e = std::max(e, std::abs(x.data()[k] - y.data()[k]));
    }
    return e;
  };
  CHECK(diff(noisy_aleksandrov_rhs(rho, m, {0.0, 0.0}, {0.0, 0.0}), base) == 0.0);

  const double a = 0.8;
  OperatorField expect2 = base;
  for (Eigen::Index n = 0; n < g.nodes(); ++n) {
    const ComplexMatrix x = rho.node(n);
    expect2.node(n) += (-kI * a / m.hbar()) * commutator(pauli_x(), x);
  }
  CHECK(diff(noisy_aleksandrov_rhs(rho, m, {0.0, 0.0}, {0.0, a}), expect2) <= 1e-12);

  // The J1 noise is a c-number times J2(q) = q: transport along p only.
  const OperatorField drift = noisy_aleksandrov_rhs(rho, m, {a, 0.0}, {0.0, 0.0}) - base;
  const OperatorField dp = d_dp(rho);
  CHECK(diff(drift, a * dp) <= 1e-12);
  CHECK_THROWS_AS(noisy_aleksandrov_rhs(rho, m, {0.0}, {0.0, 0.0}), UsageError);
}

TEST_CASE("noise intensities") {
  const PhaseGrid& g = kGrid;
  const HybridModel m(1.0, pauli_x(), sample(PhaseExpression{}, g),
                      {{pauli_z(), sample(mono(1.0, 1, 0), g)}}, RealMatrix::Constant(1, 1, 2.0));
  const HybridNoiseSpec s = HybridNoiseSpec::from_model(m);
  const double dt = 0.01;
  CHECK(s.intensity1(0, 0) / dt == doctest::Approx(25.0));
  CHECK(s.intensity2(0, 0) / dt == doctest::Approx(100.0));
}

TEST_CASE("reductions") {
  const PhaseGrid g(-6.0, 6.0, -6.0, 6.0, 64, 64);
  ComplexMatrix sigma(2, 2);
  sigma << 0.7, Complex(0.1, -0.2), Complex(0.1, 0.2), 0.3;
  const OperatorField rho = make_product_state(sigma, sample(blob(0.5, -0.3, 0.7), g).value);
  CHECK(oracle::max_abs(reduce_to_quantum(rho) - sigma) <= 1e-12);
  const ScalarField w = reduce_to_classical(rho);
  CHECK(integrate_field(w) == doctest::Approx(1.0).epsilon(1e-12));
  const ClassicalMoments mo = classical_moments(w);
  CHECK(mo.mean_q == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(mo.mean_p == doctest::Approx(-0.3).epsilon(1e-8));
  CHECK(mo.cov(0, 0) == doctest::Approx(0.49).epsilon(1e-6));

  const OperatorField e = entangled_state(kGrid);
  ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
  for (Eigen::Index n = 0; n < kGrid.nodes(); ++n) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        sum(a, b) += e.data()[static_cast<std::size_t>(n * 4 + a * 2 + b)];
      }
    }
  }
  CHECK(oracle::max_abs(reduce_to_quantum(e) - sum * kGrid.cell_area()) <= 1e-14);
  CHECK(std::abs(reduce_to_quantum(e).trace() - 1.0) <= 1e-12);
  CHECK_THROWS_AS(make_product_state(sigma, ScalarField(g)), UsageError);
}

TEST_CASE("pointwise diagnostics") {
  const PhaseGrid g(-1.0, 1.0, -1.0, 1.0, 8, 8);
  OperatorField rho(g, 2);
  rho.fill(0.5 * identity(2));
  rho.node(10) = pauli_z();
  CHECK(pointwise_min_eigenvalue(rho) == doctest::Approx(-1.0));
  CHECK(pointwise_hermiticity_defect(rho) == 0.0);
  rho.node(3)(0, 1) = kI;
  CHECK(pointwise_hermiticity_defect(rho) > 0.0);
}
