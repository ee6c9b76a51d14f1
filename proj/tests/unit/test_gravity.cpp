// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "duoplanck/errors.hpp"
#include "duoplanck/gravity.hpp"
#include "oracles.hpp"

using namespace duoplanck;

namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(v.size()),
                                        static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

} // namespace

TEST_CASE("kernel") {
  const double G = 0.7;
  const double hbar = 1.3;
  const double d = 2.5;
  const double a = 0.5;
  const MassLattice lat({{0, 0, 0}, {d, 0, 0}}, a);
  const RealMatrix k = build_kernel(lat, G, hbar).matrix;
  CHECK(k(0, 1) == doctest::Approx(G / hbar / d));
  CHECK(k(0, 0) == doctest::Approx(G / hbar / a));
  CHECK(k(0, 1) == k(1, 0));
  CHECK_THROWS_AS(MassLattice({{0, 0, 0}, {0.1, 0, 0}}, 0.5), UsageError);
  CHECK_THROWS_AS(MassLattice({{0, 0, 0}}, 0.0), UsageError);
}

TEST_CASE("newton energy") {
  const double G = 2.0;
  const double m = 1.5;
  const double a = 0.4;
  SUBCASE("single site") {
    const MassLattice lat({{0, 0, 0}}, a);
    const GravityModel model(G, 1.0, 1.0, ComplexMatrix::Zero(2, 2), {m * identity(2)});
    const ComplexMatrix h = newton_energy(model, lat).matrix();
    CHECK(oracle::max_abs(h - (-(G / 2) * m * m / a) * identity(2)) <= 1e-13);
  }
  SUBCASE("two occupied sites") {
    const double d = 1.7;
    const MassLattice lat({{0, 0, 0}, {0, d, 0}}, a);
    // Basis |00>, |01>, |10>, |11> of two occupation numbers.
    const ComplexMatrix fa = m * diag({0, 0, 1, 1});
    const ComplexMatrix fb = m * diag({0, 1, 0, 1});
    const GravityModel without(G, 1.0, 1.0, ComplexMatrix::Zero(4, 4), {fa, fb}, false);
    const ComplexMatrix h = newton_energy(without, lat).matrix();
    CHECK(std::abs(h(3, 3) - (-G * m * m / d)) <= 1e-13);
    CHECK(std::abs(h(1, 1)) <= 1e-15);
    CHECK(hermiticity_defect(h) == 0.0);
    const GravityModel with(G, 1.0, 1.0, ComplexMatrix::Zero(4, 4), {fa, fb}, true);
    const ComplexMatrix hs = newton_energy(with, lat).matrix();
    CHECK(std::abs(hs(3, 3) - (-G * m * m / d - G * m * m / a)) <= 1e-13);
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(GravityModel(1.0, 1.0, 1.0, ComplexMatrix::Zero(2, 2), {pauli_x(), pauli_z()}),
                  UsageError);
  CHECK_THROWS_AS(GravityModel(1.0, 1.0, 1.0, ComplexMatrix::Zero(2, 2), {pauli_z()}), UsageError);
  CHECK_THROWS_AS(GravityModel(-1.0, 1.0, 1.0, ComplexMatrix::Zero(2, 2), {diag({1, 0})}),
                  UsageError);
}

TEST_CASE("gravity rhs") {
  const MassLattice lat({{0, 0, 0}, {1.0, 0, 0}}, 0.5);
  const GravityModel model(1.0, 1.0, 1.0, ComplexMatrix::Zero(2, 2), {diag({1, 0}), diag({0, 1})});
  const GravKernel k = build_kernel(lat, 1.0, 1.0);
  const ComplexMatrix diagonal_state = diag({0.3, 0.7});
  CHECK(oracle::max_abs(gravity_rhs(diagonal_state, model, lat, k)) <= 1e-15);

  std::mt19937_64 rng(30);
  const ComplexMatrix rho = oracle::random_density(rng, 2);
  const ComplexMatrix r = gravity_rhs(rho, model, lat, k);
  CHECK(std::abs(r.trace()) <= 1e-12);
  const double rate = decoherence_rate(std::vector<double>{1, 0}, std::vector<double>{0, 1}, k);
  // The off-diagonal element decays at `rate`; the energy only adds a phase.
  const Complex ratio = r(0, 1) / rho(0, 1);
  CHECK(ratio.real() == doctest::Approx(-rate).epsilon(1e-12));
}

TEST_CASE("decoherence rate") {
  const double G = 0.9;
  const double hbar = 1.1;
  const double m = 1.7;
  const double a = 0.3;
  const double d = 1.4;
  const MassLattice lat({{0, 0, 0}, {0, 0, d}}, a);
  const GravKernel k = build_kernel(lat, G, hbar);
  const std::vector<double> at_a{m, 0.0};
  const std::vector<double> at_b{0.0, m};
  CHECK(decoherence_rate(at_a, at_a, k) == 0.0);
  const double expect = G * m * m / (2 * hbar) * (1 / a - 1 / d);
  CHECK(decoherence_rate(at_a, at_b, k) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(decoherence_rate(at_a, at_b, k) == decoherence_rate(at_b, at_a, k));
  CHECK_THROWS_AS(decoherence_rate(std::vector<double>{m}, at_b, k), UsageError);
}

TEST_CASE("kernel constraint") {
  const std::vector<double> one{1.0};
  CHECK(verify_kernel_constraint(one, 1.0, 1.0) <= 1e-15);
  const std::vector<double> ks{0.1, 1.0, 10.0, 123.0};
  CHECK(verify_kernel_constraint(ks, 1.0, 1.0) <= 1e-12);
  CHECK(verify_kernel_constraint(ks, 6.674e-11, 1.0546e-34) <= 1e-12);
  CHECK_THROWS_AS(verify_kernel_constraint(std::vector<double>{-1.0}, 1.0, 1.0), UsageError);
}

TEST_CASE("single-mode gravity model") {
  const PhaseGrid g(-2.0, 2.0, -2.0, 2.0, 16, 16);
  const double G = 0.1;
  const double v = 2.0;
  const double kappa = 0.5;
  const HybridModel m = single_mode_gravity_model(g, G, 1.0, 1.0, v, kappa, pauli_x(), diag({1, 0}), 1.0);
  const Eigen::Index i = 3;
  const Eigen::Index j = 9;
  const double q = g.q(i);
  const double p = g.p(j);
  const double h2 = p * p / (8 * M_PI * G * v) + v * kappa * kappa * q * q / (8 * M_PI * G);
  const ComplexMatrix expect = pauli_x() + h2 * identity(2) + v * q * diag({1, 0});
  CHECK(oracle::max_abs(m.hamiltonian().node(g.index(i, j)) - expect) <= 1e-12);
  CHECK(m.currents().size() == 1);
}
