// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "duoplanck/errors.hpp"
#include "duoplanck/phase_space.hpp"
#include "oracles.hpp"

using namespace duoplanck;

namespace {

PhaseExpression mono(double c, int qp, int pp) {
  PhaseExpression e;
  e.monomials.push_back({c, qp, pp});
  return e;
}

ScalarField field_of(const PhaseGrid& g, double (*f)(double, double)) {
  ScalarField s(g);
  for (Eigen::Index i = 0; i < g.nq(); ++i) {
    for (Eigen::Index j = 0; j < g.np(); ++j) {
      s(i, j) = f(g.q(i), g.p(j));
    }
  }
  return s;
}

// Max deviation over nodes at least `margin` away from the wrap-around.
template <class F>
double interior_error(const ScalarField& s, F exact, Eigen::Index margin = 2) {
  const PhaseGrid& g = s.grid;
  double err = 0.0;
  for (Eigen::Index i = margin; i < g.nq() - margin; ++i) {
    for (Eigen::Index j = margin; j < g.np() - margin; ++j) {
      err = std::max(err, std::abs(s(i, j) - exact(g.q(i), g.p(j))));
    }
  }
  return err;
}

constexpr double kL = 2.0 * M_PI;

} // namespace

TEST_CASE("grid geometry") {
  const PhaseGrid g(-1.0, 1.0, 0.0, 4.0, 8, 16);
  CHECK(g.dq() == doctest::Approx(0.25));
  CHECK(g.dp() == doctest::Approx(0.25));
  CHECK(g.q(0) == -1.0);
  CHECK(g.index(1, 2) == 18);
  CHECK_THROWS_AS(PhaseGrid(0.0, 1.0, 0.0, 1.0, 4, 8), UsageError);
  CHECK_THROWS_AS(PhaseGrid(1.0, 0.0, 0.0, 1.0, 8, 8), UsageError);
}

TEST_CASE("d_dq") {
  const PhaseGrid g(0.0, kL, 0.0, kL, 64, 8);
  const ScalarField c(g, 3.0);
  for (double v : d_dq(c).values) {
    CHECK(v == 0.0);
  }
  double err_prev = 0.0;
  for (Eigen::Index n : {32, 64}) {
    const PhaseGrid gn(0.0, kL, 0.0, kL, n, 8);
    const ScalarField s = field_of(gn, [](double q, double) { return std::sin(q); });
    const double err = interior_error(d_dq(s), [](double q, double) { return std::cos(q); }, 0);
    CHECK(err <= 1.0 / 6.0 * gn.dq() * gn.dq());
    if (err_prev > 0.0) {
      CHECK(std::log2(err_prev / err) >= 1.9);
    }
    err_prev = err;
  }
  const ScalarField a = field_of(g, [](double q, double p) { return std::sin(q) * p; });
  const ScalarField b = field_of(g, [](double q, double) { return q * q; });
  ScalarField lin(g);
  for (std::size_t k = 0; k < lin.values.size(); ++k) {
    lin.values[k] = 2.0 * a.values[k] - 0.5 * b.values[k];
  }
  const ScalarField da = d_dq(a);
  const ScalarField db = d_dq(b);
  const ScalarField dl = d_dq(lin);
  for (std::size_t k = 0; k < lin.values.size(); ++k) {
    CHECK(dl.values[k] == doctest::Approx(2.0 * da.values[k] - 0.5 * db.values[k]).epsilon(1e-12));
  }
}

TEST_CASE("poisson bracket of scalars") {
  const PhaseGrid g(-2.0, 2.0, -3.0, 3.0, 32, 48);
  const ScalarField q = sample(mono(1.0, 1, 0), g).value;
  const ScalarField p = sample(mono(1.0, 0, 1), g).value;
  CHECK(interior_error(poisson_scalar(q, p), [](double, double) { return 1.0; }) <= 1e-12);
  const ScalarField h = field_of(g, [](double q0, double p0) { return std::sin(q0) * std::exp(p0 * 0.3); });
  for (double v : poisson_scalar(h, h).values) {
    CHECK(v == 0.0);
  }
  const ScalarField q2 = sample(mono(1.0, 2, 0), g).value;
  const ScalarField p2 = sample(mono(1.0, 0, 2), g).value;
  CHECK(interior_error(poisson_scalar(q2, p2), [](double a, double b) { return 4.0 * a * b; }) <=
        1e-11);

  double prev = 0.0;
  for (Eigen::Index n : {32, 64, 128}) {
    const PhaseGrid gn(0.0, kL, 0.0, kL, n, n);
    const ScalarField a = field_of(gn, [](double x, double y) { return std::sin(x) * std::cos(y); });
    const ScalarField b = field_of(gn, [](double x, double y) { return std::cos(2 * x) + std::sin(y); });
    const double err = interior_error(poisson_scalar(a, b), [](double x, double y) {
      return std::cos(x) * std::cos(y) * std::cos(y) - 2.0 * std::sin(x) * std::sin(y) * std::sin(2 * x);
    }, 0);
    if (prev > 0.0) {
      CHECK(std::log2(prev / err) >= 1.9);
    }
    prev = err;
  }
}

TEST_CASE("poisson bracket of operator fields") {
  const PhaseGrid g(-2.0, 2.0, -2.0, 2.0, 16, 16);
  const ScalarField q = sample(mono(1.0, 1, 0), g).value;
  const ScalarField p = sample(mono(1.0, 0, 1), g).value;
  SUBCASE("scalar inputs reduce to poisson_scalar") {
    const OperatorField a = OperatorField::product(identity(1), q);
    const OperatorField b = OperatorField::product(identity(1), p);
    const OperatorField r = poisson_op(a, b);
    const ScalarField s = poisson_scalar(q, p);
    for (Eigen::Index n = 0; n < g.nodes(); ++n) {
      CHECK(r.node(n)(0, 0).real() == doctest::Approx(s.values[n]));
    }
  }
  SUBCASE("sigma_z q with sigma_x p") {
    const OperatorField a = OperatorField::product(pauli_z(), q);
    const OperatorField b = OperatorField::product(pauli_x(), p);
    const OperatorField r = poisson_op(a, b);
    const OperatorField rev = poisson_op(b, a);
    const ComplexMatrix zx = pauli_z() * pauli_x();
    for (Eigen::Index i = 2; i < g.nq() - 2; ++i) {
      for (Eigen::Index j = 2; j < g.np() - 2; ++j) {
        const Eigen::Index n = g.index(i, j);
        CHECK(oracle::max_abs(r.node(n) - zx) <= 1e-12);
        // {B, A} = -x z: the factors do not commute, so no antisymmetry.
        CHECK(oracle::max_abs(rev.node(n) + pauli_x() * pauli_z()) <= 1e-12);
      }
    }
  }
}

TEST_CASE("double poisson diffusion") {
  const double s = 0.6;
  double prev = 0.0;
  for (Eigen::Index n : {64, 128}) {
    const PhaseGrid g(-3.0, 3.0, -6.0, 6.0, 8, n);
    const GradedField q = sample(mono(1.0, 1, 0), g);
    const ScalarField w = field_of(g, [](double, double p) { return std::exp(-p * p / (2 * 0.36)); });
    const OperatorField r = double_poisson_diffusion(q, OperatorField::product(identity(1), w));
    double err = 0.0;
    double total = 0.0;
    for (Eigen::Index n2 = 0; n2 < g.nodes(); ++n2) {
      total += r.node(n2)(0, 0).real();
    }
    for (Eigen::Index i = 0; i < g.nq(); ++i) {
      for (Eigen::Index j = 0; j < g.np(); ++j) {
        const double p = g.p(j);
        const double exact = (p * p / (s * s * s * s) - 1.0 / (s * s)) * std::exp(-p * p / (2 * s * s));
        err = std::max(err, std::abs(r.node(g.index(i, j))(0, 0).real() - exact));
      }
    }
    CHECK(std::abs(total * g.cell_area()) <= 1e-10);
    if (prev > 0.0) {
      CHECK(std::log2(prev / err) >= 1.9);
    }
    prev = err;
  }
  const PhaseGrid g(-1.0, 1.0, -1.0, 1.0, 16, 16);
  OperatorField c(g, 2);
  c.fill(pauli_x() + identity(2));
  const OperatorField r = double_poisson_diffusion(sample(mono(1.0, 1, 0), g), c);
  for (const Complex& z : r.data()) {
    CHECK(std::abs(z) <= 1e-12);
  }
}

TEST_CASE("flux form integrates to zero") {
  const PhaseGrid g(-2.0, 2.0, -2.0, 2.0, 24, 24);
  PhaseExpression j = mono(0.5, 2, 1);
  j.gaussians.push_back({1.0, 0.3, -0.2, 0.5, 0.7});
  PhaseExpression w;
  w.gaussians.push_back({1.0, 0.0, 0.0, 0.4, 0.4});
  const OperatorField x = OperatorField::product(pauli_x() + 2.0 * identity(2), sample(w, g).value);
  const ComplexMatrix total = integrate_field(poisson_flux(sample(j, g), x));
  CHECK(oracle::max_abs(total) <= 1e-12);
}

TEST_CASE("integration") {
  const PhaseGrid g(-6.0, 6.0, -6.0, 6.0, 64, 64);
  PhaseExpression w;
  w.gaussians.push_back({1.0 / (2.0 * M_PI * 0.5 * 0.7), 0.2, -0.1, 0.5, 0.7});
  CHECK(integrate_field(sample(w, g).value) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(integrate_field(ScalarField(g)) == 0.0);
  const ScalarField a = sample(w, g).value;
  ScalarField b(g);
  for (std::size_t k = 0; k < b.values.size(); ++k) {
    b.values[k] = 3.0 * a.values[k];
  }
  CHECK(integrate_field(b) == doctest::Approx(3.0 * integrate_field(a)).epsilon(1e-14));
}

TEST_CASE("expression gradients are exact") {
  PhaseExpression e = mono(2.0, 3, 1);
  e.gaussians.push_back({1.5, 0.2, 0.1, 0.3, 0.6});
  const double q = 0.37;
  const double p = -0.21;
  const auto v = e.evaluate(q, p);
  const double h = 1e-6;
  const double dq = (e.evaluate(q + h, p)[0] - e.evaluate(q - h, p)[0]) / (2 * h);
  const double dp = (e.evaluate(q, p + h)[0] - e.evaluate(q, p - h)[0]) / (2 * h);
  CHECK(v[1] == doctest::Approx(dq).epsilon(1e-7));
  CHECK(v[2] == doctest::Approx(dp).epsilon(1e-7));
}
