// SPDX-License-Identifier: Apache-2.0
//
// Grid calculus on a periodic (q, p) phase plane: scalar and operator-valued
// fields, central differences, Poisson brackets and quadrature.
#pragma once

#include <array>
#include <span>
#include <vector>

#include "duoplanck/operator_core.hpp"

namespace duoplanck {

/// Uniform periodic grid; node (i, j) sits at (q_min + i dq, p_min + j dp).
/// Nodes are stored q-major: index = i * np + j.
class PhaseGrid {
public:
  PhaseGrid() = default;
  PhaseGrid(double q_min, double q_max, double p_min, double p_max,
            Eigen::Index nq, Eigen::Index np);

  double q_min() const noexcept { return q_min_; }
  double q_max() const noexcept { return q_max_; }
  double p_min() const noexcept { return p_min_; }
  double p_max() const noexcept { return p_max_; }
  Eigen::Index nq() const noexcept { return nq_; }
  Eigen::Index np() const noexcept { return np_; }
  double dq() const noexcept { return dq_; }
  double dp() const noexcept { return dp_; }
  Eigen::Index nodes() const noexcept { return nq_ * np_; }
  double cell_area() const noexcept { return dq_ * dp_; }

  double q(Eigen::Index i) const noexcept { return q_min_ + static_cast<double>(i) * dq_; }
  double p(Eigen::Index j) const noexcept { return p_min_ + static_cast<double>(j) * dp_; }
  Eigen::Index index(Eigen::Index i, Eigen::Index j) const noexcept { return i * np_ + j; }

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;

private:
  double q_min_ = 0.0;
  double q_max_ = 1.0;
  double p_min_ = 0.0;
  double p_max_ = 1.0;
  Eigen::Index nq_ = 8;
  Eigen::Index np_ = 8;
  double dq_ = 0.125;
  double dp_ = 0.125;
};

/// One real value per grid node.
struct ScalarField {
  PhaseGrid grid;
  std::vector<double> values;

  explicit ScalarField(const PhaseGrid& g, double fill = 0.0)
      : grid(g), values(static_cast<std::size_t>(g.nodes()), fill) {}

  double& operator()(Eigen::Index i, Eigen::Index j) { return values[grid.index(i, j)]; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values[grid.index(i, j)]; }
};

/// One d x d complex matrix per node, row-major within a node.
class OperatorField {
public:
  OperatorField(const PhaseGrid& g, Eigen::Index dim);

  const PhaseGrid& grid() const noexcept { return grid_; }
  Eigen::Index dim() const noexcept { return dim_; }
  Eigen::Index node_size() const noexcept { return dim_ * dim_; }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  using NodeMap = Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  using ConstNodeMap = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

  NodeMap node(Eigen::Index n) { return {data_.data() + n * node_size(), dim_, dim_}; }
  ConstNodeMap node(Eigen::Index n) const { return {data_.data() + n * node_size(), dim_, dim_}; }

  /// Sets every node to `m`.
  void fill(const ComplexMatrix& m);

  /// The product m(q, p) * w(q, p) for a constant matrix and a scalar field.
  static OperatorField product(const ComplexMatrix& m, const ScalarField& w);

  OperatorField& operator+=(const OperatorField& o);
  OperatorField& operator-=(const OperatorField& o);
  OperatorField& operator*=(Complex s);
  /// this += s * o
  OperatorField& add_scaled(Complex s, const OperatorField& o);

  friend OperatorField operator+(OperatorField a, const OperatorField& b) { return a += b; }
  friend OperatorField operator-(OperatorField a, const OperatorField& b) { return a -= b; }
  friend OperatorField operator*(Complex s, OperatorField a) { return a *= s; }
  friend OperatorField operator*(double s, OperatorField a) { return a *= Complex{s, 0.0}; }

  void require_compatible(const OperatorField& o, const char* what) const;

private:
  PhaseGrid grid_;
  Eigen::Index dim_ = 1;
  std::vector<Complex> data_;
};

/// A smooth function sampled together with its exact gradient. Models keep
/// their classical fields in this form so that non-periodic functions such as
/// q or p^2 have correct derivatives at the wrap-around nodes.
struct GradedField {
  ScalarField value;
  ScalarField dq;
  ScalarField dp;
};

/// Sum of c q^m p^n monomials and Gaussians
/// c exp(-(q-q0)^2/(2 sq^2) - (p-p0)^2/(2 sp^2)).
struct PhaseExpression {
  struct Monomial {
    double coef = 0.0;
    int q_power = 0;
    int p_power = 0;
  };
  struct Gaussian {
    double coef = 0.0;
    double q0 = 0.0;
    double p0 = 0.0;
    double sq = 1.0;
    double sp = 1.0;
  };

  std::vector<Monomial> monomials;
  std::vector<Gaussian> gaussians;

  /// Value and gradient (d/dq, d/dp) at a point.
  std::array<double, 3> evaluate(double q, double p) const;
  bool empty() const noexcept { return monomials.empty() && gaussians.empty(); }
};

GradedField sample(const PhaseExpression& e, const PhaseGrid& grid);
/// Gradient by periodic central differences of the values.
GradedField with_discrete_gradient(const ScalarField& f);

/// Second-order periodic central differences.
ScalarField d_dq(const ScalarField& f);
ScalarField d_dp(const ScalarField& f);
OperatorField d_dq(const OperatorField& f);
OperatorField d_dp(const OperatorField& f);

/// {A, B} = dA/dq dB/dp - dA/dp dB/dq.
ScalarField poisson_scalar(const ScalarField& a, const ScalarField& b);
/// Same with pointwise matrix products kept in the written order.
OperatorField poisson_op(const OperatorField& a, const OperatorField& b);

/// {J, X} for scalar J in flux form: d/dp(J_q X) - d/dq(J_p X).
OperatorField poisson_flux(const GradedField& j, const OperatorField& x);

/// {J, {J, rho}}. With J = q this is the second p-difference of rho.
OperatorField double_poisson_diffusion(const GradedField& j,
                                       const OperatorField& rho);
/// {Ja, {Jb, rho}}.
OperatorField double_poisson_diffusion(const GradedField& ja,
                                       const GradedField& jb,
                                       const OperatorField& rho);

/// Riemann sum over the grid (exact trapezoid for periodic data).
double integrate_field(const ScalarField& f);
ComplexMatrix integrate_field(const OperatorField& f);

} // namespace duoplanck
