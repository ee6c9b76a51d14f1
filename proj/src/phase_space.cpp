// SPDX-License-Identifier: Apache-2.0
#include "duoplanck/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "duoplanck/errors.hpp"

namespace duoplanck {

PhaseGrid::PhaseGrid(double q_min, double q_max, double p_min, double p_max,
                     Eigen::Index nq, Eigen::Index np)
    : q_min_(q_min), q_max_(q_max), p_min_(p_min), p_max_(p_max), nq_(nq),
      np_(np) {
  if (nq < 8 || np < 8) {
    throw UsageError("PhaseGrid: Nq and Np must be >= 8");
  }
  if (!(q_max > q_min) || !(p_max > p_min) || !std::isfinite(q_max - q_min) ||
      !std::isfinite(p_max - p_min)) {
    throw UsageError("PhaseGrid: bounds must satisfy min < max");
  }
  dq_ = (q_max - q_min) / static_cast<double>(nq);
  dp_ = (p_max - p_min) / static_cast<double>(np);
}

OperatorField::OperatorField(const PhaseGrid& g, Eigen::Index dim)
    : grid_(g), dim_(dim),
      data_(static_cast<std::size_t>(g.nodes() * dim * dim)) {
  if (dim <= 0) {
    throw UsageError("OperatorField: dimension must be positive");
  }
}

void OperatorField::fill(const ComplexMatrix& m) {
  if (m.rows() != dim_ || m.cols() != dim_) {
    throw UsageError("OperatorField::fill: dimension mismatch");
  }
  for (Eigen::Index n = 0; n < grid_.nodes(); ++n) {
    node(n) = m;
  }
}

OperatorField OperatorField::product(const ComplexMatrix& m, const ScalarField& w) {
  OperatorField f(w.grid, m.rows());
  for (Eigen::Index n = 0; n < w.grid.nodes(); ++n) {
    f.node(n) = w.values[static_cast<std::size_t>(n)] * m;
  }
  return f;
}

void OperatorField::require_compatible(const OperatorField& o, const char* what) const {
  if (!(grid_ == o.grid_) || dim_ != o.dim_) {
    throw UsageError(std::string(what) + ": operator fields live on different grids or dimensions");
  }
}

OperatorField& OperatorField::operator+=(const OperatorField& o) {
  require_compatible(o, "OperatorField +=");
  for (std::size_t k = 0; k < data_.size(); ++k) {
    data_[k] += o.data_[k];
  }
  return *this;
}

OperatorField& OperatorField::operator-=(const OperatorField& o) {
  require_compatible(o, "OperatorField -=");
  for (std::size_t k = 0; k < data_.size(); ++k) {
    data_[k] -= o.data_[k];
  }
  return *this;
}

OperatorField& OperatorField::operator*=(Complex s) {
  for (auto& v : data_) {
    v *= s;
  }
  return *this;
}

OperatorField& OperatorField::add_scaled(Complex s, const OperatorField& o) {
  require_compatible(o, "OperatorField::add_scaled");
  for (std::size_t k = 0; k < data_.size(); ++k) {
    data_[k] += s * o.data_[k];
  }
  return *this;
}

std::array<double, 3> PhaseExpression::evaluate(double q, double p) const {
  double v = 0.0;
  double vq = 0.0;
  double vp = 0.0;
  for (const auto& m : monomials) {
    const double qa = std::pow(q, m.q_power);
    const double pa = std::pow(p, m.p_power);
    v += m.coef * qa * pa;
    if (m.q_power > 0) {
      vq += m.coef * m.q_power * std::pow(q, m.q_power - 1) * pa;
    }
    if (m.p_power > 0) {
      vp += m.coef * m.p_power * qa * std::pow(p, m.p_power - 1);
    }
  }
  for (const auto& g : gaussians) {
    const double u = (q - g.q0) / g.sq;
    const double w = (p - g.p0) / g.sp;
    const double e = g.coef * std::exp(-0.5 * (u * u + w * w));
    v += e;
    vq += -e * u / g.sq;
    vp += -e * w / g.sp;
  }
  return {v, vq, vp};
}

GradedField sample(const PhaseExpression& e, const PhaseGrid& grid) {
  GradedField f{ScalarField(grid), ScalarField(grid), ScalarField(grid)};
  for (Eigen::Index i = 0; i < grid.nq(); ++i) {
    for (Eigen::Index j = 0; j < grid.np(); ++j) {
      const auto [v, vq, vp] = e.evaluate(grid.q(i), grid.p(j));
      f.value(i, j) = v;
      f.dq(i, j) = vq;
      f.dp(i, j) = vp;
    }
  }
  return f;
}

GradedField with_discrete_gradient(const ScalarField& f) {
  return GradedField{f, d_dq(f), d_dp(f)};
}

ScalarField d_dq(const ScalarField& f) {
  const PhaseGrid& g = f.grid;
  ScalarField out(g);
  const double s = 0.5 / g.dq();
  for (Eigen::Index i = 0; i < g.nq(); ++i) {
    const Eigen::Index up = (i + 1) % g.nq();
    const Eigen::Index dn = (i + g.nq() - 1) % g.nq();
    for (Eigen::Index j = 0; j < g.np(); ++j) {
      out(i, j) = s * (f(up, j) - f(dn, j));
    }
  }
  return out;
}

ScalarField d_dp(const ScalarField& f) {
  const PhaseGrid& g = f.grid;
  ScalarField out(g);
  const double s = 0.5 / g.dp();
  for (Eigen::Index i = 0; i < g.nq(); ++i) {
    for (Eigen::Index j = 0; j < g.np(); ++j) {
      const Eigen::Index up = (j + 1) % g.np();
      const Eigen::Index dn = (j + g.np() - 1) % g.np();
      out(i, j) = s * (f(i, up) - f(i, dn));
    }
  }
  return out;
}

OperatorField d_dq(const OperatorField& f) {
  const PhaseGrid& g = f.grid();
  OperatorField out(g, f.dim());
  const Eigen::Index ns = f.node_size();
  const Eigen::Index row = g.np() * ns;
  const double s = 0.5 / g.dq();
  auto src = f.data();
  auto dst = out.data();
  for (Eigen::Index i = 0; i < g.nq(); ++i) {
    const Complex* up = src.data() + ((i + 1) % g.nq()) * row;
    const Complex* dn = src.data() + ((i + g.nq() - 1) % g.nq()) * row;
    Complex* o = dst.data() + i * row;
    for (Eigen::Index k = 0; k < row; ++k) {
      o[k] = s * (up[k] - dn[k]);
    }
  }
  return out;
}

OperatorField d_dp(const OperatorField& f) {
  const PhaseGrid& g = f.grid();
  OperatorField out(g, f.dim());
  const Eigen::Index ns = f.node_size();
  const Eigen::Index np = g.np();
  const double s = 0.5 / g.dp();
  auto src = f.data();
  auto dst = out.data();
  for (Eigen::Index i = 0; i < g.nq(); ++i) {
    const Complex* rowp = src.data() + i * np * ns;
    Complex* o = dst.data() + i * np * ns;
    for (Eigen::Index j = 0; j < np; ++j) {
      const Complex* up = rowp + ((j + 1) % np) * ns;
      const Complex* dn = rowp + ((j + np - 1) % np) * ns;
      for (Eigen::Index k = 0; k < ns; ++k) {
        o[j * ns + k] = s * (up[k] - dn[k]);
      }
    }
  }
  return out;
}

ScalarField poisson_scalar(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid == b.grid)) {
    throw UsageError("poisson_scalar: fields live on different grids");
  }
  const ScalarField aq = d_dq(a);
  const ScalarField ap = d_dp(a);
  const ScalarField bq = d_dq(b);
  const ScalarField bp = d_dp(b);
  ScalarField out(a.grid);
  for (std::size_t n = 0; n < out.values.size(); ++n) {
    out.values[n] = aq.values[n] * bp.values[n] - ap.values[n] * bq.values[n];
  }
  return out;
}

OperatorField poisson_op(const OperatorField& a, const OperatorField& b) {
  a.require_compatible(b, "poisson_op");
  const OperatorField aq = d_dq(a);
  const OperatorField ap = d_dp(a);
  const OperatorField bq = d_dq(b);
  const OperatorField bp = d_dp(b);
  OperatorField out(a.grid(), a.dim());
  for (Eigen::Index n = 0; n < a.grid().nodes(); ++n) {
    out.node(n).noalias() = aq.node(n) * bp.node(n);
    out.node(n).noalias() -= ap.node(n) * bq.node(n);
  }
  return out;
}

namespace {

bool all_zero(const ScalarField& f) {
  return std::all_of(f.values.begin(), f.values.end(),
                     [](double v) { return v == 0.0; });
}

// Scales every node of `x` by the matching scalar.
OperatorField scale_nodes(const ScalarField& s, const OperatorField& x) {
  OperatorField out = x;
  const Eigen::Index ns = x.node_size();
  auto d = out.data();
  for (Eigen::Index n = 0; n < x.grid().nodes(); ++n) {
    const double v = s.values[static_cast<std::size_t>(n)];
    for (Eigen::Index k = 0; k < ns; ++k) {
      d[n * ns + k] *= v;
    }
  }
  return out;
}

} // namespace

OperatorField poisson_flux(const GradedField& j, const OperatorField& x) {
  if (!(j.value.grid == x.grid())) {
    throw UsageError("poisson_flux: fields live on different grids");
  }
  OperatorField out(x.grid(), x.dim());
  if (!all_zero(j.dq)) {
    out += d_dp(scale_nodes(j.dq, x));
  }
  if (!all_zero(j.dp)) {
    out -= d_dq(scale_nodes(j.dp, x));
  }
  return out;
}

OperatorField double_poisson_diffusion(const GradedField& j,
                                       const OperatorField& rho) {
  return poisson_flux(j, poisson_flux(j, rho));
}

OperatorField double_poisson_diffusion(const GradedField& ja,
                                       const GradedField& jb,
                                       const OperatorField& rho) {
  return poisson_flux(ja, poisson_flux(jb, rho));
}

double integrate_field(const ScalarField& f) {
  double acc = 0.0;
  for (double v : f.values) {
    acc += v;
  }
  return acc * f.grid.cell_area();
}

ComplexMatrix integrate_field(const OperatorField& f) {
  ComplexMatrix acc = ComplexMatrix::Zero(f.dim(), f.dim());
  for (Eigen::Index n = 0; n < f.grid().nodes(); ++n) {
    acc += f.node(n);
  }
  return acc * f.grid().cell_area();
}

} // namespace duoplanck
