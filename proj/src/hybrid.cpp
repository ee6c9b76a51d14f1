// SPDX-License-Identifier: Apache-2.0
#include "duoplanck/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "duoplanck/errors.hpp"

namespace duoplanck {

namespace {

using Index = Eigen::Index;

// out += s * (a r - r a) for d x d row-major blocks.
inline void add_commutator(Complex s, const Complex* a, const Complex* r,
                           Complex* out, Index d) {
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      Complex acc{};
      for (Index k = 0; k < d; ++k) {
        acc += a[i * d + k] * r[k * d + j] - r[i * d + k] * a[k * d + j];
      }
      out[i * d + j] += s * acc;
    }
  }
}

// out = s * (a r + r a)
inline void set_anticommutator(Complex s, const Complex* a, const Complex* r,
                               Complex* out, Index d) {
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      Complex acc{};
      for (Index k = 0; k < d; ++k) {
        acc += a[i * d + k] * r[k * d + j] + r[i * d + k] * a[k * d + j];
      }
      out[i * d + j] = s * acc;
    }
  }
}

bool is_zero(const OperatorField& f) {
  const auto d = f.data();
  return std::all_of(d.begin(), d.end(), [](Complex v) { return v == Complex{}; });
}

void require_state(const OperatorField& rho, const HybridModel& model,
                   const char* what) {
  if (!(rho.grid() == model.grid()) || rho.dim() != model.dim()) {
    throw UsageError(std::string(what) +
                     ": state grid or dimension does not match the model");
  }
}

// Row-major copy of a constant matrix, for the raw node kernels.
std::vector<Complex> row_major(const ComplexMatrix& m) {
  std::vector<Complex> out(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      out[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
    }
  }
  return out;
}

// out += s * [a, rho] at every node, with a constant.
void add_constant_commutator(Complex s, const ComplexMatrix& a,
                             const OperatorField& rho, OperatorField& out) {
  const std::vector<Complex> am = row_major(a);
  const Index d = rho.dim();
  const Index ns = rho.node_size();
  const Complex* r = rho.data().data();
  Complex* o = out.data().data();
  for (Index n = 0; n < rho.grid().nodes(); ++n) {
    add_commutator(s, am.data(), r + n * ns, o + n * ns, d);
  }
}

// (1/2)(dH/dp-flux) transport in conservative form:
// d/dp[(Hq rho + rho Hq)/2] - d/dq[(Hp rho + rho Hp)/2].
void add_transport(const OperatorField& rho, const OperatorField& hq,
                   const OperatorField& hp, bool hq_zero, bool hp_zero,
                   OperatorField& out) {
  const Index d = rho.dim();
  const Index ns = rho.node_size();
  const Index nodes = rho.grid().nodes();
  if (!hq_zero) {
    OperatorField t(rho.grid(), d);
    for (Index n = 0; n < nodes; ++n) {
      set_anticommutator(0.5, hq.data().data() + n * ns, rho.data().data() + n * ns,
                         t.data().data() + n * ns, d);
    }
    out += d_dp(t);
  }
  if (!hp_zero) {
    OperatorField t(rho.grid(), d);
    for (Index n = 0; n < nodes; ++n) {
      set_anticommutator(0.5, hp.data().data() + n * ns, rho.data().data() + n * ns,
                         t.data().data() + n * ns, d);
    }
    out -= d_dq(t);
  }
}

} // namespace

HybridModel::HybridModel(double hbar, ComplexMatrix h1, GradedField h2,
                         std::vector<HybridCurrent> currents, RealMatrix lambda)
    : hbar_(hbar), h1_(std::move(h1)), h2_(std::move(h2)),
      currents_(std::move(currents)), lambda_(std::move(lambda)),
      h_(h2_.value.grid, 1), hq_(h2_.value.grid, 1), hp_(h2_.value.grid, 1) {
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) {
    throw UsageError("HybridModel: hbar must be > 0");
  }
  const HermitianOperator checked_h1(h1_);
  const Index d = checked_h1.dim();
  const PhaseGrid& g = h2_.value.grid;
  const auto same_grid = [&g](const GradedField& f) {
    return f.value.grid == g && f.dq.grid == g && f.dp.grid == g;
  };
  if (!same_grid(h2_)) {
    throw UsageError("HybridModel: H2 gradient lives on a different grid");
  }
  for (std::size_t k = 0; k < currents_.size(); ++k) {
    const HermitianOperator j1(currents_[k].j1);
    if (j1.dim() != d) {
      throw UsageError("HybridModel: current " + std::to_string(k) +
                       " J1 has the wrong dimension");
    }
    if (!same_grid(currents_[k].j2)) {
      throw UsageError("HybridModel: current " + std::to_string(k) +
                       " J2 lives on a different grid");
    }
  }
  const auto nc = static_cast<Index>(currents_.size());
  if (lambda_.rows() != nc || lambda_.cols() != nc) {
    throw UsageError("HybridModel: lambda must be " + std::to_string(nc) + " x " +
                     std::to_string(nc));
  }
  if (nc > 0) {
    if (!lambda_.allFinite() ||
        (lambda_ - lambda_.transpose()).cwiseAbs().maxCoeff() >
            1e-12 * std::max(1.0, lambda_.cwiseAbs().maxCoeff())) {
      throw UsageError("lambda must be symmetric");
    }
    Eigen::LLT<RealMatrix> llt(lambda_);
    if (llt.info() != Eigen::Success) {
      throw UsageError("lambda must be positive definite");
    }
    lambda_inv_ = llt.solve(RealMatrix::Identity(nc, nc));
    if ((lambda_ * lambda_inv_ - RealMatrix::Identity(nc, nc)).cwiseAbs().maxCoeff() > 1e-10) {
      throw UsageError("lambda is too ill-conditioned to invert");
    }
  } else {
    lambda_inv_ = RealMatrix(0, 0);
  }

  h_ = OperatorField(g, d);
  hq_ = OperatorField(g, d);
  hp_ = OperatorField(g, d);
  const ComplexMatrix id = identity(d);
  for (Index n = 0; n < g.nodes(); ++n) {
    const auto s = static_cast<std::size_t>(n);
    ComplexMatrix h = h1_ + h2_.value.values[s] * id;
    ComplexMatrix hq = h2_.dq.values[s] * id;
    ComplexMatrix hp = h2_.dp.values[s] * id;
    for (const auto& c : currents_) {
      h += c.j2.value.values[s] * c.j1;
      hq += c.j2.dq.values[s] * c.j1;
      hp += c.j2.dp.values[s] * c.j1;
    }
    h_.node(n) = h;
    hq_.node(n) = hq;
    hp_.node(n) = hp;
  }
}

OperatorField hamiltonian_field(const HybridModel& model) { return model.hamiltonian(); }

OperatorField aleksandrov_rhs(const OperatorField& rho, const HybridModel& model) {
  require_state(rho, model, "aleksandrov_rhs");
  const Index d = rho.dim();
  const Index ns = rho.node_size();
  OperatorField out(rho.grid(), d);
  const Complex c = -kI / model.hbar();
  const Complex* h = model.hamiltonian().data().data();
  const Complex* r = rho.data().data();
  Complex* o = out.data().data();
  for (Index n = 0; n < rho.grid().nodes(); ++n) {
    add_commutator(c, h + n * ns, r + n * ns, o + n * ns, d);
  }
  add_transport(rho, model.hamiltonian_dq(), model.hamiltonian_dp(),
                is_zero(model.hamiltonian_dq()), is_zero(model.hamiltonian_dp()), out);
  return out;
}

OperatorField hybrid_rhs(const OperatorField& rho, const HybridModel& model) {
  OperatorField out = aleksandrov_rhs(rho, model);
  const auto& cs = model.currents();
  const Index nc = static_cast<Index>(cs.size());
  const RealMatrix& lam = model.lambda();
  const RealMatrix& lam_inv = model.lambda_inv();

  // -(1/4) sum_a [J1a, sum_b lambda_ab [J1b, rho]]
  std::vector<OperatorField> inner;
  inner.reserve(cs.size());
  for (Index b = 0; b < nc; ++b) {
    OperatorField cb(rho.grid(), rho.dim());
    add_constant_commutator(1.0, cs[static_cast<std::size_t>(b)].j1, rho, cb);
    inner.push_back(std::move(cb));
  }
  for (Index a = 0; a < nc; ++a) {
    OperatorField mix(rho.grid(), rho.dim());
    for (Index b = 0; b < nc; ++b) {
      if (lam(a, b) != 0.0) {
        mix.add_scaled(lam(a, b), inner[static_cast<std::size_t>(b)]);
      }
    }
    add_constant_commutator(-0.25, cs[static_cast<std::size_t>(a)].j1, mix, out);
  }

  // +(1/4) sum_a {J2a, sum_b lambda^-1_ab {J2b, rho}}
  std::vector<OperatorField> flux;
  flux.reserve(cs.size());
  for (Index b = 0; b < nc; ++b) {
    flux.push_back(poisson_flux(cs[static_cast<std::size_t>(b)].j2, rho));
  }
  for (Index a = 0; a < nc; ++a) {
    OperatorField mix(rho.grid(), rho.dim());
    for (Index b = 0; b < nc; ++b) {
      if (lam_inv(a, b) != 0.0) {
        mix.add_scaled(lam_inv(a, b), flux[static_cast<std::size_t>(b)]);
      }
    }
    out.add_scaled(0.25, poisson_flux(cs[static_cast<std::size_t>(a)].j2, mix));
  }
  return out;
}

OperatorField hybrid_rhs_single_current(const OperatorField& rho,
                                        const HybridModel& model) {
  require_state(rho, model, "hybrid_rhs_single_current");
  if (model.currents().size() != 1) {
    throw UsageError("hybrid_rhs_single_current: model must have exactly one current");
  }
  const HybridCurrent& c = model.currents().front();
  const double lam = model.lambda()(0, 0);
  const Index nodes = rho.grid().nodes();

  // -(i/hbar)[H, rho]
  OperatorField out(rho.grid(), rho.dim());
  for (Index n = 0; n < nodes; ++n) {
    const ComplexMatrix h = model.hamiltonian().node(n);
    const ComplexMatrix r = rho.node(n);
    out.node(n) = (-kI / model.hbar()) * (h * r - r * h);
  }
  // (1/2){H, rho} - (1/2){rho, H} in flux form
  OperatorField tq(rho.grid(), rho.dim());
  OperatorField tp(rho.grid(), rho.dim());
  for (Index n = 0; n < nodes; ++n) {
    const ComplexMatrix hq = model.hamiltonian_dq().node(n);
    const ComplexMatrix hp = model.hamiltonian_dp().node(n);
    const ComplexMatrix r = rho.node(n);
    tq.node(n) = 0.5 * (hq * r + r * hq);
    tp.node(n) = 0.5 * (hp * r + r * hp);
  }
  out += d_dp(tq);
  out -= d_dq(tp);
  // -(lambda/4)[J1, [J1, rho]]
  for (Index n = 0; n < nodes; ++n) {
    const ComplexMatrix r = rho.node(n);
    const ComplexMatrix inner = c.j1 * r - r * c.j1;
    out.node(n) -= (0.25 * lam) * (c.j1 * inner - inner * c.j1);
  }
  // +(1/(4 lambda)){J2, {J2, rho}}
  out.add_scaled(0.25 / lam, double_poisson_diffusion(c.j2, rho));
  return out;
}

OperatorField noisy_aleksandrov_rhs(const OperatorField& rho,
                                    const HybridModel& model,
                                    const std::vector<double>& dj1,
                                    const std::vector<double>& dj2) {
  const auto& cs = model.currents();
  if (dj1.size() != cs.size() || dj2.size() != cs.size()) {
    throw UsageError("noisy_aleksandrov_rhs: one noise value per current is required");
  }
  OperatorField out = aleksandrov_rhs(rho, model);
  for (std::size_t a = 0; a < cs.size(); ++a) {
    if (dj2[a] != 0.0) {
      // dJ2 J1 term in H: a pure quantum commutator.
      add_constant_commutator(-kI * dj2[a] / model.hbar(), cs[a].j1, rho, out);
    }
    if (dj1[a] != 0.0) {
      // dJ1 J2 term in H: c-number, so only Poisson transport survives.
      out.add_scaled(dj1[a], poisson_flux(cs[a].j2, rho));
    }
  }
  return out;
}

HybridNoiseSpec HybridNoiseSpec::from_model(const HybridModel& model) {
  HybridNoiseSpec spec;
  spec.intensity1 = 0.5 * model.lambda_inv();
  spec.intensity2 = 0.5 * model.hbar() * model.hbar() * model.lambda();
  return spec;
}

OperatorField make_product_state(const ComplexMatrix& sigma, const ScalarField& w) {
  const double mass = integrate_field(w) * sigma.trace().real();
  if (!(std::abs(mass) > 0.0) || !std::isfinite(mass)) {
    throw UsageError("make_product_state: state has zero or non-finite total weight");
  }
  OperatorField rho = OperatorField::product(sigma, w);
  rho *= Complex{1.0 / mass, 0.0};
  return rho;
}

ComplexMatrix reduce_to_quantum(const OperatorField& rho) { return integrate_field(rho); }

ScalarField reduce_to_classical(const OperatorField& rho) {
  ScalarField w(rho.grid());
  for (Index n = 0; n < rho.grid().nodes(); ++n) {
    w.values[static_cast<std::size_t>(n)] = rho.node(n).trace().real();
  }
  return w;
}

ClassicalMoments classical_moments(const ScalarField& w) {
  const PhaseGrid& g = w.grid;
  double m0 = 0.0;
  double mq = 0.0;
  double mp = 0.0;
  double mqq = 0.0;
  double mpp = 0.0;
  double mqp = 0.0;
  for (Index i = 0; i < g.nq(); ++i) {
    for (Index j = 0; j < g.np(); ++j) {
      const double v = w(i, j);
      const double q = g.q(i);
      const double p = g.p(j);
      m0 += v;
      mq += v * q;
      mp += v * p;
      mqq += v * q * q;
      mpp += v * p * p;
      mqp += v * q * p;
    }
  }
  if (m0 == 0.0) {
    throw UsageError("classical_moments: distribution has zero mass");
  }
  ClassicalMoments out;
  out.mean_q = mq / m0;
  out.mean_p = mp / m0;
  out.cov(0, 0) = mqq / m0 - out.mean_q * out.mean_q;
  out.cov(1, 1) = mpp / m0 - out.mean_p * out.mean_p;
  out.cov(0, 1) = out.cov(1, 0) = mqp / m0 - out.mean_q * out.mean_p;
  return out;
}

double pointwise_min_eigenvalue(const OperatorField& rho) {
  double lo = std::numeric_limits<double>::infinity();
  const Index d = rho.dim();
  if (d == 1) {
    for (Index n = 0; n < rho.grid().nodes(); ++n) {
      lo = std::min(lo, rho.node(n)(0, 0).real());
    }
    return lo;
  }
  if (d == 2) {
    for (Index n = 0; n < rho.grid().nodes(); ++n) {
      const auto m = rho.node(n);
      const double a = m(0, 0).real();
      const double b = m(1, 1).real();
      const Complex c = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
      const double half = 0.5 * (a - b);
      lo = std::min(lo, 0.5 * (a + b) - std::sqrt(half * half + std::norm(c)));
    }
    return lo;
  }
  for (Index n = 0; n < rho.grid().nodes(); ++n) {
    lo = std::min(lo, min_eigenvalue(ComplexMatrix(rho.node(n))));
  }
  return lo;
}

double pointwise_hermiticity_defect(const OperatorField& rho) {
  double worst = 0.0;
  for (Index n = 0; n < rho.grid().nodes(); ++n) {
    worst = std::max(worst, hermiticity_defect(ComplexMatrix(rho.node(n))));
  }
  return worst;
}

} // namespace duoplanck
