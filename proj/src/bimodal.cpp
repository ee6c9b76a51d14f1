// SPDX-License-Identifier: Apache-2.0
#include "duoplanck/bimodal.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "duoplanck/errors.hpp"

namespace duoplanck {

TwoHbarParams::TwoHbarParams(double hbar1, double hbar2)
    : hbar1_(hbar1), hbar2_(hbar2) {
  if (!std::isfinite(hbar1) || !std::isfinite(hbar2) || hbar2 <= 0.0) {
    throw UsageError("TwoHbarParams: hbar1 and hbar2 must be finite and > 0");
  }
  if (hbar1 < hbar2) {
    throw UsageError("TwoHbarParams: hbar1 must be >= hbar2");
  }
  hbar_av_ = 2.0 * hbar1 * hbar2 / (hbar1 + hbar2);
  delta_inv_hbar_ = 1.0 / hbar2 - 1.0 / hbar1;
}

LocalOperator::LocalOperator(ComplexMatrix m) : m_(std::move(m)) {
  require_square_finite(m_, "LocalOperator");
  const Eigen::Index d = m_.rows();
  bool off_diagonal_zero = true;
  for (Eigen::Index j = 0; j < d && off_diagonal_zero; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (i != j && m_(i, j) != Complex{}) {
        off_diagonal_zero = false;
        break;
      }
    }
  }
  if (!off_diagonal_zero) {
    kind_ = Kind::Dense;
    return;
  }
  diag_ = m_.diagonal();
  kind_ = (diag_.array() == Complex{1.0, 0.0}).all() ? Kind::Identity
                                                      : Kind::Diagonal;
}

namespace {

void check_rows(const ProductSpace& s, const ComplexMatrix& m) {
  if (m.rows() != s.dim() || m.cols() != s.dim()) {
    throw UsageError("product-space operand has dimension " +
                     std::to_string(m.rows()) + ", expected " +
                     std::to_string(s.dim()));
  }
}

} // namespace

ComplexMatrix ProductSpace::left1(const LocalOperator& a,
                                  const ComplexMatrix& m) const {
  check_rows(*this, m);
  if (a.kind() == LocalOperator::Kind::Identity) {
    return m;
  }
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  const ComplexMatrix& am = a.matrix();
  for (Eigen::Index i = 0; i < d1; ++i) {
    for (Eigen::Index k = 0; k < d1; ++k) {
      const Complex c = am(i, k);
      if (c != Complex{}) {
        out.middleRows(i * d2, d2) += c * m.middleRows(k * d2, d2);
      }
    }
  }
  return out;
}

ComplexMatrix ProductSpace::right1(const ComplexMatrix& m,
                                   const LocalOperator& a) const {
  check_rows(*this, m);
  if (a.kind() == LocalOperator::Kind::Identity) {
    return m;
  }
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  const ComplexMatrix& am = a.matrix();
  for (Eigen::Index k = 0; k < d1; ++k) {
    for (Eigen::Index j = 0; j < d1; ++j) {
      const Complex c = am(k, j);
      if (c != Complex{}) {
        out.middleCols(j * d2, d2) += c * m.middleCols(k * d2, d2);
      }
    }
  }
  return out;
}

ComplexMatrix ProductSpace::left2(const LocalOperator& b,
                                  const ComplexMatrix& m) const {
  check_rows(*this, m);
  switch (b.kind()) {
  case LocalOperator::Kind::Identity:
    return m;
  case LocalOperator::Kind::Diagonal: {
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < d1; ++i) {
      out.middleRows(i * d2, d2) = b.diagonal().asDiagonal() * m.middleRows(i * d2, d2);
    }
    return out;
  }
  case LocalOperator::Kind::Dense:
    break;
  }
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < d1; ++i) {
    out.middleRows(i * d2, d2).noalias() = b.matrix() * m.middleRows(i * d2, d2);
  }
  return out;
}

ComplexMatrix ProductSpace::right2(const ComplexMatrix& m,
                                   const LocalOperator& b) const {
  check_rows(*this, m);
  switch (b.kind()) {
  case LocalOperator::Kind::Identity:
    return m;
  case LocalOperator::Kind::Diagonal: {
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < d1; ++j) {
      out.middleCols(j * d2, d2) = m.middleCols(j * d2, d2) * b.diagonal().asDiagonal();
    }
    return out;
  }
  case LocalOperator::Kind::Dense:
    break;
  }
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < d1; ++j) {
    out.middleCols(j * d2, d2).noalias() = m.middleCols(j * d2, d2) * b.matrix();
  }
  return out;
}

FactoredOperator::FactoredOperator(std::vector<Term> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) {
    throw UsageError("FactoredOperator: at least one term is required");
  }
  d1_ = terms_.front().first.rows();
  d2_ = terms_.front().second.rows();
  for (const auto& [a1, a2] : terms_) {
    require_square_finite(a1, "FactoredOperator");
    require_square_finite(a2, "FactoredOperator");
    if (a1.rows() != d1_ || a2.rows() != d2_) {
      throw UsageError("FactoredOperator: inconsistent factor dimensions");
    }
  }
}

ComplexMatrix FactoredOperator::realize() const {
  ComplexMatrix out = ComplexMatrix::Zero(d1_ * d2_, d1_ * d2_);
  for (const auto& [a1, a2] : terms_) {
    out += tensor(a1, a2);
  }
  return out;
}

namespace {

bool proportional_to_identity(const ComplexMatrix& m) {
  const Complex mean = m.trace() / static_cast<double>(m.rows());
  const ComplexMatrix rest = m - mean * ComplexMatrix::Identity(m.rows(), m.cols());
  return rest.cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, std::abs(mean));
}

} // namespace

BimodalModel::BimodalModel(ComplexMatrix h1, ComplexMatrix h2,
                           std::vector<CurrentPair> currents)
    : currents_(std::move(currents)) {
  const HermitianOperator hh1(std::move(h1));
  const HermitianOperator hh2(std::move(h2));
  space_ = ProductSpace{hh1.dim(), hh2.dim()};
  h1_ = LocalOperator(hh1.matrix());
  h2_ = LocalOperator(hh2.matrix());
  for (std::size_t k = 0; k < currents_.size(); ++k) {
    const auto& c = currents_[k];
    const std::string tag = "BimodalModel: current " + std::to_string(k);
    const HermitianOperator j1(c.j1);
    const HermitianOperator j2(c.j2);
    if (j1.dim() != space_.d1 || j2.dim() != space_.d2) {
      throw UsageError(tag + " has wrong dimensions");
    }
    if (proportional_to_identity(c.j1) || proportional_to_identity(c.j2)) {
      throw UsageError(tag + " is proportional to the identity");
    }
    if (!(c.lambda1 > 0.0) || !(c.lambda2 > 0.0) || !std::isfinite(c.lambda1) ||
        !std::isfinite(c.lambda2)) {
      throw UsageError(tag + ": lambda1 and lambda2 must be > 0");
    }
    j1_.emplace_back(c.j1);
    j2_.emplace_back(c.j2);
  }
}

void BimodalModel::require_lindblad_form() const {
  if (currents_.size() != 1) {
    throw UsageError("Lindblad form requires exactly one current pair");
  }
  const double prod = currents_.front().lambda1 * currents_.front().lambda2;
  if (std::abs(prod - 1.0) > 1e-12) {
    throw UsageError("Lindblad form requires lambda1 * lambda2 = 1");
  }
}

ComplexMatrix BimodalModel::hamiltonian() const {
  ComplexMatrix h = tensor(h1_.matrix(), identity(space_.d2)) +
                    tensor(identity(space_.d1), h2_.matrix());
  for (const auto& c : currents_) {
    h += tensor(c.j1, c.j2);
  }
  return h;
}

ComplexMatrix generalized_bracket(const FactoredOperator& a,
                                  const FactoredOperator& b,
                                  const TwoHbarParams& params) {
  if (a.d1() != b.d1() || a.d2() != b.d2()) {
    throw UsageError("generalized_bracket: factor dimensions differ");
  }
  const Complex c1 = -kI / (2.0 * params.hbar1());
  const Complex c2 = -kI / (2.0 * params.hbar2());
  ComplexMatrix out = ComplexMatrix::Zero(a.d1() * a.d2(), a.d1() * a.d2());
  for (const auto& [a1, a2] : a.terms()) {
    for (const auto& [b1, b2] : b.terms()) {
      out += c1 * tensor(commutator(a1, b1), anticommutator(a2, b2));
      out += c2 * tensor(anticommutator(a1, b1), commutator(a2, b2));
    }
  }
  return out;
}

namespace {

ComplexMatrix comm1(const ProductSpace& s, const LocalOperator& a,
                    const ComplexMatrix& m) {
  return s.left1(a, m) - s.right1(m, a);
}

ComplexMatrix comm2(const ProductSpace& s, const LocalOperator& b,
                    const ComplexMatrix& m) {
  return s.left2(b, m) - s.right2(m, b);
}

// J1 rho J2 - J2 rho J1 for one current.
ComplexMatrix skew(const ProductSpace& s, const LocalOperator& j1,
                   const LocalOperator& j2, const ComplexMatrix& m) {
  return s.right2(s.left1(j1, m), j2) - s.right1(s.left2(j2, m), j1);
}

} // namespace

ComplexMatrix unitary_rhs(const ComplexMatrix& rho, const BimodalModel& model,
                          const TwoHbarParams& params) {
  const ProductSpace& s = model.space();
  ComplexMatrix out = (-kI / params.hbar1()) * comm1(s, model.h1(), rho);
  out += (-kI / params.hbar2()) * comm2(s, model.h2(), rho);
  const Complex cav = -kI / params.hbar_av();
  for (std::size_t k = 0; k < model.current_count(); ++k) {
    const ComplexMatrix left = s.left1(model.j1(k), s.left2(model.j2(k), rho));
    const ComplexMatrix right = s.right2(s.right1(rho, model.j1(k)), model.j2(k));
    out += cav * (left - right);
  }
  return out;
}

ComplexMatrix raw_rhs(const ComplexMatrix& rho, const BimodalModel& model,
                      const TwoHbarParams& params) {
  const ProductSpace& s = model.space();
  ComplexMatrix out = unitary_rhs(rho, model, params);
  const Complex cskew = 0.5 * kI * params.delta_inv_hbar();
  for (std::size_t k = 0; k < model.current_count(); ++k) {
    out += cskew * skew(s, model.j1(k), model.j2(k), rho);
  }
  return out;
}

ComplexMatrix lindblad_operator(const BimodalModel& model) {
  model.require_lindblad_form();
  const CurrentPair& c = model.current(0);
  const ProductSpace& s = model.space();
  return std::sqrt(c.lambda2) * tensor(c.j1, identity(s.d2)) -
         kI * std::sqrt(c.lambda1) * tensor(identity(s.d1), c.j2);
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const BimodalModel& model,
                           const TwoHbarParams& params) {
  const ComplexMatrix f = lindblad_operator(model);
  const ComplexMatrix fdf = f.adjoint() * f;
  ComplexMatrix out = unitary_rhs(rho, model, params);
  out -= 0.25 * params.delta_inv_hbar() *
         (fdf * rho + rho * fdf - 2.0 * f * rho * f.adjoint());
  return out;
}

ComplexMatrix blurred_rhs(const ComplexMatrix& rho, const BimodalModel& model,
                          const TwoHbarParams& params) {
  const ProductSpace& s = model.space();
  ComplexMatrix out = raw_rhs(rho, model, params);
  const double dinv = params.delta_inv_hbar();
  if (dinv == 0.0) {
    return out;
  }
  for (std::size_t k = 0; k < model.current_count(); ++k) {
    const CurrentPair& c = model.current(k);
    const ComplexMatrix dc1 = comm1(s, model.j1(k), comm1(s, model.j1(k), rho));
    const ComplexMatrix dc2 = comm2(s, model.j2(k), comm2(s, model.j2(k), rho));
    out -= (0.25 * dinv) * (c.lambda2 * dc1 + c.lambda1 * dc2);
  }
  return out;
}

BimodalNoiseSpec BimodalNoiseSpec::from_model(const BimodalModel& model,
                                              const TwoHbarParams& params) {
  BimodalNoiseSpec spec;
  const double base =
      0.5 * params.hbar_av() * params.hbar_av() * params.delta_inv_hbar();
  for (std::size_t k = 0; k < model.current_count(); ++k) {
    spec.intensity1.push_back(base * model.current(k).lambda1);
    spec.intensity2.push_back(base * model.current(k).lambda2);
  }
  return spec;
}

ComplexMatrix noisy_raw_rhs(const ComplexMatrix& rho, const BimodalModel& model,
                            const TwoHbarParams& params,
                            const std::vector<double>& dj1,
                            const std::vector<double>& dj2, bool skew_noise) {
  if (dj1.size() != model.current_count() || dj2.size() != model.current_count()) {
    throw UsageError("noisy_raw_rhs: one noise value per current is required");
  }
  const ProductSpace& s = model.space();
  ComplexMatrix out = raw_rhs(rho, model, params);
  const Complex cav = -kI / params.hbar_av();
  const Complex cskew = 0.5 * kI * params.delta_inv_hbar();
  for (std::size_t k = 0; k < model.current_count(); ++k) {
    if (dj1[k] == 0.0 && dj2[k] == 0.0) {
      continue;
    }
    const ComplexMatrix c2 = comm2(s, model.j2(k), rho);
    const ComplexMatrix c1 = comm1(s, model.j1(k), rho);
    out += cav * (dj1[k] * c2 + dj2[k] * c1);
    if (skew_noise) {
      out += cskew * (dj2[k] * c1 - dj1[k] * c2);
    }
  }
  return out;
}

CanonicalGrid2 build_canonical_subsystem(Eigen::Index n, double x_min,
                                         double x_max, double hbar2,
                                         MomentumStencil stencil) {
  if (n < 16) {
    throw UsageError("build_canonical_subsystem: N must be >= 16");
  }
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw UsageError("build_canonical_subsystem: need x_min < x_max");
  }
  if (!(hbar2 > 0.0)) {
    throw UsageError("build_canonical_subsystem: hbar2 must be > 0");
  }
  CanonicalGrid2 g;
  g.n = n;
  g.x_min = x_min;
  g.x_max = x_max;
  g.dx = (x_max - x_min) / static_cast<double>(n);
  g.hbar2 = hbar2;
  g.stencil = stencil;
  g.x.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    g.x(j) = x_min + static_cast<double>(j) * g.dx;
  }
  g.q = g.x.cast<Complex>().asDiagonal();
  g.p = ComplexMatrix::Zero(n, n);
  if (stencil == MomentumStencil::Central) {
    const Complex c = -kI * hbar2 / (2.0 * g.dx);
    for (Eigen::Index j = 0; j < n; ++j) {
      g.p(j, (j + 1) % n) += c;
      g.p(j, (j + n - 1) % n) -= c;
    }
    return g;
  }
  // Spectral derivative: P_{jl} depends only on (j - l) mod n. The Nyquist
  // mode is given zero momentum so that P stays Hermitian and odd.
  const double length = x_max - x_min;
  ComplexVector column(n);
  for (Eigen::Index s = 0; s < n; ++s) {
    Complex acc{};
    for (Eigen::Index m = -n / 2; m < n - n / 2; ++m) {
      if (n % 2 == 0 && m == -n / 2) {
        continue;
      }
      const double k = 2.0 * std::numbers::pi * static_cast<double>(m) / length;
      acc += k * std::exp(kI * k * static_cast<double>(s) * g.dx);
    }
    column(s) = hbar2 * acc / static_cast<double>(n);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      g.p(j, l) = column((j - l + n) % n);
    }
  }
  // Exact hermiticity (the sum above is Hermitian up to rounding).
  g.p = 0.5 * (g.p + g.p.adjoint()).eval();
  return g;
}

ComplexVector gaussian_packet(const CanonicalGrid2& grid, double q0, double p0,
                              double width) {
  if (!(width > grid.dx)) {
    throw UsageError("gaussian_packet: width is not resolved by the grid");
  }
  ComplexVector psi(grid.n);
  for (Eigen::Index j = 0; j < grid.n; ++j) {
    const double u = grid.x(j) - q0;
    psi(j) = std::exp(-u * u / (2.0 * width * width)) *
             std::exp(kI * p0 * grid.x(j) / grid.hbar2);
  }
  psi /= psi.norm();
  const Eigen::Index band = std::max<Eigen::Index>(1, grid.n / 16);
  const double edge = psi.head(band).squaredNorm() + psi.tail(band).squaredNorm();
  if (edge > 1e-8) {
    throw UsageError("gaussian_packet: packet touches the grid boundary");
  }
  return psi;
}

} // namespace duoplanck
