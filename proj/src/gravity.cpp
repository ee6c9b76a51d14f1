// SPDX-License-Identifier: Apache-2.0
#include "duoplanck/gravity.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "duoplanck/errors.hpp"

namespace duoplanck {

namespace {

double distance(const Position& a, const Position& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

} // namespace

MassLattice::MassLattice(std::vector<Position> positions, double a)
    : positions_(std::move(positions)), a_(a) {
  if (!(a_ > 0.0) || !std::isfinite(a_)) {
    throw UsageError("MassLattice: regularization length a must be > 0");
  }
  if (positions_.empty()) {
    throw UsageError("MassLattice: at least one site is required");
  }
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    for (std::size_t j = i + 1; j < positions_.size(); ++j) {
      const double r = distance(positions_[i], positions_[j]);
      if (r == 0.0) {
        throw UsageError("MassLattice: sites " + std::to_string(i) + " and " +
                         std::to_string(j) + " coincide");
      }
      if (a_ > r) {
        throw UsageError("MassLattice: a exceeds the smallest pairwise distance");
      }
    }
  }
}

double MassLattice::regularized_distance(std::size_t i, std::size_t j) const {
  return std::max(distance(positions_.at(i), positions_.at(j)), a_);
}

GravityModel::GravityModel(double G, double hbar, double c, ComplexMatrix h_matter,
                           std::vector<ComplexMatrix> mass_operators,
                           bool include_self_energy)
    : G_(G), hbar_(hbar), c_(c), h_matter_(std::move(h_matter)),
      f_(std::move(mass_operators)), self_energy_(include_self_energy) {
  if (!(G_ > 0.0) || !(hbar_ > 0.0) || !(c_ > 0.0)) {
    throw UsageError("GravityModel: G, hbar and c must be > 0");
  }
  const HermitianOperator hm(h_matter_);
  for (std::size_t k = 0; k < f_.size(); ++k) {
    const HermitianOperator fk(f_[k]);
    if (fk.dim() != hm.dim()) {
      throw UsageError("GravityModel: mass operator " + std::to_string(k) +
                       " has the wrong dimension");
    }
    if (min_eigenvalue(fk) < -1e-12) {
      throw UsageError("GravityModel: mass operator " + std::to_string(k) +
                       " is not positive semidefinite");
    }
    for (std::size_t l = 0; l < k; ++l) {
      if (commutator(f_[k], f_[l]).cwiseAbs().maxCoeff() > 1e-12) {
        throw UsageError("GravityModel: mass operators " + std::to_string(l) +
                         " and " + std::to_string(k) + " do not commute");
      }
    }
  }
}

GravKernel build_kernel(const MassLattice& lattice, double G, double hbar) {
  if (!(G > 0.0) || !(hbar > 0.0)) {
    throw UsageError("build_kernel: G and hbar must be > 0");
  }
  const auto n = static_cast<Eigen::Index>(lattice.size());
  GravKernel k{RealMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = (G / hbar) / lattice.regularized_distance(
                                        static_cast<std::size_t>(i),
                                        static_cast<std::size_t>(j));
      k.matrix(i, j) = v;
      k.matrix(j, i) = v;
    }
  }
  return k;
}

HermitianOperator newton_energy(const GravityModel& model, const MassLattice& lattice) {
  const auto& f = model.mass_operators();
  if (f.size() != lattice.size()) {
    throw UsageError("newton_energy: one mass operator per lattice site is required");
  }
  ComplexMatrix h = ComplexMatrix::Zero(model.dim(), model.dim());
  for (std::size_t k = 0; k < f.size(); ++k) {
    for (std::size_t l = 0; l < f.size(); ++l) {
      if (k == l && !model.include_self_energy()) {
        continue;
      }
      h -= (0.5 * model.G() / lattice.regularized_distance(k, l)) * (f[k] * f[l]);
    }
  }
  // f's commute, so the products are Hermitian up to rounding.
  return HermitianOperator(0.5 * (h + h.adjoint()));
}

ComplexMatrix gravity_rhs(const ComplexMatrix& rho, const GravityModel& model,
                          const GravKernel& kernel, const ComplexMatrix& h_total) {
  const auto& f = model.mass_operators();
  if (rho.rows() != model.dim() || rho.cols() != model.dim() ||
      h_total.rows() != model.dim()) {
    throw UsageError("gravity_rhs: dimension mismatch");
  }
  if (kernel.matrix.rows() != static_cast<Eigen::Index>(f.size())) {
    throw UsageError("gravity_rhs: kernel size does not match the mass operators");
  }
  ComplexMatrix out = (-kI / model.hbar()) * (h_total * rho - rho * h_total);
  // sum_l Lambda_kl [f_l, rho] first, then the outer commutator.
  std::vector<ComplexMatrix> inner;
  inner.reserve(f.size());
  for (const auto& fl : f) {
    inner.push_back(fl * rho - rho * fl);
  }
  for (std::size_t k = 0; k < f.size(); ++k) {
    ComplexMatrix mix = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (std::size_t l = 0; l < f.size(); ++l) {
      mix += kernel.matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) * inner[l];
    }
    out -= 0.25 * (f[k] * mix - mix * f[k]);
  }
  return out;
}

ComplexMatrix gravity_rhs(const ComplexMatrix& rho, const GravityModel& model,
                          const MassLattice& lattice, const GravKernel& kernel) {
  const ComplexMatrix h = model.h_matter() + newton_energy(model, lattice).matrix();
  return gravity_rhs(rho, model, kernel, h);
}

double decoherence_rate(std::span<const double> config1,
                        std::span<const double> config2, const GravKernel& kernel) {
  const auto n = static_cast<std::size_t>(kernel.matrix.rows());
  if (config1.size() != n || config2.size() != n) {
    throw UsageError("decoherence_rate: configuration length must equal the site count");
  }
  double rate = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      rate += kernel.matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) *
              (config1[k] - config2[k]) * (config1[l] - config2[l]);
    }
  }
  return 0.25 * rate;
}

double verify_kernel_constraint(std::span<const double> k_samples, double G,
                                double hbar) {
  if (!(G > 0.0) || !(hbar > 0.0)) {
    throw UsageError("verify_kernel_constraint: G and hbar must be > 0");
  }
  const double four_pi = 4.0 * std::numbers::pi;
  double worst = 0.0;
  for (double k : k_samples) {
    if (!(k > 0.0)) {
      throw UsageError("verify_kernel_constraint: wavenumbers must be > 0");
    }
    const double kernel = (G / hbar) * four_pi / (k * k);
    const double lhs = k * k * k * k * kernel;
    const double coupling = four_pi * G / hbar;
    const double rhs = coupling * coupling / kernel;
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
  }
  return worst;
}

HybridModel single_mode_gravity_model(const PhaseGrid& grid, double G, double hbar,
                                      double c, double volume, double kappa,
                                      const ComplexMatrix& h_matter,
                                      const ComplexMatrix& mass_operator,
                                      double lambda) {
  if (!(G > 0.0) || !(c > 0.0) || !(volume > 0.0)) {
    throw UsageError("single_mode_gravity_model: G, c and volume must be > 0");
  }
  const double eight_pi_g = 8.0 * std::numbers::pi * G;
  PhaseExpression h2;
  h2.monomials.push_back({1.0 / (eight_pi_g * volume * c * c), 0, 2});
  if (kappa != 0.0) {
    h2.monomials.push_back({volume * kappa * kappa / eight_pi_g, 2, 0});
  }
  PhaseExpression j2;
  j2.monomials.push_back({volume, 1, 0});
  std::vector<HybridCurrent> currents;
  currents.push_back({mass_operator, sample(j2, grid)});
  RealMatrix lam(1, 1);
  lam(0, 0) = lambda;
  return HybridModel(hbar, h_matter, sample(h2, grid), std::move(currents), lam);
}

} // namespace duoplanck
