// SPDX-License-Identifier: Apache-2.0
//
// Gravitational decoherence of quantized matter on a lattice of mass sites.
#pragma once

#include <array>
#include <span>
#include <vector>

#include "duoplanck/hybrid.hpp"

namespace duoplanck {

using Position = std::array<double, 3>;

/// Site positions with a regularization length `a` that replaces |r - r'|
/// at coincidence and must not exceed the smallest pairwise distance.
class MassLattice {
public:
  MassLattice(std::vector<Position> positions, double a);

  const std::vector<Position>& positions() const noexcept { return positions_; }
  double spacing() const noexcept { return a_; }
  std::size_t size() const noexcept { return positions_.size(); }
  /// max(|r_i - r_j|, a)
  double regularized_distance(std::size_t i, std::size_t j) const;

private:
  std::vector<Position> positions_;
  double a_;
};

/// Matter Hamiltonian and one mass operator per site. The mass operators must
/// commute pairwise and be positive semidefinite.
class GravityModel {
public:
  GravityModel(double G, double hbar, double c, ComplexMatrix h_matter,
               std::vector<ComplexMatrix> mass_operators,
               bool include_self_energy = true);

  double G() const noexcept { return G_; }
  double hbar() const noexcept { return hbar_; }
  double c() const noexcept { return c_; }
  const ComplexMatrix& h_matter() const noexcept { return h_matter_; }
  const std::vector<ComplexMatrix>& mass_operators() const noexcept { return f_; }
  bool include_self_energy() const noexcept { return self_energy_; }
  Eigen::Index dim() const noexcept { return h_matter_.rows(); }

private:
  double G_;
  double hbar_;
  double c_;
  ComplexMatrix h_matter_;
  std::vector<ComplexMatrix> f_;
  bool self_energy_;
};

/// Lambda_ij = (G/hbar) / max(|r_i - r_j|, a).
struct GravKernel {
  RealMatrix matrix;
};

GravKernel build_kernel(const MassLattice& lattice, double G, double hbar);

/// H_g = -(G/2) sum_kl f_k f_l / max(|r_k - r_l|, a); the k = l terms are
/// skipped when the model excludes self-energy.
HermitianOperator newton_energy(const GravityModel& model, const MassLattice& lattice);

/// -(i/hbar)[H_m + H_g, rho] - (1/4) sum_kl Lambda_kl [f_k, [f_l, rho]].
ComplexMatrix gravity_rhs(const ComplexMatrix& rho, const GravityModel& model,
                          const GravKernel& kernel, const ComplexMatrix& h_total);

/// Convenience overload that builds H_m + H_g itself.
ComplexMatrix gravity_rhs(const ComplexMatrix& rho, const GravityModel& model,
                          const MassLattice& lattice, const GravKernel& kernel);

/// Decay rate of <1|rho|2> between two mass configurations, given as the
/// f-eigenvalues at every site: (1/4) sum_kl Lambda_kl df_k df_l.
double decoherence_rate(std::span<const double> config1,
                        std::span<const double> config2, const GravKernel& kernel);

/// Max relative deviation of k^4 lt(k) from (4 pi G/hbar)^2 / lt(k) where
/// lt(k) = (G/hbar) 4 pi / k^2 is the Fourier transform of the kernel.
double verify_kernel_constraint(std::span<const double> k_samples, double G,
                                double hbar);

/// One field mode (phi, pi) mapped onto the classical (q, p) pair of a hybrid
/// model: H2 = p^2/(8 pi G v c^2) + v kappa^2 q^2/(8 pi G), J2 = v q, with the
/// matter mass operator as J1. `lambda` is the scalar noise weight.
HybridModel single_mode_gravity_model(const PhaseGrid& grid, double G, double hbar,
                                      double c, double volume, double kappa,
                                      const ComplexMatrix& h_matter,
                                      const ComplexMatrix& mass_operator,
                                      double lambda);

} // namespace duoplanck
