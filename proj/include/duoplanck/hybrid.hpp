// SPDX-License-Identifier: Apache-2.0
//
// Hybrid quantum-classical dynamics. The state rho(q, p) is an operator field:
// at each phase-space node it is a (sub-normalized) density operator of the
// quantum factor, and its pointwise trace is the classical distribution.
#pragma once

#include <vector>

#include "duoplanck/phase_space.hpp"

namespace duoplanck {

/// Interaction term J1 (quantum operator) times J2(q, p) (classical field).
struct HybridCurrent {
  ComplexMatrix j1;
  GradedField j2;
};

/// H(q, p) = H1 + H2(q, p) I + sum_alpha J1^alpha J2^alpha(q, p), plus the
/// positive-definite noise matrix lambda_{alpha beta}.
class HybridModel {
public:
  HybridModel(double hbar, ComplexMatrix h1, GradedField h2,
              std::vector<HybridCurrent> currents, RealMatrix lambda);

  double hbar() const noexcept { return hbar_; }
  Eigen::Index dim() const noexcept { return h1_.rows(); }
  const PhaseGrid& grid() const noexcept { return h2_.value.grid; }
  const ComplexMatrix& h1() const noexcept { return h1_; }
  const GradedField& h2() const noexcept { return h2_; }
  const std::vector<HybridCurrent>& currents() const noexcept { return currents_; }
  const RealMatrix& lambda() const noexcept { return lambda_; }
  const RealMatrix& lambda_inv() const noexcept { return lambda_inv_; }

  /// Pointwise H and its exact q- and p-gradients.
  const OperatorField& hamiltonian() const noexcept { return h_; }
  const OperatorField& hamiltonian_dq() const noexcept { return hq_; }
  const OperatorField& hamiltonian_dp() const noexcept { return hp_; }

private:
  double hbar_;
  ComplexMatrix h1_;
  GradedField h2_;
  std::vector<HybridCurrent> currents_;
  RealMatrix lambda_;
  RealMatrix lambda_inv_;
  OperatorField h_;
  OperatorField hq_;
  OperatorField hp_;
};

OperatorField hamiltonian_field(const HybridModel& model);

/// -(i/hbar)[H, rho] + (1/2){H, rho} - (1/2){rho, H}. No noise terms, so
/// positivity is not preserved.
OperatorField aleksandrov_rhs(const OperatorField& rho, const HybridModel& model);

/// aleksandrov_rhs - (1/4) sum lambda_ab [J1a, [J1b, rho]]
///                 + (1/4) sum lambda^-1_ab {J2a, {J2b, rho}}.
OperatorField hybrid_rhs(const OperatorField& rho, const HybridModel& model);

/// Single-current form with scalar lambda, assembled term by term without the
/// matrix loops of hybrid_rhs. Throws unless the model has one current.
OperatorField hybrid_rhs_single_current(const OperatorField& rho,
                                        const HybridModel& model);

/// aleksandrov_rhs with J1 -> J1 + dJ1 and J2 -> J2 + dJ2 in H; the
/// dJ1 dJ2 product is dropped.
OperatorField noisy_aleksandrov_rhs(const OperatorField& rho,
                                    const HybridModel& model,
                                    const std::vector<double>& dj1,
                                    const std::vector<double>& dj2);

/// White-noise intensity matrices of the current fluctuations:
/// <dJ1a dJ1b> = (1/2) lambda^-1_ab, <dJ2a dJ2b> = (hbar^2/2) lambda_ab.
struct HybridNoiseSpec {
  RealMatrix intensity1;
  RealMatrix intensity2;

  static HybridNoiseSpec from_model(const HybridModel& model);
};

/// sigma (x) w / integral(w): a product hybrid state with unit total trace.
OperatorField make_product_state(const ComplexMatrix& sigma, const ScalarField& w);

/// Integral of rho over phase space.
ComplexMatrix reduce_to_quantum(const OperatorField& rho);
/// Pointwise trace (real part).
ScalarField reduce_to_classical(const OperatorField& rho);

struct ClassicalMoments {
  double mean_q = 0.0;
  double mean_p = 0.0;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
};

/// Quadrature moments of a normalized distribution.
ClassicalMoments classical_moments(const ScalarField& w);

/// Smallest eigenvalue over all nodes (Hermitian part of each node).
double pointwise_min_eigenvalue(const OperatorField& rho);
double pointwise_hermiticity_defect(const OperatorField& rho);

} // namespace duoplanck
