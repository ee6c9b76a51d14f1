// SPDX-License-Identifier: Apache-2.0
//
// Quantum dynamics of a bipartite system whose two factors carry different
// Planck constants: the generalized bracket, the raw (non-positive)
// evolution, its noise-blurred Lindblad form, and a finite-grid canonical
// pair used to approach the classical limit of the second factor.
#pragma once

#include <utility>
#include <vector>

#include "duoplanck/operator_core.hpp"

namespace duoplanck {

/// hbar1 >= hbar2 > 0 with the derived averages used by the dynamics.
class TwoHbarParams {
public:
  TwoHbarParams(double hbar1, double hbar2);

  double hbar1() const noexcept { return hbar1_; }
  double hbar2() const noexcept { return hbar2_; }
  /// 2 hbar1 hbar2 / (hbar1 + hbar2)
  double hbar_av() const noexcept { return hbar_av_; }
  /// 1/hbar2 - 1/hbar1, never negative.
  double delta_inv_hbar() const noexcept { return delta_inv_hbar_; }

private:
  double hbar1_;
  double hbar2_;
  double hbar_av_;
  double delta_inv_hbar_;
};

/// An operator acting on one factor of the product space, tagged with the
/// structure that lets it be applied to a product-space matrix cheaply.
class LocalOperator {
public:
  enum class Kind { Identity, Diagonal, Dense };

  LocalOperator() = default;
  explicit LocalOperator(ComplexMatrix m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  const ComplexVector& diagonal() const noexcept { return diag_; }
  Kind kind() const noexcept { return kind_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

private:
  ComplexMatrix m_;
  ComplexVector diag_;
  Kind kind_ = Kind::Dense;
};

/// Row-major block layout of H1 (x) H2: index (i, a) -> i * d2 + a.
struct ProductSpace {
  Eigen::Index d1 = 0;
  Eigen::Index d2 = 0;

  Eigen::Index dim() const noexcept { return d1 * d2; }

  /// (A (x) I) M
  ComplexMatrix left1(const LocalOperator& a, const ComplexMatrix& m) const;
  /// M (A (x) I)
  ComplexMatrix right1(const ComplexMatrix& m, const LocalOperator& a) const;
  /// (I (x) B) M
  ComplexMatrix left2(const LocalOperator& b, const ComplexMatrix& m) const;
  /// M (I (x) B)
  ComplexMatrix right2(const ComplexMatrix& m, const LocalOperator& b) const;
};

/// Sum over alpha of A1^alpha (x) A2^alpha.
class FactoredOperator {
public:
  using Term = std::pair<ComplexMatrix, ComplexMatrix>;

  explicit FactoredOperator(std::vector<Term> terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  Eigen::Index d1() const noexcept { return d1_; }
  Eigen::Index d2() const noexcept { return d2_; }

  /// The operator on the product space.
  ComplexMatrix realize() const;

private:
  std::vector<Term> terms_;
  Eigen::Index d1_ = 0;
  Eigen::Index d2_ = 0;
};

/// One interaction term J1 (x) J2 with its noise weights.
struct CurrentPair {
  ComplexMatrix j1;
  ComplexMatrix j2;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
};

/// H = H1 (x) I + I (x) H2 + sum_alpha J1^alpha (x) J2^alpha.
class BimodalModel {
public:
  BimodalModel(ComplexMatrix h1, ComplexMatrix h2,
               std::vector<CurrentPair> currents);

  const ProductSpace& space() const noexcept { return space_; }
  const LocalOperator& h1() const noexcept { return h1_; }
  const LocalOperator& h2() const noexcept { return h2_; }
  std::size_t current_count() const noexcept { return currents_.size(); }
  const CurrentPair& current(std::size_t k) const { return currents_.at(k); }
  const LocalOperator& j1(std::size_t k) const { return j1_.at(k); }
  const LocalOperator& j2(std::size_t k) const { return j2_.at(k); }

  /// Throws unless there is exactly one current with lambda1 * lambda2 = 1.
  void require_lindblad_form() const;

  /// The full Hamiltonian realized on the product space.
  ComplexMatrix hamiltonian() const;

private:
  ProductSpace space_;
  LocalOperator h1_;
  LocalOperator h2_;
  std::vector<CurrentPair> currents_;
  std::vector<LocalOperator> j1_;
  std::vector<LocalOperator> j2_;
};

ComplexMatrix generalized_bracket(const FactoredOperator& a,
                                  const FactoredOperator& b,
                                  const TwoHbarParams& params);

/// Unitary part shared by every two-hbar right-hand side:
/// -(i/hbar1)[H1,rho] - (i/hbar2)[H2,rho] - (i/hbar_av)[H_I,rho].
ComplexMatrix unitary_rhs(const ComplexMatrix& rho, const BimodalModel& model,
                          const TwoHbarParams& params);

/// Unitary part plus the skew term (i/2) dinv sum(J1 rho J2 - J2 rho J1).
/// Does not preserve positivity.
ComplexMatrix raw_rhs(const ComplexMatrix& rho, const BimodalModel& model,
                      const TwoHbarParams& params);

/// F = sqrt(lambda2) J1 (x) I - i sqrt(lambda1) I (x) J2 (single current).
ComplexMatrix lindblad_operator(const BimodalModel& model);

/// Unitary part plus -(dinv/4)(F^dag F rho + rho F^dag F - 2 F rho F^dag).
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const BimodalModel& model,
                           const TwoHbarParams& params);

/// raw_rhs plus the noise-averaged double commutators, summed per current:
/// -(dinv/4)(lambda2 [J1,[J1,rho]] + lambda1 [J2,[J2,rho]]).
ComplexMatrix blurred_rhs(const ComplexMatrix& rho, const BimodalModel& model,
                          const TwoHbarParams& params);

/// White-noise intensities of the current fluctuations, per current pair:
/// <dJn(t') dJn(t)> = (1/2) hbar_av^2 dinv lambda_n delta(t' - t).
struct BimodalNoiseSpec {
  std::vector<double> intensity1;
  std::vector<double> intensity2;

  static BimodalNoiseSpec from_model(const BimodalModel& model,
                                     const TwoHbarParams& params);
};

/// raw_rhs with currents J_n -> J_n + dJ_n(t). The noise enters the
/// -(i/hbar_av)[H_I, rho] term; when `skew_noise` is set it also enters the
/// skew term. The dJ1 dJ2 product is dropped.
ComplexMatrix noisy_raw_rhs(const ComplexMatrix& rho, const BimodalModel& model,
                            const TwoHbarParams& params,
                            const std::vector<double>& dj1,
                            const std::vector<double>& dj2,
                            bool skew_noise = false);

enum class MomentumStencil { Central, Spectral };

/// Periodic grid standing in for a canonical pair (q2, p2).
struct CanonicalGrid2 {
  Eigen::Index n = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double dx = 0.0;
  double hbar2 = 0.0;
  MomentumStencil stencil = MomentumStencil::Central;
  RealVector x;
  ComplexMatrix q;
  ComplexMatrix p;
};

CanonicalGrid2 build_canonical_subsystem(
    Eigen::Index n, double x_min, double x_max, double hbar2,
    MomentumStencil stencil = MomentumStencil::Central);

/// Normalized packet with <|psi(x)|^2> variance width^2 / 2 and carrier
/// momentum p0. Throws if the packet puts more than 1e-8 of its norm into
/// the outer sixteenth of the grid on either side.
ComplexVector gaussian_packet(const CanonicalGrid2& grid, double q0, double p0,
                              double width);

} // namespace duoplanck
