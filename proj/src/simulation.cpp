// SPDX-License-Identifier: Apache-2.0
#include "duoplanck/simulation.hpp"

#include "duoplanck/errors.hpp"

namespace duoplanck {

std::vector<double> DiagnosticsRecord::values() const {
  std::vector<double> v{trace_re, trace_im, min_eig, purity, hermiticity_defect};
  v.insert(v.end(), observables.begin(), observables.end());
  return v;
}

void DiagnosticsRecord::set_values(const std::vector<double>& v) {
  if (v.size() < kFixedColumns) {
    throw UsageError("diagnostics: too few columns");
  }
  trace_re = v[0];
  trace_im = v[1];
  min_eig = v[2];
  purity = v[3];
  hermiticity_defect = v[4];
  observables.assign(v.begin() + kFixedColumns, v.end());
}

namespace detail {

void Moments::add(const std::vector<double>& x) {
  if (mean.empty()) {
    mean.assign(x.size(), 0.0);
    m2.assign(x.size(), 0.0);
  }
  count += 1.0;
  for (std::size_t c = 0; c < x.size(); ++c) {
    const double d = x[c] - mean[c];
    mean[c] += d / count;
    m2[c] += d * (x[c] - mean[c]);
  }
}

void Moments::merge(const Moments& o) {
  if (o.count == 0.0) {
    return;
  }
  if (count == 0.0) {
    *this = o;
    return;
  }
  const double n = count + o.count;
  for (std::size_t c = 0; c < mean.size(); ++c) {
    const double d = o.mean[c] - mean[c];
    mean[c] += d * o.count / n;
    m2[c] += o.m2[c] + d * d * count * o.count / n;
  }
  count = n;
}

} // namespace detail

namespace {

double observe(const DensityObservable& o, const ComplexMatrix& rho) {
  const Complex v = (o.op * rho).trace();
  return o.imaginary ? v.imag() : v.real();
}

void fill_density_record(DiagnosticsRecord& r, const ComplexMatrix& rho,
                         const ComplexMatrix& reduced,
                         const std::vector<DensityObservable>& obs) {
  const Complex tr = rho.trace();
  r.trace_re = tr.real();
  r.trace_im = tr.imag();
  r.min_eig = min_eigenvalue(rho);
  r.purity = purity(reduced);
  r.hermiticity_defect = hermiticity_defect(rho);
  r.observables.reserve(obs.size());
  for (const auto& o : obs) {
    r.observables.push_back(observe(o, rho));
  }
}

void require_observable_dim(const std::vector<DensityObservable>& obs,
                            Eigen::Index dim) {
  for (const auto& o : obs) {
    if (o.op.rows() != dim || o.op.cols() != dim) {
      throw UsageError("observable '" + o.name + "' has the wrong dimension");
    }
  }
}

template <class Obs>
std::vector<std::string> names_of(const std::vector<Obs>& obs) {
  std::vector<std::string> out;
  out.reserve(obs.size());
  for (const auto& o : obs) {
    out.push_back(o.name);
  }
  return out;
}

} // namespace

BimodalDynamics::BimodalDynamics(BimodalModel model, TwoHbarParams params,
                                 BimodalEquation eq,
                                 std::vector<DensityObservable> observables,
                                 bool skew_noise)
    : model_(std::move(model)), params_(params), eq_(eq),
      observables_(std::move(observables)), skew_noise_(skew_noise) {
  if (eq_ == BimodalEquation::Lindblad) {
    model_.require_lindblad_form();
  }
  require_observable_dim(observables_, model_.space().dim());
}

ComplexMatrix BimodalDynamics::rhs(const ComplexMatrix& rho) const {
  switch (eq_) {
  case BimodalEquation::Raw:
    return raw_rhs(rho, model_, params_);
  case BimodalEquation::Blurred:
    return blurred_rhs(rho, model_, params_);
  case BimodalEquation::Lindblad:
    return lindblad_rhs(rho, model_, params_);
  }
  throw UsageError("unknown bimodal equation");
}

ComplexMatrix BimodalDynamics::noisy_rhs(const ComplexMatrix& rho,
                                         const NoiseIncrements& noise) const {
  return noisy_raw_rhs(rho, model_, params_, noise.dj1, noise.dj2, skew_noise_);
}

NoiseIntensity BimodalDynamics::noise() const {
  return NoiseIntensity::from(BimodalNoiseSpec::from_model(model_, params_));
}

DiagnosticsRecord BimodalDynamics::diagnose(double t, const ComplexMatrix& rho) const {
  DiagnosticsRecord r;
  r.t = t;
  const auto& s = model_.space();
  fill_density_record(r, rho, partial_trace(rho, s.d1, s.d2, 1), observables_);
  return r;
}

std::vector<std::string> BimodalDynamics::observable_names() const {
  return names_of(observables_);
}

HybridDynamics::HybridDynamics(HybridModel model, HybridEquation eq,
                               std::vector<HybridObservable> observables)
    : model_(std::move(model)), eq_(eq), observables_(std::move(observables)) {
  const auto nodes = static_cast<std::size_t>(model_.grid().nodes());
  for (auto& o : observables_) {
    if (o.op.size() == 0) {
      o.op = identity(model_.dim());
    }
    if (o.op.rows() != model_.dim() || o.op.cols() != model_.dim()) {
      throw UsageError("observable '" + o.name + "' has the wrong dimension");
    }
    if (!o.weight.empty() && o.weight.size() != nodes) {
      throw UsageError("observable '" + o.name + "' weight does not match the grid");
    }
  }
}

OperatorField HybridDynamics::rhs(const OperatorField& rho) const {
  return eq_ == HybridEquation::Hybrid ? hybrid_rhs(rho, model_)
                                       : aleksandrov_rhs(rho, model_);
}

OperatorField HybridDynamics::noisy_rhs(const OperatorField& rho,
                                        const NoiseIncrements& noise) const {
  return noisy_aleksandrov_rhs(rho, model_, noise.dj1, noise.dj2);
}

NoiseIntensity HybridDynamics::noise() const {
  return NoiseIntensity::from(HybridNoiseSpec::from_model(model_));
}

DiagnosticsRecord HybridDynamics::diagnose(double t, const OperatorField& rho) const {
  DiagnosticsRecord r;
  r.t = t;
  const ComplexMatrix reduced = reduce_to_quantum(rho);
  const Complex tr = reduced.trace();
  r.trace_re = tr.real();
  r.trace_im = tr.imag();
  r.min_eig = pointwise_min_eigenvalue(rho);
  r.purity = purity(reduced);
  r.hermiticity_defect = pointwise_hermiticity_defect(rho);
  const Eigen::Index d = rho.dim();
  const double area = rho.grid().cell_area();
  for (const auto& o : observables_) {
    Complex acc{0.0, 0.0};
    for (Eigen::Index n = 0; n < rho.grid().nodes(); ++n) {
      const auto node = rho.node(n);
      Complex v{0.0, 0.0};
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
          v += o.op(j, i) * node(i, j);
        }
      }
      acc += o.weight.empty() ? v : v * o.weight[static_cast<std::size_t>(n)];
    }
    acc *= area;
    r.observables.push_back(o.imaginary ? acc.imag() : acc.real());
  }
  return r;
}

std::vector<std::string> HybridDynamics::observable_names() const {
  return names_of(observables_);
}

GravityDynamics::GravityDynamics(GravityModel model, MassLattice lattice,
                                 std::vector<DensityObservable> observables)
    : model_(std::move(model)), lattice_(std::move(lattice)),
      kernel_(build_kernel(lattice_, model_.G(), model_.hbar())),
      h_total_(model_.h_matter() + newton_energy(model_, lattice_).matrix()),
      observables_(std::move(observables)) {
  require_observable_dim(observables_, model_.dim());
}

ComplexMatrix GravityDynamics::rhs(const ComplexMatrix& rho) const {
  return gravity_rhs(rho, model_, kernel_, h_total_);
}

ComplexMatrix GravityDynamics::noisy_rhs(const ComplexMatrix&,
                                         const NoiseIncrements&) const {
  throw UsageError("gravity dynamics has no noise model");
}

NoiseIntensity GravityDynamics::noise() const {
  throw UsageError("gravity dynamics has no noise model");
}

DiagnosticsRecord GravityDynamics::diagnose(double t, const ComplexMatrix& rho) const {
  DiagnosticsRecord r;
  r.t = t;
  fill_density_record(r, rho, rho, observables_);
  return r;
}

std::vector<std::string> GravityDynamics::observable_names() const {
  return names_of(observables_);
}

} // namespace duoplanck
