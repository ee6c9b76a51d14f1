// SPDX-License-Identifier: Apache-2.0
#include "duoplanck/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "duoplanck/errors.hpp"

namespace duoplanck {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw UsageError("integrator: dt must be > 0");
  }
  if (!(t_end >= dt) || !std::isfinite(t_end)) {
    throw UsageError("integrator: t_end must be >= dt");
  }
  const double n = t_end / dt;
  if (std::abs(n - std::round(n)) > 1e-6 * n) {
    throw UsageError("integrator: t_end must be a whole number of steps of dt");
  }
  if (record_stride < 1) {
    throw UsageError("integrator: record_stride must be >= 1");
  }
}

std::int64_t IntegratorConfig::steps() const {
  return static_cast<std::int64_t>(std::llround(t_end / dt));
}

double NormalStream::uniform_open() {
  // 53 random bits, shifted off zero so the logarithm stays finite.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double phi = 2.0 * std::numbers::pi * uniform_open();
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

NoiseIntensity NoiseIntensity::from(const BimodalNoiseSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.intensity1.size());
  NoiseIntensity out{RealMatrix::Zero(n, n), RealMatrix::Zero(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.channel1(k, k) = spec.intensity1[static_cast<std::size_t>(k)];
    out.channel2(k, k) = spec.intensity2[static_cast<std::size_t>(k)];
  }
  return out;
}

NoiseIntensity NoiseIntensity::from(const HybridNoiseSpec& spec) {
  return {spec.intensity1, spec.intensity2};
}

namespace {

RealMatrix sqrt_factor(const RealMatrix& s, const char* what) {
  if (s.rows() != s.cols()) {
    throw UsageError(std::string(what) + " intensity matrix must be square");
  }
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, s.cwiseAbs().maxCoeff())) {
    throw UsageError(std::string(what) + " intensity matrix must be symmetric");
  }
  const RealMatrix off = s - RealMatrix(s.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() == 0.0) {
    if (s.diagonal().minCoeff() < 0.0) {
      throw UsageError(std::string(what) + " intensity matrix is not positive semidefinite");
    }
    return RealMatrix(s.diagonal().cwiseSqrt().asDiagonal());
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(s);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-12 * scale) {
    throw UsageError(std::string(what) + " intensity matrix is not positive semidefinite");
  }
  return es.eigenvectors() *
         es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

} // namespace

NoiseSampler::NoiseSampler(const NoiseIntensity& intensity, double dt) {
  if (!(dt > 0.0)) {
    throw UsageError("noise sampler: dt must be > 0");
  }
  if (intensity.channel1.rows() != intensity.channel2.rows()) {
    throw UsageError("noise sampler: channel sizes differ");
  }
  const double inv = 1.0 / std::sqrt(dt);
  factor1_ = sqrt_factor(intensity.channel1, "channel 1") * inv;
  factor2_ = sqrt_factor(intensity.channel2, "channel 2") * inv;
}

NoiseIncrements NoiseSampler::sample(NormalStream& rng) const {
  const Eigen::Index n = factor1_.rows();
  RealVector z1(n);
  RealVector z2(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    z1(k) = rng.next();
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    z2(k) = rng.next();
  }
  const RealVector x1 = factor1_ * z1;
  const RealVector x2 = factor2_ * z2;
  return {std::vector<double>(x1.data(), x1.data() + n),
          std::vector<double>(x2.data(), x2.data() + n)};
}

NoiseIncrements sample_noise(const NoiseIntensity& intensity, double dt,
                             NormalStream& rng) {
  return NoiseSampler(intensity, dt).sample(rng);
}

} // namespace duoplanck
