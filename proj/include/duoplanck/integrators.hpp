// SPDX-License-Identifier: Apache-2.0
//
// Fixed-step integrators and white-noise sampling.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "duoplanck/bimodal.hpp"
#include "duoplanck/hybrid.hpp"

namespace duoplanck {

enum class Scheme { Rk4, HeunStratonovich };

struct IntegratorConfig {
  double dt = 0.0;
  double t_end = 0.0;
  std::int64_t record_stride = 1;
  Scheme scheme = Scheme::Rk4;

  /// Throws UsageError unless 0 < dt <= t_end, t_end is a whole number of
  /// steps and record_stride >= 1.
  void validate() const;
  std::int64_t steps() const;
};

/// y += a x for every state type the engine integrates.
template <class State>
inline void axpy(State& y, double a, const State& x) {
  y += a * x;
}
inline void axpy(OperatorField& y, double a, const OperatorField& x) {
  y.add_scaled(Complex{a, 0.0}, x);
}

template <class State, class Rhs>
State rk4_step(const Rhs& rhs, const State& y, double dt) {
  const State k1 = rhs(y);
  State tmp = y;
  axpy(tmp, 0.5 * dt, k1);
  const State k2 = rhs(tmp);
  tmp = y;
  axpy(tmp, 0.5 * dt, k2);
  const State k3 = rhs(tmp);
  tmp = y;
  axpy(tmp, dt, k3);
  const State k4 = rhs(tmp);
  State out = y;
  axpy(out, dt / 6.0, k1);
  axpy(out, dt / 3.0, k2);
  axpy(out, dt / 3.0, k3);
  axpy(out, dt / 6.0, k4);
  return out;
}

/// Predictor-corrector step; the predictor and the corrector see the same
/// noise values, which gives the Stratonovich limit.
template <class State, class Rhs, class Noise>
State heun_step(const Rhs& rhs, const State& y, const Noise& noise, double dt) {
  const State k1 = rhs(y, noise);
  State pred = y;
  axpy(pred, dt, k1);
  const State k2 = rhs(pred, noise);
  State out = y;
  axpy(out, 0.5 * dt, k1);
  axpy(out, 0.5 * dt, k2);
  return out;
}

/// Standard normal draws from a 64-bit Mersenne Twister. The transform is
/// written out (Box-Muller) so that the sequence does not depend on the
/// standard library's distribution implementation.
class NormalStream {
public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next();

private:
  double uniform_open();

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Noise values held constant over one step, one entry per current.
struct NoiseIncrements {
  std::vector<double> dj1;
  std::vector<double> dj2;
};

/// White-noise intensity matrices for the two current channels.
struct NoiseIntensity {
  RealMatrix channel1;
  RealMatrix channel2;

  static NoiseIntensity from(const BimodalNoiseSpec& spec);
  static NoiseIntensity from(const HybridNoiseSpec& spec);
};

/// Draws increments with covariance intensity / dt. Correlated channels use
/// a square-root factor of the intensity matrix.
class NoiseSampler {
public:
  NoiseSampler(const NoiseIntensity& intensity, double dt);

  NoiseIncrements sample(NormalStream& rng) const;
  std::size_t currents() const noexcept { return static_cast<std::size_t>(factor1_.rows()); }

private:
  RealMatrix factor1_;
  RealMatrix factor2_;
};

NoiseIncrements sample_noise(const NoiseIntensity& intensity, double dt,
                             NormalStream& rng);

} // namespace duoplanck
