// SPDX-License-Identifier: Apache-2.0
//
// Runs of the dynamics: deterministic time series and noise ensembles with
// per-step diagnostics.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "duoplanck/bimodal.hpp"
#include "duoplanck/errors.hpp"
#include "duoplanck/gravity.hpp"
#include "duoplanck/hybrid.hpp"
#include "duoplanck/integrators.hpp"

namespace duoplanck {

/// One row of a time series. `observables` follow the order in which the
/// dynamics declared them.
struct DiagnosticsRecord {
  double t = 0.0;
  double trace_re = 0.0;
  double trace_im = 0.0;
  double min_eig = 0.0;
  double purity = 0.0;
  double hermiticity_defect = 0.0;
  std::vector<double> observables;

  static constexpr std::size_t kFixedColumns = 5;

  /// Everything but t, fixed columns first.
  std::vector<double> values() const;
  void set_values(const std::vector<double>& v);
};

struct Series {
  std::vector<std::string> observable_names;
  std::vector<DiagnosticsRecord> rows;
  /// Standard errors of `rows` (ensemble runs only; t column copied).
  std::vector<DiagnosticsRecord> stderr_rows;
  std::size_t trajectories = 0;
};

/// Re or Im of tr(op rho).
struct DensityObservable {
  std::string name;
  ComplexMatrix op;
  bool imaginary = false;
};

/// Re or Im of the phase-space integral of weight(q, p) tr(op rho(q, p)).
/// An empty `op` means the identity and an empty `weight` means 1.
struct HybridObservable {
  std::string name;
  ComplexMatrix op;
  std::vector<double> weight;
  bool imaginary = false;
};

enum class BimodalEquation { Raw, Blurred, Lindblad };

/// Two-hbar dynamics on a density matrix of the product space. Ensemble
/// trajectories always follow the noisy raw equation.
class BimodalDynamics {
public:
  using State = ComplexMatrix;

  BimodalDynamics(BimodalModel model, TwoHbarParams params, BimodalEquation eq,
                  std::vector<DensityObservable> observables,
                  bool skew_noise = false);

  State rhs(const State& rho) const;
  State noisy_rhs(const State& rho, const NoiseIncrements& noise) const;
  NoiseIntensity noise() const;
  DiagnosticsRecord diagnose(double t, const State& rho) const;
  std::vector<std::string> observable_names() const;

  const BimodalModel& model() const noexcept { return model_; }
  const TwoHbarParams& params() const noexcept { return params_; }

private:
  BimodalModel model_;
  TwoHbarParams params_;
  BimodalEquation eq_;
  std::vector<DensityObservable> observables_;
  bool skew_noise_;
};

enum class HybridEquation { Hybrid, Aleksandrov };

/// Hybrid or bare Aleksandrov evolution of an operator field. Ensemble
/// trajectories follow the noisy Aleksandrov equation.
class HybridDynamics {
public:
  using State = OperatorField;

  HybridDynamics(HybridModel model, HybridEquation eq,
                 std::vector<HybridObservable> observables);

  State rhs(const State& rho) const;
  State noisy_rhs(const State& rho, const NoiseIncrements& noise) const;
  NoiseIntensity noise() const;
  DiagnosticsRecord diagnose(double t, const State& rho) const;
  std::vector<std::string> observable_names() const;

  const HybridModel& model() const noexcept { return model_; }

private:
  HybridModel model_;
  HybridEquation eq_;
  std::vector<HybridObservable> observables_;
};

/// Lattice gravity: matter density matrix under the Newtonian energy and the
/// mass-density dissipator. Deterministic only.
class GravityDynamics {
public:
  using State = ComplexMatrix;

  GravityDynamics(GravityModel model, MassLattice lattice,
                  std::vector<DensityObservable> observables);

  State rhs(const State& rho) const;
  State noisy_rhs(const State& rho, const NoiseIncrements& noise) const;
  NoiseIntensity noise() const;
  DiagnosticsRecord diagnose(double t, const State& rho) const;
  std::vector<std::string> observable_names() const;

  const GravityModel& model() const noexcept { return model_; }
  const GravKernel& kernel() const noexcept { return kernel_; }

private:
  GravityModel model_;
  MassLattice lattice_;
  GravKernel kernel_;
  ComplexMatrix h_total_;
  std::vector<DensityObservable> observables_;
};

template <class Dyn>
struct RunResult {
  Series series;
  typename Dyn::State final_state;
};

namespace detail {

inline bool record_step(std::int64_t k, std::int64_t steps, std::int64_t stride) {
  return k % stride == 0 || k == steps;
}

/// Running mean and sum of squared deviations for a vector of columns.
struct Moments {
  double count = 0.0;
  std::vector<double> mean;
  std::vector<double> m2;

  void add(const std::vector<double>& x);
  void merge(const Moments& o);
};

} // namespace detail

struct NoStepHook {
  template <class State>
  void operator()(std::int64_t, double, const State&) const {}
};

/// Integrates one trajectory without noise, recording every
/// `record_stride` steps and at the final step. `hook(k, t, state)` runs
/// after every step, including k = 0.
template <class Dyn, class Hook = NoStepHook>
RunResult<Dyn> run_deterministic(const Dyn& dyn, typename Dyn::State state,
                                 const IntegratorConfig& cfg, Hook hook = {}) {
  using State = typename Dyn::State;
  cfg.validate();
  const std::int64_t steps = cfg.steps();
  RunResult<Dyn> out{Series{}, state};
  out.series.observable_names = dyn.observable_names();
  out.series.trajectories = 1;
  out.series.rows.push_back(dyn.diagnose(0.0, state));
  hook(std::int64_t{0}, 0.0, state);
  const auto f = [&dyn](const State& y) { return dyn.rhs(y); };
  const auto g = [&dyn](const State& y, int) { return dyn.rhs(y); };
  for (std::int64_t k = 1; k <= steps; ++k) {
    if (cfg.scheme == Scheme::Rk4) {
      state = rk4_step(f, state, cfg.dt);
    } else {
      state = heun_step(g, state, 0, cfg.dt);
    }
    if (detail::record_step(k, steps, cfg.record_stride)) {
      out.series.rows.push_back(dyn.diagnose(static_cast<double>(k) * cfg.dt, state));
    }
    hook(k, static_cast<double>(k) * cfg.dt, state);
  }
  out.final_state = std::move(state);
  return out;
}

/// Records of one noisy trajectory, seeded with `seed`.
template <class Dyn>
RunResult<Dyn> run_trajectory(const Dyn& dyn, typename Dyn::State state,
                              const IntegratorConfig& cfg, std::uint64_t seed) {
  using State = typename Dyn::State;
  cfg.validate();
  if (cfg.scheme != Scheme::HeunStratonovich) {
    throw UsageError("stochastic runs require the heun-stratonovich scheme");
  }
  const std::int64_t steps = cfg.steps();
  const NoiseSampler sampler(dyn.noise(), cfg.dt);
  NormalStream rng(seed);
  RunResult<Dyn> out{Series{}, state};
  out.series.observable_names = dyn.observable_names();
  out.series.trajectories = 1;
  out.series.rows.push_back(dyn.diagnose(0.0, state));
  const auto g = [&dyn](const State& y, const NoiseIncrements& n) {
    return dyn.noisy_rhs(y, n);
  };
  for (std::int64_t k = 1; k <= steps; ++k) {
    const NoiseIncrements noise = sampler.sample(rng);
    state = heun_step(g, state, noise, cfg.dt);
    if (detail::record_step(k, steps, cfg.record_stride)) {
      out.series.rows.push_back(dyn.diagnose(static_cast<double>(k) * cfg.dt, state));
    }
  }
  out.final_state = std::move(state);
  return out;
}

/// Trajectories handled by one unit of work. The reduction order depends only
/// on this constant, not on the number of threads.
inline constexpr std::size_t kEnsembleBlock = 32;

/// Mean and standard error over `trajectories` noisy runs; trajectory n uses
/// the seed base_seed + n. `final_state` is the mean final state.
/// `threads` = 0 picks the hardware concurrency.
template <class Dyn>
RunResult<Dyn> run_ensemble(const Dyn& dyn, const typename Dyn::State& state0,
                            const IntegratorConfig& cfg, std::size_t trajectories,
                            std::uint64_t base_seed, unsigned threads = 0) {
  using State = typename Dyn::State;
  if (trajectories == 0) {
    throw UsageError("ensemble: at least one trajectory is required");
  }
  cfg.validate();
  const std::size_t blocks = (trajectories + kEnsembleBlock - 1) / kEnsembleBlock;

  struct Block {
    std::vector<detail::Moments> rows;
    std::vector<double> times;
    State state_sum;
  };
  std::vector<Block> results(blocks, Block{{}, {}, state0});
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(blocks);

  const auto work = [&]() {
    for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
      try {
        Block& blk = results[b];
        const std::size_t first = b * kEnsembleBlock;
        const std::size_t last = std::min(trajectories, first + kEnsembleBlock);
        for (std::size_t n = first; n < last; ++n) {
          RunResult<Dyn> r = run_trajectory(dyn, state0, cfg, base_seed + n);
          if (blk.rows.empty()) {
            blk.rows.resize(r.series.rows.size());
            for (const auto& row : r.series.rows) {
              blk.times.push_back(row.t);
            }
            blk.state_sum = r.final_state;
          } else {
            axpy(blk.state_sum, 1.0, r.final_state);
          }
          for (std::size_t i = 0; i < r.series.rows.size(); ++i) {
            blk.rows[i].add(r.series.rows[i].values());
          }
        }
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };

  unsigned nthreads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, blocks));
  if (nthreads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nthreads; ++i) {
      pool.emplace_back(work);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  std::vector<detail::Moments> total = std::move(results[0].rows);
  State state_sum = std::move(results[0].state_sum);
  for (std::size_t b = 1; b < blocks; ++b) {
    for (std::size_t i = 0; i < total.size(); ++i) {
      total[i].merge(results[b].rows[i]);
    }
    axpy(state_sum, 1.0, results[b].state_sum);
  }

  RunResult<Dyn> out{Series{}, std::move(state_sum)};
  out.final_state *= 1.0 / static_cast<double>(trajectories);
  out.series.observable_names = dyn.observable_names();
  out.series.trajectories = trajectories;
  const double m = static_cast<double>(trajectories);
  for (std::size_t i = 0; i < total.size(); ++i) {
    DiagnosticsRecord mean;
    DiagnosticsRecord err;
    mean.t = results[0].times[i];
    err.t = mean.t;
    mean.set_values(total[i].mean);
    std::vector<double> se(total[i].m2.size(), 0.0);
    if (trajectories > 1) {
      for (std::size_t c = 0; c < se.size(); ++c) {
        se[c] = std::sqrt(std::max(0.0, total[i].m2[c]) / (m - 1.0) / m);
      }
    }
    err.set_values(se);
    out.series.rows.push_back(std::move(mean));
    out.series.stderr_rows.push_back(std::move(err));
  }
  return out;
}

} // namespace duoplanck
