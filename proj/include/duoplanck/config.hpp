// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: a JSON document validated against the schema of its
// mode and turned into ready-to-run dynamics.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "duoplanck/simulation.hpp"

namespace duoplanck {

using Json = nlohmann::ordered_json;

enum class Mode {
  BimodalRaw,
  BimodalBlurred,
  Hybrid,
  Aleksandrov,
  EnsembleHybrid,
  EnsembleBimodal,
  Gravity,
  CheckKernel,
};

std::string mode_name(Mode m);
bool is_ensemble(Mode m);

class RunConfig {
public:
  /// Parses and fully validates; throws ConfigError naming the field.
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::string& path);

  Mode mode() const noexcept { return mode_; }
  const Json& document() const noexcept { return doc_; }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }
  /// Overrides (or supplies) the top-level seed.
  void set_seed(std::uint64_t seed);

  /// Pretty-printed document; parse(serialize()) reproduces this config.
  std::string serialize() const;

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.doc_ == b.doc_;
  }

private:
  RunConfig(Json doc, Mode mode, std::optional<std::uint64_t> seed)
      : doc_(std::move(doc)), mode_(mode), seed_(seed) {}

  Json doc_;
  Mode mode_;
  std::optional<std::uint64_t> seed_;
};

struct OutputOptions {
  /// Steps between snapshots; 0 writes only the final one.
  std::int64_t snapshot_stride = 0;
  bool snapshots = true;
};

struct EnsembleOptions {
  std::size_t trajectories = 0;
  unsigned threads = 0;
  std::uint64_t seed = 0;
};

struct BimodalSetup {
  BimodalDynamics dynamics;
  ComplexMatrix rho0;
  IntegratorConfig integrator;
  OutputOptions output;
  std::optional<EnsembleOptions> ensemble;
};

struct HybridSetup {
  HybridDynamics dynamics;
  OperatorField rho0;
  IntegratorConfig integrator;
  OutputOptions output;
  std::optional<EnsembleOptions> ensemble;
  double epsilon_grid = 0.0;
};

struct GravitySetup {
  GravityDynamics dynamics;
  ComplexMatrix rho0;
  IntegratorConfig integrator;
  OutputOptions output;
};

struct KernelSetup {
  double G = 0.0;
  double hbar = 0.0;
  std::vector<double> k;
};

BimodalSetup build_bimodal(const RunConfig& cfg);
HybridSetup build_hybrid(const RunConfig& cfg);
GravitySetup build_gravity(const RunConfig& cfg);
KernelSetup build_kernel_check(const RunConfig& cfg);

/// Recorded pointwise-negativity tolerance of a hybrid grid:
/// max(1e-8, C (dq^2 + dp^2)).
double epsilon_grid(const PhaseGrid& grid);

} // namespace duoplanck
