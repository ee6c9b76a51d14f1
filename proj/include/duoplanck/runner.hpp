// SPDX-License-Identifier: Apache-2.0
//
// Executes a validated configuration and writes its output files.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "duoplanck/config.hpp"

namespace duoplanck {

struct RunSummary {
  std::string mode;
  std::int64_t steps = 0;
  std::size_t trajectories = 0;
  double final_trace = 0.0;
  double final_min_eig = 0.0;
  double wall_time_s = 0.0;
  std::optional<double> epsilon_grid;
  std::optional<double> kernel_max_rel_error;
  std::vector<std::string> files;
};

/// Runs `cfg` and writes series.csv, snapshot_<t>.json files and
/// summary.json into `out_dir` (created if needed).
RunSummary execute(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// "mode=<m> steps=<n> final_trace=<x> final_min_eig=<y>"
std::string summary_line(const RunSummary& s);

} // namespace duoplanck
