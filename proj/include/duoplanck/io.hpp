// SPDX-License-Identifier: Apache-2.0
//
// CSV time series and JSON state snapshots.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duoplanck/simulation.hpp"

namespace duoplanck {

/// Header plus one line per row; 17 significant digits, LF endings. When the
/// series carries standard errors, a `<column>_stderr` column follows the
/// value columns for every column but t.
std::string render_series(const Series& s);
void write_series(const Series& s, const std::filesystem::path& path);
/// Inverse of render_series (values only; names are restored from the header).
Series parse_series(std::string_view text);

struct Snapshot {
  std::string kind;  // "density" or "hybrid"
  double t = 0.0;
  std::vector<Eigen::Index> dims;
  std::optional<PhaseGrid> grid;
  /// Row-major within a matrix, node-major across the grid.
  std::vector<Complex> data;
};

/// `dims` lists the tensor factors (one entry for an unstructured matrix).
Snapshot snapshot_of(const ComplexMatrix& rho, double t, std::vector<Eigen::Index> dims);
Snapshot snapshot_of(const OperatorField& rho, double t);

std::string render_snapshot(const Snapshot& s);
Snapshot parse_snapshot(std::string_view text);
void write_snapshot(const Snapshot& s, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

ComplexMatrix density_from(const Snapshot& s);
OperatorField field_from(const Snapshot& s);

/// snapshot_<t>.json with t printed to six decimals.
std::string snapshot_filename(double t);

/// Writes `text` byte for byte; throws RuntimeError on failure.
void write_text(const std::filesystem::path& path, std::string_view text);

} // namespace duoplanck
