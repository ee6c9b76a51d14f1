// SPDX-License-Identifier: Apache-2.0
#include "duoplanck/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "duoplanck/errors.hpp"

namespace duoplanck {

namespace {

const char* const kFixedNames[] = {"trace_re", "trace_im", "min_eig", "purity",
                                   "hermiticity_defect"};

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw UsageError("series: bad number '" + s + "'");
  }
  return v;
}

} // namespace

std::string render_series(const Series& s) {
  if (s.rows.empty()) {
    throw UsageError("write_series: no rows");
  }
  const bool with_err = !s.stderr_rows.empty();
  if (with_err && s.stderr_rows.size() != s.rows.size()) {
    throw UsageError("write_series: stderr rows do not match");
  }
  std::vector<std::string> cols(std::begin(kFixedNames), std::end(kFixedNames));
  cols.insert(cols.end(), s.observable_names.begin(), s.observable_names.end());
  std::string out = "t";
  for (const auto& c : cols) {
    out += ',' + c;
  }
  if (with_err) {
    for (const auto& c : cols) {
      out += ',' + c + "_stderr";
    }
  }
  out += '\n';
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    append_number(out, s.rows[i].t);
    const std::vector<double> v = s.rows[i].values();
    if (v.size() != cols.size()) {
      throw UsageError("write_series: row has the wrong number of observables");
    }
    for (double x : v) {
      out += ',';
      append_number(out, x);
    }
    if (with_err) {
      for (double x : s.stderr_rows[i].values()) {
        out += ',';
        append_number(out, x);
      }
    }
    out += '\n';
  }
  return out;
}

void write_series(const Series& s, const std::filesystem::path& path) {
  write_text(path, render_series(s));
}

Series parse_series(std::string_view text) {
  std::vector<std::string> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) {
    lines.pop_back();
  }
  if (lines.size() < 2) {
    throw UsageError("series: expected a header and at least one row");
  }
  const std::vector<std::string> header = split(lines[0], ',');
  const std::size_t fixed = DiagnosticsRecord::kFixedColumns;
  if (header.size() < 1 + fixed || header[0] != "t") {
    throw UsageError("series: unexpected header");
  }
  const bool with_err = header.back().size() > 7 &&
                        header.back().compare(header.back().size() - 7, 7, "_stderr") == 0;
  const std::size_t value_cols = with_err ? (header.size() - 1) / 2 : header.size() - 1;
  Series s;
  for (std::size_t c = 1 + fixed; c < 1 + value_cols; ++c) {
    s.observable_names.push_back(header[c]);
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = split(lines[i], ',');
    if (f.size() != header.size()) {
      throw UsageError("series: row " + std::to_string(i) + " has the wrong width");
    }
    std::vector<double> v;
    for (std::size_t c = 1; c < 1 + value_cols; ++c) {
      v.push_back(parse_double(f[c]));
    }
    DiagnosticsRecord r;
    r.t = parse_double(f[0]);
    r.set_values(v);
    s.rows.push_back(r);
    if (with_err) {
      std::vector<double> e;
      for (std::size_t c = 1 + value_cols; c < f.size(); ++c) {
        e.push_back(parse_double(f[c]));
      }
      DiagnosticsRecord er;
      er.t = r.t;
      er.set_values(e);
      s.stderr_rows.push_back(er);
    }
  }
  s.trajectories = 1;
  return s;
}

Snapshot snapshot_of(const ComplexMatrix& rho, double t, std::vector<Eigen::Index> dims) {
  Eigen::Index prod = 1;
  for (auto d : dims) {
    prod *= d;
  }
  if (rho.rows() != rho.cols() || prod != rho.rows()) {
    throw UsageError("snapshot: dims do not match the matrix");
  }
  Snapshot s{"density", t, std::move(dims), std::nullopt, {}};
  s.data.reserve(static_cast<std::size_t>(rho.size()));
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      s.data.push_back(rho(i, j));
    }
  }
  return s;
}

Snapshot snapshot_of(const OperatorField& rho, double t) {
  Snapshot s{"hybrid", t, {rho.dim()}, rho.grid(), {}};
  s.data.assign(rho.data().begin(), rho.data().end());
  return s;
}

std::string render_snapshot(const Snapshot& s) {
  nlohmann::ordered_json j;
  j["kind"] = s.kind;
  j["t"] = s.t;
  j["dims"] = s.dims;
  if (s.grid) {
    const PhaseGrid& g = *s.grid;
    j["grid"] = {{"q_min", g.q_min()}, {"q_max", g.q_max()}, {"p_min", g.p_min()},
                 {"p_max", g.p_max()}, {"nq", g.nq()},       {"np", g.np()}};
  }
  nlohmann::ordered_json data = nlohmann::ordered_json::array();
  for (const Complex& z : s.data) {
    data.push_back({z.real(), z.imag()});
  }
  j["data"] = std::move(data);
  return j.dump() + "\n";
}

Snapshot parse_snapshot(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text.begin(), text.end());
    Snapshot s;
    s.kind = j.at("kind").get<std::string>();
    if (s.kind != "density" && s.kind != "hybrid") {
      throw UsageError("snapshot: unknown kind '" + s.kind + "'");
    }
    s.t = j.at("t").get<double>();
    s.dims = j.at("dims").get<std::vector<Eigen::Index>>();
    Eigen::Index d = 1;
    for (auto x : s.dims) {
      d *= x;
    }
    std::size_t expected = static_cast<std::size_t>(d * d);
    if (s.kind == "hybrid") {
      const auto& g = j.at("grid");
      s.grid = PhaseGrid(g.at("q_min").get<double>(), g.at("q_max").get<double>(),
                         g.at("p_min").get<double>(), g.at("p_max").get<double>(),
                         g.at("nq").get<Eigen::Index>(), g.at("np").get<Eigen::Index>());
      expected *= static_cast<std::size_t>(s.grid->nodes());
    }
    const auto& data = j.at("data");
    if (data.size() != expected) {
      throw UsageError("snapshot: expected " + std::to_string(expected) + " entries");
    }
    s.data.reserve(expected);
    for (const auto& z : data) {
      s.data.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    }
    return s;
  } catch (const nlohmann::ordered_json::exception& e) {
    throw UsageError(std::string("snapshot: ") + e.what());
  }
}

void write_snapshot(const Snapshot& s, const std::filesystem::path& path) {
  write_text(path, render_snapshot(s));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw RuntimeError("cannot read '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_snapshot(ss.str());
}

ComplexMatrix density_from(const Snapshot& s) {
  if (s.kind != "density") {
    throw UsageError("snapshot is not a density matrix");
  }
  Eigen::Index d = 1;
  for (auto x : s.dims) {
    d *= x;
  }
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      m(i, j) = s.data[static_cast<std::size_t>(i * d + j)];
    }
  }
  return m;
}

OperatorField field_from(const Snapshot& s) {
  if (s.kind != "hybrid" || !s.grid || s.dims.size() != 1) {
    throw UsageError("snapshot is not a hybrid state");
  }
  OperatorField f(*s.grid, s.dims[0]);
  std::copy(s.data.begin(), s.data.end(), f.data().begin());
  return f;
}

std::string snapshot_filename(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%.6f.json", t);
  return buf;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw RuntimeError("cannot write '" + path.string() + "'");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw RuntimeError("write failed for '" + path.string() + "'");
  }
}

} // namespace duoplanck
