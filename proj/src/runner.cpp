// SPDX-License-Identifier: Apache-2.0
#include "duoplanck/runner.hpp"

#include <chrono>
#include <cstdio>

#include "duoplanck/errors.hpp"
#include "duoplanck/io.hpp"

namespace duoplanck {

namespace {

namespace fs = std::filesystem;

nlohmann::ordered_json final_row_json(const Series& s) {
  nlohmann::ordered_json j;
  const DiagnosticsRecord& r = s.rows.back();
  j["t"] = r.t;
  j["trace_re"] = r.trace_re;
  j["trace_im"] = r.trace_im;
  j["min_eig"] = r.min_eig;
  j["purity"] = r.purity;
  j["hermiticity_defect"] = r.hermiticity_defect;
  for (std::size_t i = 0; i < r.observables.size(); ++i) {
    j["observables"][s.observable_names[i]] = r.observables[i];
  }
  return j;
}

struct Writer {
  fs::path dir;
  RunSummary* summary;
  nlohmann::ordered_json final_row;

  void series(const Series& s) {
    write_series(s, dir / "series.csv");
    final_row = final_row_json(s);
    summary->files.push_back("series.csv");
  }

  void snapshot(const Snapshot& s) {
    const std::string name = snapshot_filename(s.t);
    write_snapshot(s, dir / name);
    summary->files.push_back(name);
  }
};

bool snapshot_due(const OutputOptions& o, std::int64_t k, std::int64_t steps) {
  if (!o.snapshots) {
    return false;
  }
  return k == steps || (o.snapshot_stride > 0 && k % o.snapshot_stride == 0);
}

void finish(RunSummary& s, const Series& series) {
  const DiagnosticsRecord& last = series.rows.back();
  s.final_trace = last.trace_re;
  s.final_min_eig = last.min_eig;
  s.trajectories = series.trajectories;
}

template <class Dyn, class Snap>
void run_dynamics(const Dyn& dyn, const typename Dyn::State& rho0,
                  const IntegratorConfig& integ, const OutputOptions& out,
                  const std::optional<EnsembleOptions>& ens, Writer& w, Snap snap) {
  const std::int64_t steps = integ.steps();
  w.summary->steps = steps;
  if (ens) {
    const auto r = run_ensemble(dyn, rho0, integ, ens->trajectories, ens->seed, ens->threads);
    w.series(r.series);
    if (out.snapshots) {
      w.snapshot(snap(r.final_state, static_cast<double>(steps) * integ.dt));
    }
    finish(*w.summary, r.series);
    return;
  }
  const auto hook = [&](std::int64_t k, double t, const typename Dyn::State& st) {
    if (snapshot_due(out, k, steps)) {
      w.snapshot(snap(st, t));
    }
  };
  const auto r = run_deterministic(dyn, rho0, integ, hook);
  w.series(r.series);
  finish(*w.summary, r.series);
}

} // namespace

RunSummary execute(const RunConfig& cfg, const fs::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw RuntimeError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
  }
  RunSummary summary;
  summary.mode = mode_name(cfg.mode());
  Writer w{out_dir, &summary, {}};
  nlohmann::ordered_json extra;

  switch (cfg.mode()) {
  case Mode::BimodalRaw:
  case Mode::BimodalBlurred:
  case Mode::EnsembleBimodal: {
    const BimodalSetup s = build_bimodal(cfg);
    const auto& sp = s.dynamics.model().space();
    std::vector<Eigen::Index> dims{sp.d1, sp.d2};
    run_dynamics(s.dynamics, s.rho0, s.integrator, s.output, s.ensemble, w,
                 [&](const ComplexMatrix& m, double t) { return snapshot_of(m, t, dims); });
    break;
  }
  case Mode::Hybrid:
  case Mode::Aleksandrov:
  case Mode::EnsembleHybrid: {
    const HybridSetup s = build_hybrid(cfg);
    summary.epsilon_grid = s.epsilon_grid;
    run_dynamics(s.dynamics, s.rho0, s.integrator, s.output, s.ensemble, w,
                 [](const OperatorField& f, double t) { return snapshot_of(f, t); });
    break;
  }
  case Mode::Gravity: {
    const GravitySetup s = build_gravity(cfg);
    std::vector<Eigen::Index> dims{s.dynamics.model().dim()};
    run_dynamics(s.dynamics, s.rho0, s.integrator, s.output, std::nullopt, w,
                 [&](const ComplexMatrix& m, double t) { return snapshot_of(m, t, dims); });
    extra["kernel_diagonal"] = s.dynamics.kernel().matrix(0, 0);
    break;
  }
  case Mode::CheckKernel: {
    const KernelSetup s = build_kernel_check(cfg);
    summary.kernel_max_rel_error = verify_kernel_constraint(s.k, s.G, s.hbar);
    break;
  }
  }

  summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::ordered_json j;
  j["mode"] = summary.mode;
  j["steps"] = summary.steps;
  j["trajectories"] = summary.trajectories;
  if (cfg.seed()) {
    j["seed"] = *cfg.seed();
  }
  j["wall_time_s"] = summary.wall_time_s;
  if (!w.final_row.is_null()) {
    j["final"] = w.final_row;
  }
  if (summary.epsilon_grid) {
    j["epsilon_grid"] = *summary.epsilon_grid;
  }
  if (summary.kernel_max_rel_error) {
    j["kernel_max_rel_error"] = *summary.kernel_max_rel_error;
  }
  for (const auto& item : extra.items()) {
    j[item.key()] = item.value();
  }
  j["files"] = summary.files;
  write_text(out_dir / "summary.json", j.dump(2) + "\n");
  return summary;
}

std::string summary_line(const RunSummary& s) {
  char buf[256];
  if (s.kernel_max_rel_error) {
    std::snprintf(buf, sizeof buf, "mode=%s max_rel_error=%.3e", s.mode.c_str(),
                  *s.kernel_max_rel_error);
  } else {
    std::snprintf(buf, sizeof buf, "mode=%s steps=%lld final_trace=%.12g final_min_eig=%.6e",
                  s.mode.c_str(), static_cast<long long>(s.steps), s.final_trace,
                  s.final_min_eig);
  }
  return buf;
}

} // namespace duoplanck
