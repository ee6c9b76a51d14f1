// SPDX-License-Identifier: Apache-2.0
#include "duoplanck/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "duoplanck/errors.hpp"

namespace duoplanck {

namespace {

constexpr double kEpsilonGridCoefficient = 0.05;

const std::vector<std::pair<Mode, std::string>>& mode_table() {
  static const std::vector<std::pair<Mode, std::string>> table = {
      {Mode::BimodalRaw, "bimodal-raw"},
      {Mode::BimodalBlurred, "bimodal-blurred"},
      {Mode::Hybrid, "hybrid"},
      {Mode::Aleksandrov, "aleksandrov"},
      {Mode::EnsembleHybrid, "ensemble-hybrid"},
      {Mode::EnsembleBimodal, "ensemble-bimodal"},
      {Mode::Gravity, "gravity"},
      {Mode::CheckKernel, "check-kernel"},
  };
  return table;
}

/// Read-only view of one JSON node that knows its dotted path, so every
/// rejection can name the offending field.
class Reader {
public:
  Reader(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }
  const Json& json() const noexcept { return *j_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError((path_.empty() ? std::string("config") : path_) + ": " + msg);
  }

  void object(std::initializer_list<const char*> allowed) const {
    if (!j_->is_object()) {
      fail("expected an object");
    }
    for (const auto& item : j_->items()) {
      bool ok = false;
      for (const char* a : allowed) {
        if (item.key() == a) {
          ok = true;
          break;
        }
      }
      if (!ok) {
        Reader(item.value(), child(item.key())).fail("unknown key");
      }
    }
  }

  bool has(const char* key) const { return j_->is_object() && j_->contains(key); }

  Reader at(const char* key) const {
    if (!has(key)) {
      Reader(*j_, child(key)).fail("missing required field");
    }
    return Reader((*j_)[key], child(key));
  }

  Reader at(std::size_t i) const {
    return Reader((*j_)[i], path_ + "[" + std::to_string(i) + "]");
  }

  std::size_t array(std::size_t min_size = 0) const {
    if (!j_->is_array()) {
      fail("expected an array");
    }
    if (j_->size() < min_size) {
      fail("expected at least " + std::to_string(min_size) + " entries");
    }
    return j_->size();
  }

  double number() const {
    if (!j_->is_number()) {
      fail("expected a number");
    }
    const double v = j_->get<double>();
    if (!std::isfinite(v)) {
      fail("expected a finite number");
    }
    return v;
  }

  double positive() const {
    const double v = number();
    if (!(v > 0.0)) {
      fail("must be > 0");
    }
    return v;
  }

  std::int64_t integer() const {
    if (!j_->is_number_integer()) {
      fail("expected an integer");
    }
    return j_->get<std::int64_t>();
  }

  std::uint64_t unsigned_integer() const {
    if (j_->is_number_unsigned()) {
      return j_->get<std::uint64_t>();
    }
    const std::int64_t v = integer();
    if (v < 0) {
      fail("must be >= 0");
    }
    return static_cast<std::uint64_t>(v);
  }

  bool boolean() const {
    if (!j_->is_boolean()) {
      fail("expected true or false");
    }
    return j_->get<bool>();
  }

  std::string string() const {
    if (!j_->is_string()) {
      fail("expected a string");
    }
    return j_->get<std::string>();
  }

  double number_or(const char* key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
  }
  bool boolean_or(const char* key, bool fallback) const {
    return has(key) ? at(key).boolean() : fallback;
  }

private:
  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const Json* j_;
  std::string path_;
};

/// Calls `f` and prefixes any library error with the reader's path.
template <class F>
auto guarded(const Reader& r, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    r.fail(e.what());
  }
}

RealMatrix real_matrix(const Reader& r) {
  const std::size_t rows = r.array(1);
  std::size_t cols = 0;
  RealMatrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    const Reader row = r.at(i);
    const std::size_t n = row.array(1);
    if (i == 0) {
      cols = n;
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (n != cols) {
      row.fail("ragged matrix row");
    }
    for (std::size_t j = 0; j < n; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row.at(j).number();
    }
  }
  return m;
}

RealVector real_vector(const Reader& r) {
  const std::size_t n = r.array(1);
  RealVector v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    v(static_cast<Eigen::Index>(i)) = r.at(i).number();
  }
  return v;
}

ComplexMatrix parse_operator(const Reader& r) {
  if (r.has("pauli")) {
    r.object({"pauli"});
    const std::string p = r.at("pauli").string();
    if (p == "x") return pauli_x();
    if (p == "y") return pauli_y();
    if (p == "z") return pauli_z();
    if (p == "i") return identity(2);
    r.at("pauli").fail("expected one of x, y, z, i");
  }
  if (r.has("diag")) {
    r.object({"diag"});
    const RealVector d = real_vector(r.at("diag"));
    return d.cast<Complex>().asDiagonal();
  }
  r.object({"re", "im"});
  const RealMatrix re = real_matrix(r.at("re"));
  RealMatrix im = RealMatrix::Zero(re.rows(), re.cols());
  if (r.has("im")) {
    im = real_matrix(r.at("im"));
    if (im.rows() != re.rows() || im.cols() != re.cols()) {
      r.at("im").fail("shape differs from re");
    }
  }
  if (re.rows() != re.cols()) {
    r.fail("operator must be square");
  }
  ComplexMatrix m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

ComplexMatrix parse_hermitian(const Reader& r, Eigen::Index dim) {
  ComplexMatrix m = parse_operator(r);
  if (dim > 0 && m.rows() != dim) {
    r.fail("expected dimension " + std::to_string(dim) + ", got " + std::to_string(m.rows()));
  }
  if (hermiticity_defect(m) > kHermitianTolerance) {
    r.fail("operator must be Hermitian");
  }
  return m;
}

ComplexVector parse_vector(const Reader& r) {
  r.object({"re", "im"});
  const RealVector re = real_vector(r.at("re"));
  RealVector im = RealVector::Zero(re.size());
  if (r.has("im")) {
    im = real_vector(r.at("im"));
    if (im.size() != re.size()) {
      r.at("im").fail("length differs from re");
    }
  }
  ComplexVector v(re.size());
  v.real() = re;
  v.imag() = im;
  return v;
}

PhaseExpression parse_expression(const Reader& r) {
  PhaseExpression e;
  const std::size_t n = r.array(1);
  for (std::size_t i = 0; i < n; ++i) {
    const Reader t = r.at(i);
    if (t.has("gaussian")) {
      t.object({"gaussian"});
      const Reader g = t.at("gaussian");
      g.object({"c", "q0", "p0", "s", "sq", "sp"});
      PhaseExpression::Gaussian gs;
      gs.coef = g.at("c").number();
      gs.q0 = g.at("q0").number();
      gs.p0 = g.at("p0").number();
      if (g.has("s")) {
        if (g.has("sq") || g.has("sp")) {
          g.fail("give either s or sq and sp");
        }
        gs.sq = gs.sp = g.at("s").positive();
      } else {
        gs.sq = g.at("sq").positive();
        gs.sp = g.at("sp").positive();
      }
      e.gaussians.push_back(gs);
    } else {
      t.object({"c", "q", "p"});
      PhaseExpression::Monomial m;
      m.coef = t.at("c").number();
      m.q_power = t.has("q") ? static_cast<int>(t.at("q").integer()) : 0;
      m.p_power = t.has("p") ? static_cast<int>(t.at("p").integer()) : 0;
      if (m.q_power < 0 || m.p_power < 0 || m.q_power > 8 || m.p_power > 8) {
        t.fail("powers must lie in 0..8");
      }
      e.monomials.push_back(m);
    }
  }
  return e;
}

PhaseGrid parse_grid(const Reader& r) {
  r.object({"q_min", "q_max", "p_min", "p_max", "nq", "np"});
  const double q0 = r.at("q_min").number();
  const double q1 = r.at("q_max").number();
  const double p0 = r.at("p_min").number();
  const double p1 = r.at("p_max").number();
  const std::int64_t nq = r.at("nq").integer();
  const std::int64_t np = r.at("np").integer();
  if (nq > 4096 || np > 4096) {
    r.fail("nq and np must not exceed 4096");
  }
  return guarded(r, [&] { return PhaseGrid(q0, q1, p0, p1, nq, np); });
}

IntegratorConfig parse_integrator(const Reader& r, Mode mode) {
  r.object({"dt", "t_end", "record_stride", "scheme"});
  IntegratorConfig c;
  c.dt = r.at("dt").positive();
  c.t_end = r.at("t_end").positive();
  c.record_stride = r.has("record_stride") ? r.at("record_stride").integer() : 1;
  const bool stochastic = is_ensemble(mode);
  c.scheme = stochastic ? Scheme::HeunStratonovich : Scheme::Rk4;
  if (r.has("scheme")) {
    const std::string s = r.at("scheme").string();
    if (s == "rk4") {
      c.scheme = Scheme::Rk4;
    } else if (s == "heun-stratonovich") {
      c.scheme = Scheme::HeunStratonovich;
    } else {
      r.at("scheme").fail("expected rk4 or heun-stratonovich");
    }
  }
  if (stochastic && c.scheme != Scheme::HeunStratonovich) {
    r.at("scheme").fail("ensemble modes require heun-stratonovich");
  }
  guarded(r, [&] { c.validate(); });
  if (c.steps() > 100000000) {
    r.fail("more than 1e8 steps");
  }
  return c;
}

OutputOptions parse_output(const Reader& root) {
  OutputOptions o;
  if (!root.has("output")) {
    return o;
  }
  const Reader r = root.at("output");
  r.object({"snapshot_stride", "snapshots"});
  if (r.has("snapshot_stride")) {
    o.snapshot_stride = r.at("snapshot_stride").integer();
    if (o.snapshot_stride < 0) {
      r.at("snapshot_stride").fail("must be >= 0");
    }
  }
  o.snapshots = r.boolean_or("snapshots", true);
  return o;
}

EnsembleOptions parse_ensemble(const Reader& root, const RunConfig& cfg,
                               std::initializer_list<const char*> allowed) {
  const Reader r = root.at("noise");
  r.object(allowed);
  EnsembleOptions e;
  const std::int64_t m = r.at("trajectories").integer();
  if (m < 1 || m > 100000000) {
    r.at("trajectories").fail("must lie in 1..1e8");
  }
  e.trajectories = static_cast<std::size_t>(m);
  if (r.has("threads")) {
    const std::int64_t t = r.at("threads").integer();
    if (t < 0 || t > 1024) {
      r.at("threads").fail("must lie in 0..1024");
    }
    e.threads = static_cast<unsigned>(t);
  }
  if (!cfg.seed()) {
    Reader(root.json(), "seed").fail("required for ensemble modes (config or --seed)");
  }
  e.seed = *cfg.seed();
  return e;
}

// ----- canonical subsystem 2 -------------------------------------------------

/// Realizes c q^m p^n on the canonical grid with symmetric ordering.
ComplexMatrix canonical_operator(const Reader& r, const CanonicalGrid2& g) {
  const PhaseExpression e = parse_expression(r);
  if (!e.gaussians.empty()) {
    r.fail("gaussian terms are not available for operators on the canonical subsystem");
  }
  const Eigen::Index n = g.n;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& m : e.monomials) {
    ComplexMatrix qm = identity(n);
    ComplexMatrix pn = identity(n);
    for (int k = 0; k < m.q_power; ++k) qm = qm * g.q;
    for (int k = 0; k < m.p_power; ++k) pn = pn * g.p;
    out += m.coef * 0.5 * (qm * pn + pn * qm);
  }
  return 0.5 * (out + out.adjoint());
}

struct System2 {
  std::optional<CanonicalGrid2> grid;
  Eigen::Index dim = 0;
};

System2 parse_system2(const Reader& model, double hbar2) {
  System2 s;
  if (!model.has("system2")) {
    return s;
  }
  const Reader r = model.at("system2");
  r.object({"N", "x_min", "x_max", "momentum"});
  const std::int64_t n = r.at("N").integer();
  if (n > 1024) {
    r.at("N").fail("must not exceed 1024");
  }
  const double x0 = r.at("x_min").number();
  const double x1 = r.at("x_max").number();
  MomentumStencil st = MomentumStencil::Central;
  if (r.has("momentum")) {
    const std::string m = r.at("momentum").string();
    if (m == "spectral") {
      st = MomentumStencil::Spectral;
    } else if (m != "central") {
      r.at("momentum").fail("expected central or spectral");
    }
  }
  s.grid = guarded(r, [&] { return build_canonical_subsystem(n, x0, x1, hbar2, st); });
  s.dim = n;
  return s;
}

ComplexMatrix system2_operator(const Reader& r, const System2& s2) {
  if (s2.grid) {
    return canonical_operator(r, *s2.grid);
  }
  return parse_hermitian(r, 0);
}

ComplexMatrix parse_local_state(const Reader& r, Eigen::Index dim,
                                const CanonicalGrid2* grid) {
  if (r.has("packet")) {
    r.object({"packet"});
    if (grid == nullptr) {
      r.fail("packet states need a canonical system2");
    }
    const Reader p = r.at("packet");
    p.object({"q0", "p0", "width"});
    const double q0 = p.at("q0").number();
    const double p0 = p.at("p0").number();
    const double w = p.at("width").positive();
    const ComplexVector psi = guarded(p, [&] { return gaussian_packet(*grid, q0, p0, w); });
    return psi * psi.adjoint();
  }
  if (r.has("pure")) {
    r.object({"pure"});
    ComplexVector psi = parse_vector(r.at("pure"));
    if (dim > 0 && psi.size() != dim) {
      r.at("pure").fail("expected length " + std::to_string(dim));
    }
    const double nrm = psi.norm();
    if (!(nrm > 0.0)) {
      r.at("pure").fail("zero vector");
    }
    psi /= nrm;
    return psi * psi.adjoint();
  }
  r.object({"rho"});
  const ComplexMatrix m = parse_operator(r.at("rho"));
  if (dim > 0 && m.rows() != dim) {
    r.at("rho").fail("expected dimension " + std::to_string(dim));
  }
  guarded(r.at("rho"), [&] { return DensityOperator(m); });
  return m;
}

std::vector<DensityObservable> parse_density_observables(
    const Reader& root, Eigen::Index d1, Eigen::Index d2, const System2* s2) {
  std::vector<DensityObservable> out;
  if (!root.has("observables")) {
    return out;
  }
  const Reader r = root.at("observables");
  const std::size_t n = r.array();
  for (std::size_t i = 0; i < n; ++i) {
    const Reader o = r.at(i);
    o.object({"name", "op", "on", "part"});
    DensityObservable obs;
    obs.name = o.at("name").string();
    if (obs.name.empty() || obs.name.find_first_of(",\n\r\"") != std::string::npos) {
      o.at("name").fail("must be non-empty without commas, quotes or newlines");
    }
    const std::string on = o.has("on") ? o.at("on").string() : "full";
    const std::string part = o.has("part") ? o.at("part").string() : "re";
    if (part != "re" && part != "im") {
      o.at("part").fail("expected re or im");
    }
    obs.imaginary = part == "im";
    if (on == "full") {
      obs.op = parse_operator(o.at("op"));
      if (obs.op.rows() != d1 * d2) {
        o.at("op").fail("expected dimension " + std::to_string(d1 * d2));
      }
    } else if (on == "system1" && s2 != nullptr) {
      const ComplexMatrix a = parse_operator(o.at("op"));
      if (a.rows() != d1) {
        o.at("op").fail("expected dimension " + std::to_string(d1));
      }
      obs.op = tensor(a, identity(d2));
    } else if (on == "system2" && s2 != nullptr) {
      const ComplexMatrix b = s2->grid ? canonical_operator(o.at("op"), *s2->grid)
                                       : parse_operator(o.at("op"));
      if (b.rows() != d2) {
        o.at("op").fail("expected dimension " + std::to_string(d2));
      }
      obs.op = tensor(identity(d1), b);
    } else {
      o.at("on").fail(s2 != nullptr ? "expected full, system1 or system2" : "expected full");
    }
    out.push_back(std::move(obs));
  }
  return out;
}

} // namespace

std::string mode_name(Mode m) {
  for (const auto& [mode, name] : mode_table()) {
    if (mode == m) {
      return name;
    }
  }
  return "unknown";
}

bool is_ensemble(Mode m) {
  return m == Mode::EnsembleBimodal || m == Mode::EnsembleHybrid;
}

double epsilon_grid(const PhaseGrid& grid) {
  return std::max(1e-8, kEpsilonGridCoefficient * (grid.dq() * grid.dq() + grid.dp() * grid.dp()));
}

RunConfig RunConfig::parse(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  const Reader root(doc, "");
  root.object({"mode", "seed", "model", "grid", "integrator", "noise",
               "initial_state", "observables", "output"});
  const std::string name = root.at("mode").string();
  std::optional<Mode> mode;
  for (const auto& [m, n] : mode_table()) {
    if (n == name) {
      mode = m;
    }
  }
  if (!mode) {
    root.at("mode").fail("unknown mode '" + name + "'");
  }
  std::optional<std::uint64_t> seed;
  if (root.has("seed")) {
    seed = root.at("seed").unsigned_integer();
  }
  RunConfig cfg(std::move(doc), *mode, seed);
  // Building the setup is the semantic half of validation.
  switch (cfg.mode_) {
  case Mode::BimodalRaw:
  case Mode::BimodalBlurred:
  case Mode::EnsembleBimodal:
    (void)build_bimodal(cfg);
    break;
  case Mode::Hybrid:
  case Mode::Aleksandrov:
  case Mode::EnsembleHybrid:
    (void)build_hybrid(cfg);
    break;
  case Mode::Gravity:
    (void)build_gravity(cfg);
    break;
  case Mode::CheckKernel:
    (void)build_kernel_check(cfg);
    break;
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("config: cannot read '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void RunConfig::set_seed(std::uint64_t seed) {
  seed_ = seed;
  doc_["seed"] = seed;
}

std::string RunConfig::serialize() const { return doc_.dump(2) + "\n"; }

BimodalSetup build_bimodal(const RunConfig& cfg) {
  const Reader root(cfg.document(), "");
  if (root.has("grid")) {
    root.at("grid").fail("not used by bimodal modes");
  }
  const Reader model = root.at("model");
  model.object({"hbar1", "hbar2", "h1", "h2", "system2", "currents", "lindblad_check"});
  const double hbar1 = model.at("hbar1").positive();
  const double hbar2 = model.at("hbar2").positive();
  const TwoHbarParams params = guarded(model, [&] { return TwoHbarParams(hbar1, hbar2); });

  const System2 s2 = parse_system2(model, hbar2);
  const ComplexMatrix h1 = parse_hermitian(model.at("h1"), 0);
  const ComplexMatrix h2 = system2_operator(model.at("h2"), s2);
  const Eigen::Index d1 = h1.rows();
  const Eigen::Index d2 = h2.rows();

  std::vector<CurrentPair> currents;
  const Reader cs = model.at("currents");
  const std::size_t nc = cs.array();
  for (std::size_t i = 0; i < nc; ++i) {
    const Reader c = cs.at(i);
    c.object({"j1", "j2", "lambda1", "lambda2", "lambda"});
    CurrentPair cp;
    cp.j1 = parse_hermitian(c.at("j1"), d1);
    cp.j2 = system2_operator(c.at("j2"), s2);
    if (c.has("lambda")) {
      if (c.has("lambda1") || c.has("lambda2")) {
        c.fail("give either lambda or lambda1 and lambda2");
      }
      // lambda2 = lambda hbar2, lambda1 = 1 / (lambda hbar2)
      const double lam = c.at("lambda").positive();
      cp.lambda2 = lam * hbar2;
      cp.lambda1 = 1.0 / (lam * hbar2);
    } else {
      cp.lambda1 = c.at("lambda1").positive();
      cp.lambda2 = c.at("lambda2").positive();
    }
    currents.push_back(std::move(cp));
  }
  BimodalModel bm = guarded(model, [&] { return BimodalModel(h1, h2, currents); });

  BimodalEquation eq = BimodalEquation::Raw;
  if (cfg.mode() == Mode::BimodalBlurred) {
    eq = BimodalEquation::Blurred;
    if (model.boolean_or("lindblad_check", false)) {
      guarded(model.at("lindblad_check"), [&] { bm.require_lindblad_form(); });
      eq = BimodalEquation::Lindblad;
    }
  } else if (model.has("lindblad_check")) {
    model.at("lindblad_check").fail("only valid in bimodal-blurred mode");
  }

  const Reader init = root.at("initial_state");
  ComplexMatrix rho0;
  if (init.has("product")) {
    init.object({"product"});
    const Reader p = init.at("product");
    p.object({"system1", "system2"});
    const ComplexMatrix r1 = parse_local_state(p.at("system1"), d1, nullptr);
    const ComplexMatrix r2 = parse_local_state(p.at("system2"), d2, s2.grid ? &*s2.grid : nullptr);
    rho0 = tensor(r1, r2);
  } else {
    rho0 = parse_local_state(init, d1 * d2, nullptr);
  }

  std::vector<DensityObservable> obs = parse_density_observables(root, d1, d2, &s2);
  IntegratorConfig integ = parse_integrator(root.at("integrator"), cfg.mode());
  std::optional<EnsembleOptions> ens;
  bool skew = false;
  if (cfg.mode() == Mode::EnsembleBimodal) {
    ens = parse_ensemble(root, cfg, {"trajectories", "threads", "skew_noise"});
    skew = root.at("noise").boolean_or("skew_noise", false);
  } else if (root.has("noise")) {
    root.at("noise").fail("only valid in ensemble modes");
  }
  BimodalDynamics dyn(std::move(bm), params, eq, std::move(obs), skew);
  return BimodalSetup{std::move(dyn), std::move(rho0), integ, parse_output(root), ens};
}

HybridSetup build_hybrid(const RunConfig& cfg) {
  const Reader root(cfg.document(), "");
  const PhaseGrid grid = parse_grid(root.at("grid"));
  const Reader model = root.at("model");

  std::optional<HybridModel> hm;
  if (model.has("single_mode_gravity")) {
    model.object({"single_mode_gravity"});
    const Reader g = model.at("single_mode_gravity");
    g.object({"G", "hbar", "c", "volume", "kappa", "h_matter", "mass_operator", "lambda"});
    const double G = g.at("G").positive();
    const double hbar = g.at("hbar").positive();
    const double c = g.at("c").positive();
    const double v = g.at("volume").positive();
    const double kappa = g.at("kappa").number();
    const ComplexMatrix hmat = parse_hermitian(g.at("h_matter"), 0);
    const ComplexMatrix f = parse_hermitian(g.at("mass_operator"), hmat.rows());
    const double lam = g.at("lambda").number();
    hm = guarded(g, [&] {
      return single_mode_gravity_model(grid, G, hbar, c, v, kappa, hmat, f, lam);
    });
  } else {
    model.object({"hbar", "h1", "h2", "currents", "lambda"});
    const double hbar = model.at("hbar").positive();
    const ComplexMatrix h1 = parse_hermitian(model.at("h1"), 0);
    const GradedField h2 = model.has("h2")
                               ? sample(parse_expression(model.at("h2")), grid)
                               : sample(PhaseExpression{}, grid);
    std::vector<HybridCurrent> currents;
    const Reader cs = model.at("currents");
    const std::size_t nc = cs.array(1);
    for (std::size_t i = 0; i < nc; ++i) {
      const Reader c = cs.at(i);
      c.object({"j1", "j2"});
      currents.push_back({parse_hermitian(c.at("j1"), h1.rows()),
                          sample(parse_expression(c.at("j2")), grid)});
    }
    const Reader lr = model.at("lambda");
    RealMatrix lam;
    if (lr.json().is_number()) {
      lam = RealMatrix::Constant(1, 1, lr.number());
    } else {
      lam = real_matrix(lr);
    }
    if (lam.rows() != static_cast<Eigen::Index>(nc) || lam.cols() != static_cast<Eigen::Index>(nc)) {
      lr.fail("expected a " + std::to_string(nc) + "x" + std::to_string(nc) + " matrix");
    }
    hm = guarded(lr, [&] { return HybridModel(hbar, h1, h2, currents, lam); });
  }

  const Eigen::Index d = hm->dim();
  const Reader init = root.at("initial_state");
  init.object({"sigma", "w"});
  const ComplexMatrix sigma = parse_local_state(init.at("sigma"), d, nullptr);
  const GradedField w = sample(parse_expression(init.at("w")), grid);
  for (double v : w.value.values) {
    if (v < 0.0) {
      init.at("w").fail("initial distribution must be nonnegative");
    }
  }
  OperatorField rho0 = guarded(init.at("w"), [&] { return make_product_state(sigma, w.value); });

  std::vector<HybridObservable> obs;
  if (root.has("observables")) {
    const Reader r = root.at("observables");
    const std::size_t n = r.array();
    for (std::size_t i = 0; i < n; ++i) {
      const Reader o = r.at(i);
      o.object({"name", "op", "weight", "part"});
      HybridObservable ob;
      ob.name = o.at("name").string();
      if (ob.name.empty() || ob.name.find_first_of(",\n\r\"") != std::string::npos) {
        o.at("name").fail("must be non-empty without commas, quotes or newlines");
      }
      if (o.has("op")) {
        ob.op = parse_operator(o.at("op"));
        if (ob.op.rows() != d) {
          o.at("op").fail("expected dimension " + std::to_string(d));
        }
      }
      if (o.has("weight")) {
        ob.weight = sample(parse_expression(o.at("weight")), grid).value.values;
      }
      const std::string part = o.has("part") ? o.at("part").string() : "re";
      if (part != "re" && part != "im") {
        o.at("part").fail("expected re or im");
      }
      ob.imaginary = part == "im";
      obs.push_back(std::move(ob));
    }
  }

  IntegratorConfig integ = parse_integrator(root.at("integrator"), cfg.mode());
  std::optional<EnsembleOptions> ens;
  if (cfg.mode() == Mode::EnsembleHybrid) {
    ens = parse_ensemble(root, cfg, {"trajectories", "threads"});
  } else if (root.has("noise")) {
    root.at("noise").fail("only valid in ensemble modes");
  }
  const HybridEquation eq = cfg.mode() == Mode::Aleksandrov ? HybridEquation::Aleksandrov
                                                            : HybridEquation::Hybrid;
  HybridDynamics dyn(std::move(*hm), eq, std::move(obs));
  return HybridSetup{std::move(dyn), std::move(rho0), integ, parse_output(root), ens,
                     epsilon_grid(grid)};
}

GravitySetup build_gravity(const RunConfig& cfg) {
  const Reader root(cfg.document(), "");
  const Reader model = root.at("model");
  model.object({"G", "hbar", "c", "a", "self_energy", "h_matter", "sites"});
  const double G = model.at("G").positive();
  const double hbar = model.at("hbar").positive();
  const double c = model.at("c").positive();
  const double a = model.at("a").positive();
  const bool self = model.boolean_or("self_energy", true);
  const ComplexMatrix hmat = parse_hermitian(model.at("h_matter"), 0);
  const Reader sites = model.at("sites");
  const std::size_t n = sites.array(1);
  std::vector<Position> pos;
  std::vector<ComplexMatrix> f;
  for (std::size_t i = 0; i < n; ++i) {
    const Reader s = sites.at(i);
    s.object({"position", "f"});
    const RealVector x = real_vector(s.at("position"));
    if (x.size() != 3) {
      s.at("position").fail("expected three coordinates");
    }
    pos.push_back({x(0), x(1), x(2)});
    f.push_back(parse_hermitian(s.at("f"), hmat.rows()));
  }
  MassLattice lattice = guarded(sites, [&] { return MassLattice(pos, a); });
  GravityModel gm = guarded(model, [&] { return GravityModel(G, hbar, c, hmat, f, self); });
  const ComplexMatrix rho0 = parse_local_state(root.at("initial_state"), hmat.rows(), nullptr);
  std::vector<DensityObservable> obs =
      parse_density_observables(root, hmat.rows(), 1, nullptr);
  IntegratorConfig integ = parse_integrator(root.at("integrator"), cfg.mode());
  for (const char* key : {"grid", "noise"}) {
    if (root.has(key)) {
      root.at(key).fail("not used by gravity mode");
    }
  }
  GravityDynamics dyn = guarded(model, [&] {
    return GravityDynamics(std::move(gm), std::move(lattice), std::move(obs));
  });
  return GravitySetup{std::move(dyn), rho0, integ, parse_output(root)};
}

KernelSetup build_kernel_check(const RunConfig& cfg) {
  const Reader root(cfg.document(), "");
  root.object({"mode", "seed", "model", "output"});
  const Reader model = root.at("model");
  model.object({"G", "hbar", "k"});
  KernelSetup k;
  k.G = model.at("G").positive();
  k.hbar = model.at("hbar").positive();
  const Reader ks = model.at("k");
  const std::size_t n = ks.array(1);
  for (std::size_t i = 0; i < n; ++i) {
    k.k.push_back(ks.at(i).positive());
  }
  return k;
}

} // namespace duoplanck
