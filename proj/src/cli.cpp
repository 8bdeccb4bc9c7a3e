#include "simcost/cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "simcost/sdp.hpp"

namespace simcost {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double solve_distance(const SuperOperator& a, const SuperOperator& b) {
  DiamondOptions opt;
  opt.tol = 1e-9;
  return diamond_distance(a, b, opt);
}

template <class F>
void parallel_for(std::size_t count, int workers, F&& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, int(count)));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct PoissonSetup {
  MixedUnitaryChannel phi;
  double rate = 0.0;  // T_t = P_{rate t}
};

PoissonSetup poisson_setup(const ModelConfig& cfg) {
  if (cfg.preset == ModelPreset::Pauli) return {pauli_poisson_mixture(cfg.qubits, cfg.tau), 2.0 * cfg.qubits};
  const auto g = cfg.generator();
  if (g.hamiltonian.size() > 0 && g.hamiltonian.norm() > kAlgebraTol)
    throw std::invalid_argument("poisson: the model must be purely dissipative");
  if (g.jumps.empty()) throw std::invalid_argument("poisson: the model has no jumps");
  std::vector<CMatrix> us;
  std::vector<double> w;
  std::vector<Word> words;
  const std::size_t d = g.dim();
  for (std::size_t j = 0; j < g.jumps.size(); ++j) {
    const CMatrix vv = g.jumps[j].adjoint() * g.jumps[j];
    const double c = vv.trace().real() / double(d);
    if (!(c > 0.0) || (vv - c * CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("poisson: every jump must be a multiple of a unitary");
    us.push_back(g.jumps[j] / std::sqrt(c));
    w.push_back(c);
    words.push_back({Gate{Gate::Kind::Explicit, j, 0.0}});
  }
  double rate = 0.0;
  for (double c : w) rate += c;
  auto gs = std::make_shared<const GateSet>(GateSet::explicit_unitaries("jump unitaries", us));
  return {poisson_mixture(w, gs, words), rate};
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::optional<double> kraus_upper(const ModelConfig& cfg, const SuperOperator& phi, const ResourceSet& s,
                                  std::string* method) {
  if (cfg.qubits == 0) return std::nullopt;
  std::vector<std::pair<std::string, KrausHint>> hints;
  if (cfg.resource_kind == "pauli") {
    hints = {{"kraus (maximally mixed replacer)", pauli_mixed_replacer_hint(cfg.qubits)},
             {"kraus (ground-state replacer)", pauli_ground_replacer_hint(cfg.qubits)}};
  } else if (cfg.resource_kind == "environment") {
    hints = {{"kraus (maximally mixed replacer)", environment_replacer_hint(QubitReplacer::MaximallyMixed, cfg.qubits)},
             {"kraus (ground-state replacer)", environment_replacer_hint(QubitReplacer::Ground, cfg.qubits)}};
  }
  const std::size_t k = cfg.environment() ? cfg.ancilla_dim() : 1;
  for (const auto& [name, h] : hints) {
    if (hint_residual(h, s, phi, k) > 1e-9) continue;
    *method = name;
    return complexity_upper_kraus(phi, s, h, k);
  }
  return std::nullopt;
}

}  // namespace

const std::vector<std::string>& scheme_names() {
  static const std::vector<std::string> names{"symmetric", "poisson", "dilated", "exact-ad", "exact-pauli"};
  return names;
}

int default_workers() {
  if (const char* env = std::getenv("SIMCOST_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w > 0) return w;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit: column lengths differ");
  if (x.size() < 4) throw std::invalid_argument("fit: need at least 4 rows");
  const std::size_t n = x.size();
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit: values must be positive for a log-log fit");
    a(i, 0) = std::log(x[i]);
    a(i, 1) = 1.0;
    b(i) = std::log(y[i]);
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd res = b - a * c;
  const double mean = b.mean();
  const double tot = (b.array() - mean).square().sum();
  FitResult f;
  f.slope = c(0);
  f.intercept = c(1);
  f.r2 = tot > 0.0 ? 1.0 - res.squaredNorm() / tot : 1.0;
  f.rows = n;
  return f;
}

FitResult cmd_fit(const std::string& csv_path, const std::string& x_col, const std::string& y_col) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("fit: cannot open '" + csv_path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("fit: empty file");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
    return out;
  };
  const auto header = split(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("fit: no column '" + name + "'");
    return std::size_t(it - header.begin());
  };
  const std::size_t cx = col(x_col), cy = col(y_col);
  std::vector<double> x, y;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size()) throw ConfigError("fit: ragged row");
    try {
      x.push_back(std::stod(f[cx]));
      y.push_back(std::stod(f[cy]));
    } catch (const std::exception&) {
      throw ConfigError("fit: non-numeric entry");
    }
  }
  return fit_loglog(x, y);
}

RunReport cmd_simulate(const ModelConfig& cfg, const std::string& scheme, int workers) {
  require(std::find(scheme_names().begin(), scheme_names().end(), scheme) != scheme_names().end(),
          "simulate: unknown scheme '" + scheme + "'");
  const auto t0 = Clock::now();
  RunReport rep;
  rep.model = cfg.name;
  rep.scheme = scheme;
  const auto g = cfg.generator();
  const Semigroup sg(g);

  struct Point {
    double t;
    std::optional<int> N;
  };
  std::vector<Point> points;
  std::optional<PoissonSetup> poisson;
  if (scheme == "poisson") {
    poisson = poisson_setup(cfg);
    std::vector<int> ns = cfg.sweep_N;
    if (ns.empty()) ns = {1, 2, 3, 4, 5, 6};
    for (double t : cfg.sweep_t)
      for (int n : ns) points.push_back({t, n});
  } else {
    for (double t : cfg.sweep_t) points.push_back({t, std::nullopt});
  }
  if (scheme == "symmetric") {
    require(g.hamiltonian.norm() <= kAlgebraTol, "symmetric: the model must be purely dissipative");
    for (const auto& v : g.jumps) require(is_hermitian(v), "symmetric: every jump must be Hermitian");
  } else if (scheme == "dilated") {
    require(g.hamiltonian.norm() <= kAlgebraTol, "dilated: the model must be purely dissipative");
  } else if (scheme == "exact-ad") {
    require(cfg.preset == ModelPreset::AmplitudeDamping, "exact-ad: needs the amplitude_damping preset");
  } else if (scheme == "exact-pauli") {
    require(cfg.preset == ModelPreset::Pauli && cfg.qubits == 1, "exact-pauli: needs the one-qubit pauli preset");
  }
  rep.seconds["setup"] = seconds_since(t0);

  const auto t1 = Clock::now();
  rep.rows.resize(points.size());
  parallel_for(points.size(), workers, [&](std::size_t i) {
    const double t = points[i].t;
    SimRow row;
    row.t = t;
    row.N = points[i].N;
    SuperOperator approx;
    if (scheme == "symmetric") {
      const Scheme s = symmetric_scheme(g, t, cfg.tau);
      approx = s.superop();
      row.depth = s.depth().total;
      row.bound = symmetric_scheme_bound(g, t);
    } else if (scheme == "poisson") {
      const auto tr = poisson_truncated(poisson->phi, poisson->rate * t, *row.N);
      approx = tr.superop;
      row.depth = tr.depth.total;
      row.bound = poisson_tail_bound(poisson->rate * t, *row.N);
    } else if (scheme == "dilated") {
      const Scheme s = dilated_scheme(g, t, cfg.tau);
      approx = s.superop();
      row.depth = s.depth().total;
      row.bound = dilated_scheme_bound(g, t);
    } else {
      const Scheme s = scheme == "exact-ad" ? amplitude_damping_exact(t, cfg.qubits, cfg.rate, cfg.tau)
                                            : pauli_noise_exact(t, cfg.tau);
      approx = s.superop();
      row.depth = s.depth().total;
      row.bound = 1e-8;
    }
    row.error = solve_distance(approx, evolve(sg, t));
    rep.rows[i] = row;
  });
  rep.seconds["sweep"] = seconds_since(t1);

  if (scheme == "symmetric" || scheme == "dilated") {
    std::vector<double> x, y;
    for (const auto& r : rep.rows)
      if (r.t > 0.0 && r.error > 0.0) {
        x.push_back(r.t);
        y.push_back(r.error);
      }
    if (x.size() >= 4) rep.fit = fit_loglog(x, y);
  }
  return rep;
}

std::string rows_to_csv(const RunReport& r) {
  const bool with_n = r.scheme == "poisson";
  std::string out = with_n ? "t,N,error,bound,depth,ratio\n" : "t,error,bound,depth,ratio\n";
  for (const auto& row : r.rows) {
    out += fmt17(row.t) + ",";
    if (with_n) out += std::to_string(row.N.value_or(0)) + ",";
    out += fmt17(row.error) + "," + fmt17(row.bound) + "," + std::to_string(row.depth) + "," + fmt17(row.ratio()) + "\n";
  }
  return out;
}

BoundOutput cmd_bound(const ModelConfig& cfg, const std::string& kind, bool force) {
  require(kind == "uniform" || kind == "fixed-time" || kind == "fixed-precision",
          "bound: unknown kind '" + kind + "'");
  BoundOutput out;
  BoundReport& rep = out.report;
  rep.model = cfg.name;
  rep.kind = kind;
  rep.params.alpha = cfg.bound.alpha;
  rep.params.beta = cfg.bound.beta;
  rep.params.epsilon = kind == "uniform" ? cfg.epsilon() : 0.5;
  rep.params.tau = cfg.tau;
  rep.params.D = 1.0;
  rep.params.validate();
  if (kind == "fixed-time" && !cfg.bound.tau_target) throw ConfigError("bound: fixed-time needs bound.tau_target");
  if (kind == "fixed-precision" && !cfg.bound.t_target)
    throw ConfigError("bound: fixed-precision needs bound.t_target");

  const auto g = cfg.generator();
  const Semigroup sg(g);
  const ResourceSet s = cfg.resource_set();
  const GateSet gates = cfg.gate_set();
  const std::size_t k = cfg.environment() ? cfg.ancilla_dim() : 1;
  const CondExpectation efix = fixed_point_expectation(g);

  AssumptionInputs in;
  in.gates = &gates;
  in.resources = &s;
  in.e_fix = &efix;
  in.ancilla_dim = k;
  in.seed = cfg.seed;
  out.assumptions = assumption_check(in);
  if (!out.assumptions.all_pass()) {
    std::string failed;
    for (const auto& r : out.assumptions.results)
      if (!r.pass) failed += " " + r.name;
    if (!force) throw AssumptionFailure("assumptions failed:" + failed + " (use --force to continue)");
    out.warnings.push_back("assumptions failed:" + failed + "; bound is not certified");
  }

  const SuperOperator phi = adjoint_map(efix.map);
  const LipschitzProblem problem = k == 1 ? plain_problem(phi, s) : env_problem(phi, s, k);
  std::string upper_method = "unavailable";
  const auto up = kraus_upper(cfg, phi, s, &upper_method);
  for (const auto& x : cfg.certificate_list())
    if (lipschitz_seminorm(x, s) > 1e-8 * x.norm()) rep.certificates.push_back(x);
    else out.warnings.push_back("dropped a certificate with zero seminorm");
  SearchOptions so;
  so.restarts = cfg.search.restarts;
  so.iterations = cfg.search.iterations;
  so.amplification = cfg.search.amplification;
  so.seed = cfg.seed;
  const KappaBounds kb = kappa(problem, rep.certificates, so, up);
  rep.kappa_lower = kb.lower;
  rep.kappa_upper = kb.upper;
  rep.kappa_upper_method = upper_method;
  if (std::isinf(kb.lower))
    throw AssumptionFailure("bound: E_fix moves elements of the commutant, so the Lipschitz constant is unbounded");
  if (!(kb.lower > 0.0)) throw SolverError("bound: no positive lower bound on the Lipschitz constant was found");

  out.compatibility = k == 1 ? compatibility_D(gates, s) : compatibility_D_env(gates, s, k);
  if (!out.compatibility.analytic) out.warnings.push_back("D is a search estimate: " + out.compatibility.note);
  rep.params.D = out.compatibility.value;
  if (!(rep.params.D > 0.0)) throw SolverError("bound: compatibility constant is zero");

  MixingOptions mo;
  mo.ancilla_dim = k;
  out.mixing = mixing_time(sg, s, kb.upper, rep.params.epsilon, rep.certificates, mo);
  if (!out.mixing.certified)
    throw SolverError("bound: no certified mixing time below t_max = " + fmt17(mo.t_max));
  rep.t_mix = out.mixing.t;
  rep.t_mix_method = out.mixing.method;
  rep.c_alpha_beta = c_alpha_beta(rep.params.alpha, rep.params.beta, rep.params.epsilon, rep.t_mix);

  if (kind == "uniform") {
    rep.lower_bound = lower_bound_M(rep.params, rep.kappa_lower, rep.t_mix);
    const double a = rep.params.alpha, b = rep.params.beta;
    if (cfg.preset == ModelPreset::Pauli && cfg.gate_family == "pauli") {
      const double n = double(cfg.qubits);
      const long order = min_uniform_truncation_order(a / std::pow(2.0 * n, b), b);
      const long word = gate_count(Gate{Gate::Kind::Rotation, 0, M_PI / 2}, gates);
      rep.upper_bound = double(order * word);
      rep.upper_method = "poisson truncation at order " + std::to_string(order) + " with " + std::to_string(word) +
                         "-gate Pauli words";
    } else if (cfg.preset == ModelPreset::AmplitudeDamping && cfg.gate_family == "exchange") {
      const double tmax = std::pow(2.0 / a, 1.0 / b);
      rep.upper_bound = double(amplitude_damping_exact(tmax, cfg.qubits, cfg.rate, cfg.tau).depth().total);
      rep.upper_method = "exact dilation circuit at t = " + fmt17(tmax);
    }
    if (rep.upper_bound && *rep.upper_bound < rep.lower_bound)
      out.warnings.push_back("upper bound below lower bound; inputs are inconsistent");
  } else if (kind == "fixed-time") {
    rep.fixed = lower_bound_fixed_time(*cfg.bound.tau_target, rep.params, rep.kappa_lower, rep.t_mix);
    rep.lower_bound = rep.fixed->applicable ? rep.fixed->value : 0.0;
  } else {
    rep.fixed = lower_bound_fixed_precision(*cfg.bound.t_target, cfg.bound.delta, rep.params, rep.kappa_lower, rep.t_mix);
    rep.lower_bound = rep.fixed->applicable ? rep.fixed->value : 0.0;
  }
  return out;
}

std::string bound_text(const BoundOutput& b) {
  const BoundReport& r = b.report;
  std::ostringstream o;
  o << "model: " << r.model << "\n";
  o << "kind: " << r.kind << "\n";
  o << "alpha = " << fmt17(r.params.alpha) << ", beta = " << fmt17(r.params.beta)
    << ", epsilon = " << fmt17(r.params.epsilon) << ", tau = " << fmt17(r.params.tau) << "\n";
  o << "assumptions:\n";
  for (const auto& a : b.assumptions.results)
    o << "  " << a.name << ": " << (a.pass ? "pass" : "FAIL") << " (residual " << fmt17(a.residual) << ") "
      << a.detail << "\n";
  o << "kappa in [" << fmt17(r.kappa_lower) << ", " << fmt17(r.kappa_upper) << "] upper via " << r.kappa_upper_method
    << "\n";
  o << "D = " << fmt17(r.params.D) << (b.compatibility.analytic ? " (analytic)" : " (estimate)") << "\n";
  o << "t_mix <= " << fmt17(r.t_mix) << " (" << r.t_mix_method << ")\n";
  o << "C_alpha_beta = " << fmt17(r.c_alpha_beta) << "\n";
  if (r.fixed && !r.fixed->applicable) o << "fixed-time bound inapplicable: " << r.fixed->reason << "\n";
  o << "lower bound = " << fmt17(r.lower_bound) << "\n";
  if (r.upper_bound) {
    o << "upper bound = " << fmt17(*r.upper_bound) << " (" << r.upper_method << ")\n";
    o << "sandwich: " << fmt17(r.lower_bound) << " <= M <= " << fmt17(*r.upper_bound) << "\n";
  }
  for (const auto& w : b.warnings) o << "warning: " << w << "\n";
  return o.str();
}

std::string bound_json(const BoundOutput& b) {
  const BoundReport& r = b.report;
  nlohmann::ordered_json j;
  j["model"] = r.model;
  j["kind"] = r.kind;
  j["params"] = {{"alpha", r.params.alpha}, {"beta", r.params.beta}, {"epsilon", r.params.epsilon},
                 {"tau", r.params.tau},     {"D", r.params.D}};
  j["kappa"] = {{"lower", r.kappa_lower},
                {"upper", std::isfinite(r.kappa_upper) ? nlohmann::ordered_json(r.kappa_upper) : nullptr},
                {"upper_method", r.kappa_upper_method}};
  j["compatibility"] = {{"value", b.compatibility.value}, {"analytic", b.compatibility.analytic},
                        {"note", b.compatibility.note}};
  j["t_mix"] = {{"value", r.t_mix},
                {"method", r.t_mix_method},
                {"threshold", b.mixing.threshold},
                {"diamond", b.mixing.diamond_time ? nlohmann::ordered_json(*b.mixing.diamond_time) : nullptr}};
  j["c_alpha_beta"] = r.c_alpha_beta;
  j["lower_bound"] = r.lower_bound;
  j["upper_bound"] = r.upper_bound ? nlohmann::ordered_json(*r.upper_bound) : nullptr;
  j["upper_method"] = r.upper_method;
  if (r.fixed) j["fixed"] = {{"applicable", r.fixed->applicable}, {"value", r.fixed->value}, {"reason", r.fixed->reason}};
  auto& a = j["assumptions"] = nlohmann::ordered_json::array();
  for (const auto& x : b.assumptions.results)
    a.push_back({{"name", x.name}, {"pass", x.pass}, {"residual", x.residual}, {"detail", x.detail}});
  j["warnings"] = b.warnings;
  return j.dump(2) + "\n";
}

std::vector<VerifyCheck> cmd_verify(const ModelConfig& cfg) {
  std::vector<VerifyCheck> out;
  const auto g = cfg.generator();
  const Semigroup sg(g);
  const SuperOperator t1 = evolve(sg, 1.0);
  const double cp = cp_violation(t1), tp = tp_violation(t1);
  out.push_back({"generator", cp <= 1e-9 && tp <= 1e-9, std::max(cp, tp), "evolve(1) is CPTP"});
  const double law = (evolve(sg, 0.3) * evolve(sg, 0.4) - evolve(sg, 0.7)).matrix.norm();
  out.push_back({"semigroup", law <= 1e-9, law, "T_0.3 T_0.4 = T_0.7"});

  const CondExpectation efix = fixed_point_expectation(g);
  const auto chk = check_expectation(efix, 10, cfg.seed);
  const double ce = std::max({chk.idempotence, chk.unitality, chk.module_property, chk.self_adjointness});
  out.push_back({"fixed-point expectation", ce <= 1e-8, ce, "idempotent, unital, bimodule map onto ker L*"});
  const double inv = (adjoint_map(sg.superop_L()) * efix.map).matrix.cwiseAbs().maxCoeff();
  out.push_back({"fixed points", inv <= 1e-8, inv, "L* vanishes on the range of E_fix"});

  const ResourceSet s = cfg.resource_set();
  const GateSet gates = cfg.gate_set();
  AssumptionInputs in;
  in.gates = &gates;
  in.resources = &s;
  in.e_fix = &efix;
  in.ancilla_dim = cfg.environment() ? cfg.ancilla_dim() : 1;
  in.seed = cfg.seed;
  for (const auto& r : assumption_check(in).results)
    out.push_back({"assumption " + r.name, r.pass, r.residual, r.detail});
  return out;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"simcost: simulation cost of quantum Markov semigroups"};
  app.require_subcommand(1);
  std::string config, scheme, kind = "uniform", out_dir = ".", csv, xcol = "t", ycol = "error";
  std::optional<std::uint64_t> seed;
  int workers = 0;
  bool force = false;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config, "model configuration file");
    if (needs_config) c->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the configuration seed");
    sub->add_option("--workers", workers, "worker threads (default: SIMCOST_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--force", force, "continue when assumptions fail");
  };
  auto* sim = app.add_subcommand("simulate", "sweep a scheme against the exact semigroup");
  add_common(sim, true);
  sim->add_option("--scheme", scheme, "symmetric | poisson | dilated | exact-ad | exact-pauli")
      ->required()
      ->check(CLI::IsMember(scheme_names()));
  auto* bnd = app.add_subcommand("bound", "lower bound on the simulation cost");
  add_common(bnd, true);
  bnd->add_option("--kind", kind, "uniform | fixed-time | fixed-precision")
      ->check(CLI::IsMember({"uniform", "fixed-time", "fixed-precision"}));
  auto* fit = app.add_subcommand("fit", "log-log least squares on two CSV columns");
  add_common(fit, false);
  fit->add_option("csv", csv, "CSV file")->required();
  fit->add_option("--x", xcol, "abscissa column");
  fit->add_option("--y", ycol, "ordinate column");
  auto* ver = app.add_subcommand("verify", "assumption and invariant checks");
  add_common(ver, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }
  if (workers <= 0) workers = default_workers();

  try {
    if (fit->parsed()) {
      const auto f = cmd_fit(csv, xcol, ycol);
      std::cout << "slope " << fmt17(f.slope) << "\nintercept " << fmt17(f.intercept) << "\nr2 " << fmt17(f.r2)
                << "\nrows " << f.rows << "\n";
      return kExitOk;
    }
    ModelConfig cfg = load_config(config);
    if (seed) cfg.seed = *seed;
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    if (sim->parsed()) {
      const auto rep = cmd_simulate(cfg, scheme, workers);
      const auto path = dir / (cfg.name + "-" + scheme + ".csv");
      std::ofstream(path) << rows_to_csv(rep);
      double worst = 0.0;
      for (const auto& r : rep.rows) worst = std::max(worst, r.ratio());
      std::cout << "wrote " << path.string() << " (" << rep.rows.size() << " rows)\n";
      if (!rep.rows.empty()) std::cout << "max error/bound " << fmt17(worst) << "\n";
      if (rep.fit) std::cout << "slope " << fmt17(rep.fit->slope) << " (r2 " << fmt17(rep.fit->r2) << ")\n";
      for (const auto& [stage, sec] : rep.seconds) std::cout << "time " << stage << " " << sec << " s\n";
      return kExitOk;
    }
    if (bnd->parsed()) {
      const auto b = cmd_bound(cfg, kind, force);
      std::ofstream(dir / (cfg.name + "-bound.txt")) << bound_text(b);
      std::ofstream(dir / (cfg.name + "-bound.json")) << bound_json(b);
      std::cout << bound_text(b);
      return kExitOk;
    }
    const auto checks = cmd_verify(cfg);
    bool ok = true;
    for (const auto& c : checks) {
      ok = ok && c.pass;
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " residual " << fmt17(c.residual) << "  " << c.detail
                << "\n";
    }
    return ok ? kExitOk : kExitAssumption;
  } catch (const AssumptionFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssumption;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace simcost
