#include "simcost/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace simcost {

namespace {

void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a table");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T scalar(const YAML::Node& n, const std::string& where) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + ": malformed value");
  }
}

bool parse_coefficient(const std::string& tok, cplx& out) {
  std::string body = tok;
  bool imag = false;
  if (!body.empty() && (body.back() == 'i' || body.back() == 'j')) {
    imag = true;
    body.pop_back();
    if (body.empty() || body == "+" || body == "-") body += "1";
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(body, &used);
  } catch (const std::exception&) {
    return false;
  }
  if (used != body.size()) return false;
  out = imag ? cplx(0.0, v) : cplx(v, 0.0);
  return true;
}

CMatrix single_qubit(char c) {
  switch (c) {
    case 'I': return pauli::I();
    case 'X': return pauli::X();
    case 'Y': return pauli::Y();
    case 'Z': return pauli::Z();
    case 'L': return pauli::lower();
    case 'R': return pauli::raise();
    default: throw ConfigError(std::string("operator string: unknown letter '") + c + "'");
  }
}

CMatrix parse_matrix(const YAML::Node& rows, std::size_t dim, const std::string& where) {
  if (!rows.IsSequence() || rows.size() != dim) throw ConfigError(where + ": matrix must have " + std::to_string(dim) + " rows");
  CMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto row = rows[i];
    if (!row.IsSequence() || row.size() != dim)
      throw ConfigError(where + ": row " + std::to_string(i) + " must have " + std::to_string(dim) + " entries");
    for (std::size_t j = 0; j < dim; ++j) {
      const auto e = row[j];
      if (e.IsSequence()) {
        if (e.size() != 2) throw ConfigError(where + ": complex entries are [re, im] pairs");
        m(i, j) = cplx(scalar<double>(e[0], where), scalar<double>(e[1], where));
      } else {
        m(i, j) = scalar<double>(e, where);
      }
    }
  }
  return m;
}

struct OperatorContext {
  std::size_t dim;
  std::size_t qubits;  // 0 for non-qubit systems
  bool ancilla;
};

CMatrix parse_operator(const YAML::Node& n, const OperatorContext& ctx, const std::string& where) {
  if (n.IsScalar()) {
    if (ctx.qubits == 0) throw ConfigError(where + ": operator strings need a qubit system");
    return parse_operator_string(n.as<std::string>(), ctx.qubits, ctx.ancilla);
  }
  if (n.IsMap()) {
    check_keys(n, where, {"matrix"});
    return parse_matrix(n["matrix"], ctx.dim, where);
  }
  throw ConfigError(where + ": expected an operator string or {matrix: ...}");
}

std::vector<CMatrix> parse_operator_list(const YAML::Node& n, const OperatorContext& ctx, const std::string& where) {
  if (!n.IsSequence()) throw ConfigError(where + ": expected a list");
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < n.size(); ++i)
    out.push_back(parse_operator(n[i], ctx, where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> parse_grid(const YAML::Node& n, const std::string& where) {
  std::vector<double> out;
  if (n.IsSequence()) {
    for (const auto& v : n) out.push_back(scalar<double>(v, where));
  } else if (n.IsMap()) {
    check_keys(n, where, {"logspace", "linspace"});
    const bool log = bool(n["logspace"]);
    const auto range = log ? n["logspace"] : n["linspace"];
    if (!range || !range.IsSequence() || range.size() != 3) throw ConfigError(where + ": expected [start, stop, count]");
    const double a = scalar<double>(range[0], where), b = scalar<double>(range[1], where);
    const int count = scalar<int>(range[2], where);
    if (count < 0 || (log && (a <= 0.0 || b <= 0.0))) throw ConfigError(where + ": invalid range");
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : double(i) / (count - 1);
      out.push_back(log ? std::exp(std::log(a) + f * (std::log(b) - std::log(a))) : a + f * (b - a));
    }
  } else {
    throw ConfigError(where + ": expected a list or a range table");
  }
  for (double t : out)
    if (!(t >= 0.0)) throw ConfigError(where + ": times must be non-negative");
  return out;
}

}  // namespace

CMatrix parse_operator_string(const std::string& text, std::size_t system_qubits, bool allow_ancilla) {
  const std::size_t nq = system_qubits + (allow_ancilla ? 1 : 0);
  const auto dims = SystemDims::qubits(nq);
  const std::size_t d = dims.total();
  std::istringstream in(text);
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(t);
  if (toks.empty()) throw ConfigError("operator string: empty");

  CMatrix total = CMatrix::Zero(d, d);
  std::size_t i = 0;
  while (i < toks.size()) {
    double sign = 1.0;
    if (toks[i] == "+" || toks[i] == "-") {
      sign = toks[i] == "-" ? -1.0 : 1.0;
      if (++i == toks.size()) throw ConfigError("operator string: dangling sign in '" + text + "'");
    } else if (i > 0) {
      throw ConfigError("operator string: terms must be joined by + or - in '" + text + "'");
    }
    cplx coef = 1.0;
    if (parse_coefficient(toks[i], coef)) {
      ++i;
      if (i < toks.size() && toks[i] == "*") ++i;
    }
    CMatrix term = CMatrix::Identity(d, d);
    std::set<std::size_t> used;
    while (i < toks.size() && toks[i] != "+" && toks[i] != "-") {
      const std::string& op = toks[i];
      if (op.size() < 2) throw ConfigError("operator string: malformed factor '" + op + "'");
      std::size_t site;
      const std::string idx = op.substr(1);
      if (idx == "E") {
        if (!allow_ancilla) throw ConfigError("operator string: ancilla factor not allowed here");
        site = system_qubits;
      } else {
        if (!std::all_of(idx.begin(), idx.end(), [](unsigned char c) { return std::isdigit(c); }))
          throw ConfigError("operator string: malformed site in '" + op + "'");
        const std::size_t s1 = std::stoul(idx);
        if (s1 < 1 || s1 > system_qubits)
          throw ConfigError("operator string: site " + idx + " outside 1.." + std::to_string(system_qubits));
        site = s1 - 1;
      }
      if (!used.insert(site).second) throw ConfigError("operator string: site repeated in '" + text + "'");
      term = term * embed_local(single_qubit(op[0]), site, dims);
      ++i;
    }
    total += sign * coef * term;
  }
  return total;
}

double ModelConfig::epsilon() const {
  if (bound.epsilon) return *bound.epsilon;
  return environment() ? 0.9 : 0.75;
}

LindbladGenerator ModelConfig::generator() const {
  switch (preset) {
    case ModelPreset::Pauli: return pauli_model(qubits);
    case ModelPreset::AmplitudeDamping: return amplitude_damping_model(qubits, rate);
    default: return LindbladGenerator(dims, hamiltonian, jumps);
  }
}

GateSet ModelConfig::gate_set() const {
  if (gate_family == "pauli") return GateSet::hamiltonian("pauli", pauli_resources(qubits).members, tau);
  if (gate_family == "exchange") return *exchange_gates(qubits, tau);
  if (gate_family == "dilation") {
    std::vector<CMatrix> hs;
    for (const auto& v : generator().jumps) hs.push_back(dilation_hamiltonian(v));
    return GateSet::hamiltonian("dilation", hs, tau);
  }
  if (gate_family == "jumps") return GateSet::hamiltonian("jumps", generator().jumps, tau);
  if (gate_family == "hamiltonians") return GateSet::hamiltonian("hamiltonians", gate_generators, tau);
  if (gate_family == "explicit") return GateSet::explicit_unitaries("explicit", gate_unitaries);
  throw ConfigError("gates: unknown family '" + gate_family + "'");
}

ResourceSet ModelConfig::resource_set() const {
  if (resource_kind == "pauli") return pauli_resources(qubits);
  if (resource_kind == "environment") return environment_resources(qubits);
  return ResourceSet(dims.total() * (environment() ? ancilla_dim() : 1), resource_members);
}

std::vector<CMatrix> ModelConfig::certificate_list() const {
  if (!certificates.empty() || qubits == 0) return certificates;
  const auto d = SystemDims::qubits(qubits + (environment() ? ancilla_qubits : 0));
  CMatrix x = CMatrix::Zero(d.total(), d.total());
  for (std::size_t j = 0; j < qubits; ++j) x += embed_local(pauli::X(), j, d);
  return {x};
}

ModelConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  check_keys(root, "config",
             {"name", "seed", "system", "model", "gates", "resources", "environment", "bound", "search", "sweep"});
  ModelConfig c;
  if (!root["name"]) throw ConfigError("config: missing 'name'");
  c.name = scalar<std::string>(root["name"], "name");
  if (c.name.empty() || c.name.find('/') != std::string::npos) throw ConfigError("name: must be a plain file stem");
  if (root["seed"]) c.seed = scalar<std::uint64_t>(root["seed"], "seed");

  const auto sys = root["system"];
  if (!sys) throw ConfigError("config: missing 'system'");
  check_keys(sys, "system", {"qubits", "dims"});
  if (sys["qubits"] && sys["dims"]) throw ConfigError("system: give either qubits or dims");
  if (sys["qubits"]) {
    c.qubits = scalar<std::size_t>(sys["qubits"], "system.qubits");
    if (c.qubits < 1 || c.qubits > 6) throw ConfigError("system.qubits: must lie in 1..6");
    c.dims = SystemDims::qubits(c.qubits);
  } else if (sys["dims"]) {
    const auto v = scalar<std::vector<std::size_t>>(sys["dims"], "system.dims");
    if (v.empty()) throw ConfigError("system.dims: empty");
    for (auto f : v)
      if (f < 1) throw ConfigError("system.dims: factors must be positive");
    c.dims = SystemDims(v);
    if (std::all_of(v.begin(), v.end(), [](std::size_t f) { return f == 2; })) c.qubits = v.size();
  } else {
    throw ConfigError("system: missing qubits or dims");
  }
  const std::size_t d = c.dims.total();

  if (const auto env = root["environment"]) {
    check_keys(env, "environment", {"ancilla_qubits"});
    c.ancilla_qubits = scalar<std::size_t>(env["ancilla_qubits"], "environment.ancilla_qubits");
    if (c.ancilla_qubits > 1) throw ConfigError("environment: only a single ancilla qubit is supported");
  }

  const auto model = root["model"];
  if (!model) throw ConfigError("config: missing 'model'");
  check_keys(model, "model", {"preset", "rate", "hamiltonian", "jumps"});
  const OperatorContext sys_ctx{d, c.qubits, false};
  std::string preset = model["preset"] ? scalar<std::string>(model["preset"], "model.preset") : "custom";
  if (model["rate"]) c.rate = scalar<double>(model["rate"], "model.rate");
  if (!(c.rate > 0.0)) throw ConfigError("model.rate: must be positive");
  if (preset == "pauli" || preset == "amplitude_damping") {
    if (c.qubits == 0) throw ConfigError("model.preset: presets need a qubit system");
    if (model["hamiltonian"] || model["jumps"]) throw ConfigError("model: presets fix the hamiltonian and jumps");
    c.preset = preset == "pauli" ? ModelPreset::Pauli : ModelPreset::AmplitudeDamping;
  } else if (preset == "custom") {
    c.hamiltonian = model["hamiltonian"] ? parse_operator(model["hamiltonian"], sys_ctx, "model.hamiltonian")
                                         : CMatrix(CMatrix::Zero(d, d));
    if (!is_hermitian(c.hamiltonian)) throw ConfigError("model.hamiltonian: must be Hermitian");
    if (model["jumps"]) c.jumps = parse_operator_list(model["jumps"], sys_ctx, "model.jumps");
  } else {
    throw ConfigError("model.preset: unknown preset '" + preset + "'");
  }
  if (c.preset == ModelPreset::AmplitudeDamping && !root["environment"]) c.ancilla_qubits = 1;

  const OperatorContext full_ctx{d * c.ancilla_dim(), c.qubits, c.environment()};
  if (const auto g = root["gates"]) {
    check_keys(g, "gates", {"family", "tau", "generators", "unitaries"});
    if (g["family"]) c.gate_family = scalar<std::string>(g["family"], "gates.family");
    if (g["tau"]) c.tau = scalar<double>(g["tau"], "gates.tau");
    if (g["generators"]) c.gate_generators = parse_operator_list(g["generators"], full_ctx, "gates.generators");
    if (g["unitaries"]) c.gate_unitaries = parse_operator_list(g["unitaries"], full_ctx, "gates.unitaries");
  }
  if (!(c.tau > 0.0)) throw ConfigError("gates.tau: must be positive");
  if (c.gate_family.empty()) {
    if (c.preset == ModelPreset::Pauli && !c.environment()) c.gate_family = "pauli";
    else if (c.preset == ModelPreset::AmplitudeDamping) c.gate_family = "exchange";
    else if (!c.gate_generators.empty()) c.gate_family = "hamiltonians";
    else if (!c.gate_unitaries.empty()) c.gate_family = "explicit";
    else c.gate_family = c.environment() ? "dilation" : "jumps";
  }
  const std::set<std::string> families{"pauli", "exchange", "dilation", "jumps", "hamiltonians", "explicit"};
  if (!families.count(c.gate_family)) throw ConfigError("gates.family: unknown family '" + c.gate_family + "'");
  if ((c.gate_family == "exchange" || c.gate_family == "dilation") && !c.environment())
    throw ConfigError("gates.family: '" + c.gate_family + "' needs an environment");
  if ((c.gate_family == "pauli" || c.gate_family == "jumps") && c.environment())
    throw ConfigError("gates.family: '" + c.gate_family + "' acts on the system only");
  if ((c.gate_family == "pauli" || c.gate_family == "exchange") && c.qubits == 0)
    throw ConfigError("gates.family: '" + c.gate_family + "' needs a qubit system");

  if (const auto r = root["resources"]) {
    check_keys(r, "resources", {"kind", "members"});
    if (r["kind"]) c.resource_kind = scalar<std::string>(r["kind"], "resources.kind");
    if (r["members"]) c.resource_members = parse_operator_list(r["members"], full_ctx, "resources.members");
  }
  if (c.resource_kind.empty())
    c.resource_kind = !c.resource_members.empty() ? "custom" : (c.environment() ? "environment" : "pauli");
  if (c.resource_kind == "custom" && c.resource_members.empty()) throw ConfigError("resources: custom kind needs members");
  if (c.resource_kind != "custom" && !c.resource_members.empty())
    throw ConfigError("resources: members are only read for the custom kind");
  if (c.resource_kind == "pauli" && (c.qubits == 0 || c.environment()))
    throw ConfigError("resources: 'pauli' needs a qubit system without environment");
  if (c.resource_kind == "environment" && (c.qubits == 0 || !c.environment()))
    throw ConfigError("resources: 'environment' needs a qubit system with an ancilla");
  if (c.resource_kind != "pauli" && c.resource_kind != "environment" && c.resource_kind != "custom")
    throw ConfigError("resources.kind: unknown kind '" + c.resource_kind + "'");

  if (const auto b = root["bound"]) {
    check_keys(b, "bound", {"alpha", "beta", "epsilon", "delta", "tau_target", "t_target", "certificates"});
    if (b["alpha"]) c.bound.alpha = scalar<double>(b["alpha"], "bound.alpha");
    if (b["beta"]) c.bound.beta = scalar<double>(b["beta"], "bound.beta");
    if (b["epsilon"]) c.bound.epsilon = scalar<double>(b["epsilon"], "bound.epsilon");
    if (b["delta"]) c.bound.delta = scalar<double>(b["delta"], "bound.delta");
    if (b["tau_target"]) c.bound.tau_target = scalar<double>(b["tau_target"], "bound.tau_target");
    if (b["t_target"]) c.bound.t_target = scalar<double>(b["t_target"], "bound.t_target");
    if (b["certificates"]) c.certificates = parse_operator_list(b["certificates"], full_ctx, "bound.certificates");
  }
  if (!(c.bound.alpha > 0.0)) throw ConfigError("bound.alpha: must be positive");
  if (!(c.bound.beta > 1.0)) throw ConfigError("bound.beta: must exceed 1");
  if (c.bound.epsilon && !(*c.bound.epsilon > 0.0 && *c.bound.epsilon < 1.0))
    throw ConfigError("bound.epsilon: must lie in (0,1)");
  if (!(c.bound.delta > 0.0)) throw ConfigError("bound.delta: must be positive");

  if (const auto s = root["search"]) {
    check_keys(s, "search", {"restarts", "iterations", "amplification"});
    if (s["restarts"]) c.search.restarts = scalar<int>(s["restarts"], "search.restarts");
    if (s["iterations"]) c.search.iterations = scalar<int>(s["iterations"], "search.iterations");
    if (s["amplification"]) c.search.amplification = scalar<std::size_t>(s["amplification"], "search.amplification");
    if (c.search.restarts < 0 || c.search.iterations < 0 || c.search.amplification < 1 ||
        c.search.amplification > 2)
      throw ConfigError("search: restarts, iterations >= 0 and amplification in {1, 2}");
  }

  if (const auto s = root["sweep"]) {
    check_keys(s, "sweep", {"t", "N"});
    if (s["t"]) c.sweep_t = parse_grid(s["t"], "sweep.t");
    if (s["N"]) {
      c.sweep_N = scalar<std::vector<int>>(s["N"], "sweep.N");
      for (int n : c.sweep_N)
        if (n < 0) throw ConfigError("sweep.N: orders must be non-negative");
    }
  }

  try {
    const auto g = c.generator();
    (void)g;
    c.gate_set().validate();
    (void)c.resource_set();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace simcost
