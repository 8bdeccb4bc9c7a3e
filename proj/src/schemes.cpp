#include "simcost/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace simcost {

GateSet GateSet::hamiltonian(std::string label, std::vector<CMatrix> gens, double tau) {
  GateSet g;
  g.label = std::move(label);
  g.generators = std::move(gens);
  g.tau = tau;
  g.validate();
  return g;
}

GateSet GateSet::explicit_unitaries(std::string label, std::vector<CMatrix> us) {
  GateSet g;
  g.label = std::move(label);
  g.unitaries = std::move(us);
  g.tau = 1.0;
  g.validate();
  return g;
}

std::size_t GateSet::dim() const {
  if (!generators.empty()) return generators.front().rows();
  if (!unitaries.empty()) return unitaries.front().rows();
  throw std::logic_error("GateSet: empty gate set has no dimension");
}

void GateSet::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("GateSet: time cap must be positive");
  if (generators.empty() && unitaries.empty()) throw std::invalid_argument("GateSet: no gates");
  const auto d = static_cast<Eigen::Index>(dim());
  for (const auto& a : generators) {
    if (a.rows() != d || a.cols() != d) throw std::invalid_argument("GateSet: generator dimension mismatch");
    if (!is_hermitian(a, kAlgebraTol)) throw std::invalid_argument("GateSet: generator is not Hermitian");
  }
  for (const auto& u : unitaries) {
    if (u.rows() != d || u.cols() != d) throw std::invalid_argument("GateSet: unitary dimension mismatch");
    if ((u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kAlgebraTol)
      throw std::invalid_argument("GateSet: member is not unitary");
  }
}

long gate_count(const Gate& g, const GateSet& gs) {
  if (g.kind == Gate::Kind::Explicit) return 1;
  if (g.angle == 0.0) return 0;
  return static_cast<long>(std::ceil(std::abs(g.angle) / gs.tau - 1e-12));
}

long word_length(const Word& w, const GateSet& gs) {
  long s = 0;
  for (const auto& g : w) s += gate_count(g, gs);
  return s;
}

CMatrix word_unitary(const Word& w, const GateSet& gs) {
  const auto d = gs.dim();
  CMatrix u = CMatrix::Identity(d, d);
  for (const auto& g : w) {
    if (g.kind == Gate::Kind::Explicit) {
      if (g.index >= gs.unitaries.size()) throw std::out_of_range("word_unitary: unitary index");
      u = gs.unitaries[g.index] * u;
    } else {
      if (g.index >= gs.generators.size()) throw std::out_of_range("word_unitary: generator index");
      if (g.angle != 0.0) u = matrix_exp(cplx(0, g.angle) * gs.generators[g.index]) * u;
    }
  }
  return u;
}

void MixedUnitaryChannel::validate() const {
  if (!gates) throw std::invalid_argument("MixedUnitaryChannel: missing gate set");
  if (probabilities.size() != words.size() || words.empty())
    throw std::invalid_argument("MixedUnitaryChannel: probabilities and words differ in length");
  double tot = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw std::invalid_argument("MixedUnitaryChannel: negative probability");
    tot += p;
  }
  if (std::abs(tot - 1.0) > 1e-12) throw std::invalid_argument("MixedUnitaryChannel: probabilities must sum to 1");
}

SuperOperator MixedUnitaryChannel::superop() const {
  const auto d = dim();
  SuperOperator s = SuperOperator::zero(d);
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (probabilities[k] == 0.0) continue;
    s.matrix += probabilities[k] * conjugation(word_unitary(words[k], *gates)).matrix;
  }
  return s;
}

long MixedUnitaryChannel::max_word_length() const {
  long m = 0;
  for (std::size_t k = 0; k < words.size(); ++k)
    if (probabilities[k] > 0.0) m = std::max(m, word_length(words[k], *gates));
  return m;
}

long MixedUnitaryChannel::max_split_factor() const {
  long m = 0;
  for (std::size_t k = 0; k < words.size(); ++k)
    if (probabilities[k] > 0.0)
      for (const auto& g : words[k]) m = std::max(m, gate_count(g, *gates));
  return m;
}

SuperOperator encode_superop(std::size_t d, std::size_t k) {
  CMatrix v = CMatrix::Zero(d * k, d);
  for (std::size_t i = 0; i < d; ++i) v(i * k, i) = 1.0;
  return left_right(v, v.adjoint());
}

SuperOperator decode_superop(std::size_t d, std::size_t k) {
  KrausSet ks;
  for (std::size_t e = 0; e < k; ++e) {
    CMatrix op = CMatrix::Zero(d, d * k);
    for (std::size_t i = 0; i < d; ++i) op(i, i * k + e) = 1.0;
    ks.operators.push_back(op);
  }
  return superop_from_kraus(ks);
}

SuperOperator Scheme::superop() const {
  SuperOperator s = SuperOperator::identity(system_dim);
  for (const auto& b : blocks) {
    if (b.ancilla_dim == 1) {
      s = b.channel.superop() * s;
    } else {
      s = decode_superop(system_dim, b.ancilla_dim) * b.channel.superop() *
          encode_superop(system_dim, b.ancilla_dim) * s;
    }
  }
  return s;
}

DepthAccount depth(const MixedUnitaryChannel& ch) {
  DepthAccount a;
  a.tau = ch.gates->tau;
  a.per_block = {ch.max_word_length()};
  a.ceil_factors = {ch.max_split_factor()};
  a.total = a.per_block.front();
  return a;
}

DepthAccount depth(const Scheme& s) {
  DepthAccount a;
  for (const auto& b : s.blocks) {
    a.tau = b.channel.gates->tau;
    a.per_block.push_back(b.channel.max_word_length());
    a.ceil_factors.push_back(b.channel.max_split_factor());
  }
  a.total = std::accumulate(a.per_block.begin(), a.per_block.end(), 0L);
  return a;
}

DepthAccount Scheme::depth() const { return simcost::depth(*this); }

Rational ZDistribution::moment(int k) const {
  long long num = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    long long p = 1;
    for (int e = 0; e < k; ++e) p *= support[i];
    num += weights[i] * p;
  }
  const long long g = std::gcd(num, denominator);
  return Rational{num / g, denominator / g};
}

ZDistribution z_dist() { return ZDistribution{}; }

MixedUnitaryChannel symmetric_local_channel(std::shared_ptr<const GateSet> gates, std::size_t generator,
                                            double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("symmetric_local_channel: time must be non-negative");
  if (generator >= gates->generators.size()) throw std::out_of_range("symmetric_local_channel: generator index");
  const auto z = z_dist();
  MixedUnitaryChannel ch;
  ch.gates = std::move(gates);
  const double r = std::sqrt(2.0 * t);
  for (std::size_t i = 0; i < z.support.size(); ++i) {
    ch.probabilities.push_back(z.probability(i));
    if (z.support[i] == 0 || r == 0.0)
      ch.words.push_back({});
    else
      ch.words.push_back({Gate{Gate::Kind::Rotation, generator, r * z.support[i]}});
  }
  return ch;
}

MixedUnitaryChannel symmetric_local_channel(const CMatrix& a, double t, double tau) {
  if (!is_hermitian(a, kAlgebraTol)) throw std::invalid_argument("symmetric_local_channel: a must be Hermitian");
  auto gs = std::make_shared<const GateSet>(GateSet::hamiltonian("rotations", {a}, tau));
  return symmetric_local_channel(gs, 0, t);
}

SuperOperator trotter2(const std::vector<std::function<SuperOperator(double)>>& blocks, double t) {
  if (blocks.empty()) throw std::invalid_argument("trotter2: no blocks");
  std::vector<SuperOperator> half;
  for (const auto& b : blocks) half.push_back(b(0.5 * t));
  SuperOperator s = half.front();
  for (std::size_t j = 1; j < half.size(); ++j) s = half[j] * s;
  for (std::size_t j = half.size(); j-- > 0;) s = half[j] * s;
  return s;
}

Scheme symmetric_scheme(const LindbladGenerator& g, double t, double tau) {
  if (!(t >= 0.0)) throw std::invalid_argument("symmetric_scheme: time must be non-negative");
  if (g.hamiltonian.norm() > kAlgebraTol)
    throw std::invalid_argument("symmetric_scheme: generator must be purely dissipative");
  if (g.jumps.empty()) throw std::invalid_argument("symmetric_scheme: no jump operators");
  for (const auto& v : g.jumps)
    if (!is_hermitian(v, kAlgebraTol)) throw std::invalid_argument("symmetric_scheme: jumps must be Hermitian");
  auto gs = std::make_shared<const GateSet>(GateSet::hamiltonian("jump rotations", g.jumps, tau));
  // exp((t/2) L_a) = exp((t/4) (2 a x a - a^2 x - x a^2))
  Scheme s;
  s.system_dim = g.dim();
  const std::size_t m = g.jumps.size();
  for (std::size_t j = 0; j < m; ++j) s.blocks.push_back({symmetric_local_channel(gs, j, 0.25 * t), 1});
  for (std::size_t j = m; j-- > 0;) s.blocks.push_back({symmetric_local_channel(gs, j, 0.25 * t), 1});
  return s;
}

SuperOperator poisson_channel(const std::vector<double>& weights, const std::vector<CMatrix>& unitaries) {
  if (weights.size() != unitaries.size() || weights.empty())
    throw std::invalid_argument("poisson_channel: weights and unitaries differ in length");
  const auto gs = GateSet::explicit_unitaries("poisson", unitaries);
  double tot = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("poisson_channel: weights must be positive");
    tot += w;
  }
  SuperOperator s = SuperOperator::zero(gs.dim());
  for (std::size_t j = 0; j < weights.size(); ++j) s.matrix += (weights[j] / tot) * conjugation(unitaries[j]).matrix;
  return s;
}

MixedUnitaryChannel poisson_mixture(const std::vector<double>& weights, std::shared_ptr<const GateSet> gates,
                                    const std::vector<Word>& words) {
  if (weights.size() != words.size() || weights.empty())
    throw std::invalid_argument("poisson_mixture: weights and words differ in length");
  double tot = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("poisson_mixture: weights must be positive");
    tot += w;
  }
  MixedUnitaryChannel ch;
  ch.gates = std::move(gates);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    ch.probabilities.push_back(weights[j] / tot);
    ch.words.push_back(words[j]);
  }
  ch.validate();
  return ch;
}

TruncatedChannel poisson_truncated(const SuperOperator& phi, long phi_word_length, double t, int N) {
  if (N < 0) throw std::invalid_argument("poisson_truncated: order must be non-negative");
  if (!(t >= 0.0)) throw std::invalid_argument("poisson_truncated: time must be non-negative");
  std::vector<double> w(N + 1);
  double tot = 0.0;
  for (int k = 0; k <= N; ++k) tot += (w[k] = std::exp(k * std::log(std::max(t, 1e-300)) - t - std::lgamma(k + 1.0)));
  if (t == 0.0) {
    std::fill(w.begin(), w.end(), 0.0);
    w[0] = tot = 1.0;
  }
  const std::size_t d = phi.din;
  SuperOperator power = SuperOperator::identity(d);
  SuperOperator acc = SuperOperator::zero(d);
  for (int k = 0; k <= N; ++k) {
    if (k > 0) power = phi * power;
    acc.matrix += (w[k] / tot) * power.matrix;
  }
  TruncatedChannel out{acc, {}};
  out.depth.total = N * phi_word_length;
  out.depth.per_block.assign(N, phi_word_length);
  return out;
}

TruncatedChannel poisson_truncated(const MixedUnitaryChannel& phi, double t, int N) {
  auto out = poisson_truncated(phi.superop(), phi.max_word_length(), t, N);
  out.depth.tau = phi.gates->tau;
  out.depth.ceil_factors.assign(N, phi.max_split_factor());
  return out;
}

double poisson_tail_bound(double t, int N) {
  const double n1 = N + 1.0;
  if (!(t > 0.0)) return 0.0;
  if (t >= n1) return 2.0;
  return 2.0 * std::exp(n1 - t - n1 * std::log(n1 / t));
}

bool truncation_order_conditions(double alpha, double beta, long N) {
  const double x = std::pow(2.0 / alpha, 1.0 / beta);
  if (!(double(N) > x)) return false;
  const double n1 = N + 1.0;
  const double den = n1 - beta;
  if (!(den > 0.0)) return false;
  const double lhs = std::log(2.0 / alpha) / beta;
  const double rhs = (x + std::log(alpha / 2.0) + n1 * std::log(n1) - n1) / den;
  return lhs < rhs;
}

long min_truncation_order(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 1.0)) throw std::invalid_argument("min_truncation_order: need alpha > 0, beta > 1");
  const double x = std::pow(2.0 / alpha, 1.0 / beta);
  const long start = std::max(1L, static_cast<long>(std::floor(x)) + 1);
  constexpr long cap = 1000000;
  for (long N = start; N <= cap; ++N)
    if (truncation_order_conditions(alpha, beta, N)) return N;
  throw std::runtime_error("min_truncation_order: no admissible order below the search cap");
}

bool truncation_uniform(double alpha, double beta, long N) {
  const double x = std::pow(2.0 / alpha, 1.0 / beta);
  const double n1 = N + 1.0;
  if (!(double(N) > x) || !(n1 > beta)) return false;
  // log(tail / (alpha t^beta)) = log 2 + n1 - n1 log n1 - log alpha + (n1 - beta) log t - t
  const double ts = std::min(x, n1 - beta);
  return std::log(2.0) + n1 - n1 * std::log(n1) - std::log(alpha) + (n1 - beta) * std::log(ts) - ts < 0.0;
}

long min_uniform_truncation_order(double alpha, double beta) {
  constexpr long cap = 1000000;
  for (long N = min_truncation_order(alpha, beta); N <= cap; ++N)
    if (truncation_uniform(alpha, beta, N)) return N;
  throw std::runtime_error("min_uniform_truncation_order: no admissible order below the search cap");
}

MixedUnitaryChannel pauli_poisson_mixture(std::size_t n, double tau) {
  const auto dims = SystemDims::qubits(n);
  std::vector<CMatrix> gens;
  for (std::size_t j = 0; j < n; ++j) {
    gens.push_back(embed_local(pauli::X(), j, dims));
    gens.push_back(embed_local(pauli::Y(), j, dims));
  }
  auto gs = std::make_shared<const GateSet>(GateSet::hamiltonian("pauli rotations", gens, tau));
  std::vector<Word> words;
  for (std::size_t k = 0; k < gens.size(); ++k) words.push_back({Gate{Gate::Kind::Rotation, k, M_PI / 2}});
  return poisson_mixture(std::vector<double>(gens.size(), 1.0), gs, words);
}

CMatrix dilation_hamiltonian(const CMatrix& v) {
  if (v.rows() != v.cols()) throw std::invalid_argument("dilation_hamiltonian: V must be square");
  return tensor(v.adjoint(), pauli::lower()) + tensor(v, pauli::raise());
}

Scheme dilated_first_order(const CMatrix& v, double t, double tau) {
  const CMatrix h = dilation_hamiltonian(v);
  auto gs = std::make_shared<const GateSet>(GateSet::hamiltonian("dilation", {h}, tau));
  Scheme s;
  s.system_dim = v.rows();
  // exp(t L_H) with the standard dissipator equals exp((t/2)(2HxH - H^2x - xH^2))
  s.blocks.push_back({symmetric_local_channel(gs, 0, 0.5 * t), 2});
  return s;
}

Scheme dilated_scheme(const LindbladGenerator& g, double t, double tau) {
  if (g.hamiltonian.norm() > kAlgebraTol)
    throw std::invalid_argument("dilated_scheme: generator must be purely dissipative");
  std::vector<CMatrix> hs;
  for (const auto& v : g.jumps) hs.push_back(dilation_hamiltonian(v));
  auto gs = std::make_shared<const GateSet>(GateSet::hamiltonian("dilation", hs, tau));
  Scheme s;
  s.system_dim = g.dim();
  for (std::size_t j = 0; j < hs.size(); ++j) s.blocks.push_back({symmetric_local_channel(gs, j, 0.5 * t), 2});
  return s;
}

namespace {

// E[Z^{2j}] for the five-point distribution
double z_even_moment(int j) { return (std::pow(4.0, j) + 2.0) / 6.0; }

// e^x - sum_{k<order} x^k/k!
double exp_remainder(double x, int order) {
  double term = 1.0, sum = 0.0;
  for (int k = 0; k < order; ++k) {
    sum += term;
    term *= x / (k + 1);
  }
  return std::max(0.0, std::exp(x) - sum);
}

}  // namespace

double symmetric_scheme_bound(const LindbladGenerator& g, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("symmetric_scheme_bound: time must be non-negative");
  if (g.hamiltonian.size() > 0 && g.hamiltonian.norm() > kAlgebraTol)
    throw std::invalid_argument("symmetric_scheme_bound: generator must be purely dissipative");
  double lambda = 0.0, local = 0.0;
  for (const auto& a : g.jumps) {
    const double a2 = std::pow(op_norm(a), 2);
    lambda += 2.0 * a2;
    // half step: moment-matched channel for exp((t/2) L_a); series in s = ||a||^2 t
    const double s = a2 * t;
    double sum = 0.0, pw = std::pow(s, 3);
    for (int j = 3; j < 80 && pw > 0.0; ++j, pw *= s) {
      const double c = z_even_moment(j) * std::pow(2.0, j) / std::tgamma(2.0 * j + 1.0) - 1.0 / std::tgamma(j + 1.0);
      sum += std::abs(c) * pw;
    }
    local += 2.0 * sum;
  }
  const double split = g.jumps.size() > 1 ? 2.0 * exp_remainder(t * lambda, 3) : 0.0;
  return split + local;
}

double dilated_scheme_bound(const LindbladGenerator& g, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("dilated_scheme_bound: time must be non-negative");
  if (g.hamiltonian.size() > 0 && g.hamiltonian.norm() > kAlgebraTol)
    throw std::invalid_argument("dilated_scheme_bound: generator must be purely dissipative");
  double lambda = 0.0, local = 0.0;
  for (const auto& v : g.jumps) {
    const double lv = 2.0 * std::pow(op_norm(v), 2);
    lambda += lv;
    const double s = 4.0 * std::pow(op_norm(dilation_hamiltonian(v)), 2) * t;
    double sum = 0.0, pw = s * s;
    for (int j = 2; j < 80 && pw > 0.0; ++j, pw *= s) sum += z_even_moment(j) * pw / std::tgamma(2.0 * j + 1.0);
    local += exp_remainder(t * lv, 2) + sum;
  }
  const double split = g.jumps.size() > 1 ? 2.0 * exp_remainder(t * lambda, 2) : 0.0;
  return split + local;
}

std::vector<CMatrix> environment_pauli_resources(std::size_t n) {
  const auto dims = SystemDims::qubits(n + 1);
  std::vector<CMatrix> out{embed_local(pauli::X(), n, dims), embed_local(pauli::Y(), n, dims)};
  for (std::size_t j = 0; j < n; ++j) {
    out.push_back(embed_local(pauli::X(), j, dims) * embed_local(pauli::Y(), n, dims));
    out.push_back(embed_local(pauli::Y(), j, dims) * embed_local(pauli::X(), n, dims));
  }
  return out;
}

// generators Y_j (x) X_E and X_j (x) Y_E on n qubits + ancilla (last factor)
std::shared_ptr<const GateSet> exchange_gates(std::size_t n, double tau) {
  const auto dims = SystemDims::qubits(n + 1);
  std::vector<CMatrix> gens;
  for (std::size_t j = 0; j < n; ++j) {
    gens.push_back(embed_local(pauli::Y(), j, dims) * embed_local(pauli::X(), n, dims));
    gens.push_back(embed_local(pauli::X(), j, dims) * embed_local(pauli::Y(), n, dims));
  }
  return std::make_shared<const GateSet>(GateSet::hamiltonian("exchange", gens, tau));
}

Scheme amplitude_damping_exact(double t, std::size_t n, double rate, double tau) {
  if (!(t >= 0.0)) throw std::invalid_argument("amplitude_damping_exact: time must be non-negative");
  if (n == 0) throw std::invalid_argument("amplitude_damping_exact: need at least one qubit");
  const double theta = std::acos(std::exp(-0.5 * rate * t));
  auto gs = exchange_gates(n, tau);
  Scheme s;
  s.system_dim = std::size_t{1} << n;
  for (std::size_t j = 0; j < n; ++j) {
    MixedUnitaryChannel ch;
    ch.gates = gs;
    ch.probabilities = {1.0};
    // ad_{exp(i th/2 Y(x)X)} o ad_{exp(-i th/2 X(x)Y)}
    ch.words = {{Gate{Gate::Kind::Rotation, 2 * j + 1, -0.5 * theta}, Gate{Gate::Kind::Rotation, 2 * j, 0.5 * theta}}};
    s.blocks.push_back({std::move(ch), 2});
  }
  return s;
}

Scheme pauli_noise_exact(double t, double tau) {
  if (!(t >= 0.0)) throw std::invalid_argument("pauli_noise_exact: time must be non-negative");
  const double theta = std::acos(std::exp(-2.0 * t));
  auto gs = exchange_gates(1, tau);
  MixedUnitaryChannel ch;
  ch.gates = gs;
  ch.probabilities = {0.5, 0.5};
  const Gate u2star{Gate::Kind::Rotation, 1, -0.5 * theta};
  ch.words = {{u2star, Gate{Gate::Kind::Rotation, 0, 0.5 * theta}},
              {u2star, Gate{Gate::Kind::Rotation, 0, -0.5 * theta}}};
  Scheme s;
  s.system_dim = 2;
  s.blocks.push_back({std::move(ch), 2});
  return s;
}

}  // namespace simcost
