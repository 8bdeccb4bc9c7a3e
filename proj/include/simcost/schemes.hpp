#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "simcost/lindblad.hpp"

namespace simcost {

// Either a Hamiltonian family {exp(i s A): |s| <= tau} per generator A, or a
// finite list of explicit unitaries.
struct GateSet {
  std::string label;
  std::vector<CMatrix> generators;
  std::vector<CMatrix> unitaries;
  double tau = 1.0;

  static GateSet hamiltonian(std::string label, std::vector<CMatrix> gens, double tau);
  static GateSet explicit_unitaries(std::string label, std::vector<CMatrix> us);

  std::size_t dim() const;
  void validate() const;
};

// exp(i angle A_index) for a generator, or unitaries[index] itself.
struct Gate {
  enum class Kind { Rotation, Explicit };
  Kind kind = Kind::Rotation;
  std::size_t index = 0;
  double angle = 0.0;
};

using Word = std::vector<Gate>;  // application order: front acts first

// Number of elementary gates: a rotation by theta costs ceil(|theta|/tau), zero
// for theta = 0; an explicit unitary costs one.
long gate_count(const Gate& g, const GateSet& gs);
long word_length(const Word& w, const GateSet& gs);
CMatrix word_unitary(const Word& w, const GateSet& gs);

struct MixedUnitaryChannel {
  std::shared_ptr<const GateSet> gates;
  std::vector<double> probabilities;
  std::vector<Word> words;

  std::size_t dim() const { return gates->dim(); }
  SuperOperator superop() const;
  long max_word_length() const;
  long max_split_factor() const;
  void validate() const;
};

struct DepthAccount {
  long total = 0;
  std::vector<long> per_block;
  double tau = 0.0;
  std::vector<long> ceil_factors;  // largest ceil(|theta|/tau) per block
};

// Ordered blocks; block k acts after block k-1.  A block with ancilla_dim > 1
// is wrapped as D o Phi o E with E(rho) = rho (x) |0><0| and D = Tr_anc.
struct SchemeBlock {
  MixedUnitaryChannel channel;
  std::size_t ancilla_dim = 1;
};

struct Scheme {
  std::size_t system_dim = 0;
  std::vector<SchemeBlock> blocks;

  SuperOperator superop() const;
  DepthAccount depth() const;
};

DepthAccount depth(const MixedUnitaryChannel& ch);
DepthAccount depth(const Scheme& s);

SuperOperator encode_superop(std::size_t d, std::size_t k);  // rho -> rho (x) |0><0|_k
SuperOperator decode_superop(std::size_t d, std::size_t k);  // partial trace over k

struct Rational {
  long long num = 0;
  long long den = 1;
  bool operator==(const Rational&) const = default;
};

struct ZDistribution {
  std::vector<int> support{-2, -1, 0, 1, 2};
  std::vector<long long> weights{1, 2, 6, 2, 1};  // over 12
  long long denominator = 12;

  double probability(std::size_t i) const { return double(weights[i]) / double(denominator); }
  Rational moment(int k) const;
};

ZDistribution z_dist();

// E[ad_{exp(i sqrt(2t) Z a)}]; approximates exp(t L) with L(x) = 2axa - a^2 x - x a^2.
MixedUnitaryChannel symmetric_local_channel(const CMatrix& a, double t, double tau = 1.0);
MixedUnitaryChannel symmetric_local_channel(std::shared_ptr<const GateSet> gates, std::size_t generator,
                                            double t);

SuperOperator trotter2(const std::vector<std::function<SuperOperator(double)>>& blocks, double t);

// Second-order product of local moment-matched channels for L = sum_j L_{a_j},
// a_j Hermitian, with gates {exp(i s a_j): |s| <= tau}.
Scheme symmetric_scheme(const LindbladGenerator& g, double t, double tau);

SuperOperator poisson_channel(const std::vector<double>& weights, const std::vector<CMatrix>& unitaries);
MixedUnitaryChannel poisson_mixture(const std::vector<double>& weights, std::shared_ptr<const GateSet> gates,
                                    const std::vector<Word>& words);

struct TruncatedChannel {
  SuperOperator superop;
  DepthAccount depth;
};

// normalised sum_{k<=N} t^k e^{-t}/k! Phi^k
TruncatedChannel poisson_truncated(const MixedUnitaryChannel& phi, double t, int N);
TruncatedChannel poisson_truncated(const SuperOperator& phi, long phi_word_length, double t, int N);
double poisson_tail_bound(double t, int N);
bool truncation_order_conditions(double alpha, double beta, long N);
long min_truncation_order(double alpha, double beta);
// Exact check that the tail bound stays below alpha t^beta on all of (0, (2/alpha)^{1/beta}].
bool truncation_uniform(double alpha, double beta, long N);
long min_uniform_truncation_order(double alpha, double beta);

// Pauli model: Phi = (1/2n) sum_j ad_{X_j} + ad_{Y_j}; each Pauli is exp(i pi/2 P).
MixedUnitaryChannel pauli_poisson_mixture(std::size_t n, double tau);

// Rigorous diamond-norm bound on ||exp(tL) - symmetric_scheme(g, t)|| from Taylor remainders.
double symmetric_scheme_bound(const LindbladGenerator& g, double t);

CMatrix dilation_hamiltonian(const CMatrix& v);
Scheme dilated_first_order(const CMatrix& v, double t, double tau = 1.0);
Scheme dilated_scheme(const LindbladGenerator& g, double t, double tau);
// Rigorous diamond-norm bound on ||exp(tL) - dilated_scheme(g, t)|| from Taylor remainders.
double dilated_scheme_bound(const LindbladGenerator& g, double t);

// Exact circuit for exp(t sum_j L_{sqrt(rate) a_j}); rotation angle arccos(e^{-rate t/2}).
Scheme amplitude_damping_exact(double t, std::size_t n, double rate = 1.0, double tau = 1.0);
// Exact circuit for exp(t (L_X + L_Y)) on one qubit.
Scheme pauli_noise_exact(double t, double tau = 1.0);

// Environment resource set {I (x) X_E, I (x) Y_E, X_j (x) Y_E, Y_j (x) X_E} on n qubits + 1 ancilla.
std::vector<CMatrix> environment_pauli_resources(std::size_t n);
// {exp(i s Y_j (x) X_E), exp(i s X_j (x) Y_E): |s| <= tau}, generator order Y_0 X_E, X_0 Y_E, ...
std::shared_ptr<const GateSet> exchange_gates(std::size_t n, double tau);

}  // namespace simcost
