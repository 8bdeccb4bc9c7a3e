#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simcost/lindblad.hpp"
#include "simcost/norms.hpp"
#include "simcost/schemes.hpp"

namespace simcost {

struct ResourceSet {
  std::size_t dim = 0;
  std::vector<CMatrix> members;

  ResourceSet() = default;
  ResourceSet(std::size_t d, std::vector<CMatrix> m);

  bool star_closed(double tol = 1e-12) const;
  ResourceSet amplified(std::size_t n) const;  // {I_n (x) s}
};

// {X_j, Y_j : j < n}, ordered X_0, Y_0, X_1, Y_1, ...
ResourceSet pauli_resources(std::size_t n);
// {I (x) X_E, I (x) Y_E, X_j (x) Y_E, Y_j (x) X_E} on n qubits plus one ancilla qubit (last factor).
ResourceSet environment_resources(std::size_t n);

double lipschitz_seminorm(const CMatrix& x, const ResourceSet& s);

struct Commutant {
  std::size_t dim = 0;
  std::vector<CMatrix> basis;  // Hilbert-Schmidt orthonormal
  CMatrix projector;           // d^2 x d^2, orthogonal projection in vec coordinates
};

Commutant commutant(const ResourceSet& s, double tol = 1e-9);
// Worst residual of products and adjoints of random pairs in the span, projected off the span.
double algebra_residual(const std::vector<CMatrix>& basis, int pairs = 20, std::uint64_t seed = 7);

// Heisenberg-picture conditional expectation x -> E(x).
struct CondExpectation {
  SuperOperator map;
  std::vector<CMatrix> range_basis;
  bool trace_preserving = false;
};

CondExpectation conditional_expectation(const Commutant& c, double tol = 1e-9);
// Spectral projector onto ker L* along its range.
CondExpectation fixed_point_expectation(const LindbladGenerator& g, double tol = 1e-9);

struct ExpectationCheck {
  double idempotence = 0.0;
  double unitality = 0.0;
  double module_property = 0.0;
  double self_adjointness = 0.0;  // only meaningful when trace preserving
  bool ok(double tol = 1e-9) const;
};
ExpectationCheck check_expectation(const CondExpectation& e, int samples = 10, std::uint64_t seed = 11);

// Linear map Psi with ||Psi(x)||_inf / |||x|||_S the quantity of interest:
// plain: Psi = Phi* - id;  environment: Psi = D* (Phi* - id) E*.
struct LipschitzProblem {
  SuperOperator psi;
  ResourceSet resources;
  std::vector<CMatrix> commutant_basis;  // of the resource set, Hilbert-Schmidt orthonormal
};

LipschitzProblem plain_problem(const SuperOperator& phi, const ResourceSet& s);
LipschitzProblem env_problem(const SuperOperator& phi, const ResourceSet& s_ae, std::size_t ancilla_dim);
LipschitzProblem amplify(const LipschitzProblem& p, std::size_t n);

// ratio ||Psi(x)|| / |||x|||_S, or 0 when the seminorm is below floor * ||x||_F
double complexity_ratio(const LipschitzProblem& p, const CMatrix& x, double floor = 1e-8);

double complexity_lower(const LipschitzProblem& p, const std::vector<CMatrix>& certificates);
double complexity_lower(const SuperOperator& phi, const ResourceSet& s, const std::vector<CMatrix>& certificates);

struct SearchOptions {
  int restarts = 32;
  int iterations = 500;
  std::size_t amplification = 1;
  std::uint64_t seed = 0x5eed;
  bool hermitian = true;
  std::vector<CMatrix> seeds;  // unamplified starting points
};

struct SearchResult {
  double lower = 0.0;
  CMatrix witness;
  bool unbounded = false;  // Psi does not vanish on the commutant
};

SearchResult complexity_search(const LipschitzProblem& p, const SearchOptions& opt = {});

// Kraus operators of each stage as linear combinations of products of resource members.
struct KrausTerm {
  cplx coef{1.0, 0.0};
  std::vector<std::size_t> letters;  // product s_{l0} s_{l1} ..., empty = identity
};
using KrausWord = std::vector<KrausTerm>;
using KrausStage = std::vector<KrausWord>;

struct KrausHint {
  std::vector<KrausStage> stages;  // stage 0 acts first
};

CMatrix hint_operator(const KrausWord& w, const ResourceSet& s);
// Residual between the channel rebuilt from the hint and phi; env variant compares on the system
// after checking every Kraus operator has the form K (x) I_E.
double hint_residual(const KrausHint& h, const ResourceSet& s, const SuperOperator& phi, std::size_t ancilla_dim = 1);
double complexity_upper_kraus(const SuperOperator& phi, const ResourceSet& s, const KrausHint& h,
                              std::size_t ancilla_dim = 1);

enum class QubitReplacer { MaximallyMixed, Ground };
// One-qubit replacer stage given resource words equal to X and Y on that qubit (times I_E).
KrausStage qubit_replacer_stage(QubitReplacer kind, const KrausWord& x_word, const KrausWord& y_word);
// Stage for sum_k p_k ad_{w_k} with w_k products of resource members.
KrausStage mixed_word_stage(const std::vector<double>& probs, const std::vector<std::vector<std::size_t>>& words);

KrausHint pauli_mixed_replacer_hint(std::size_t n);         // against pauli_resources(n)
KrausHint pauli_ground_replacer_hint(std::size_t n);        // against pauli_resources(n)
KrausHint environment_replacer_hint(QubitReplacer kind, std::size_t n);  // against environment_resources(n)

struct KappaBounds {
  double lower = 0.0;
  double upper = 0.0;
  CMatrix witness;
  std::string upper_method;
};

KappaBounds kappa(const LipschitzProblem& fixed_problem, const std::vector<CMatrix>& certificates,
                  const SearchOptions& opt, const std::optional<double>& kraus_upper);

struct CompatibilityResult {
  double value = 0.0;
  bool analytic = false;
  std::string note;
};

// D = tau when every generator is (up to sign) a resource member; the environment variant
// returns tau + 6 when additionally I (x) X_E and I (x) Y_E are members.
CompatibilityResult compatibility_D(const GateSet& u, const ResourceSet& s);
CompatibilityResult compatibility_D_env(const GateSet& u, const ResourceSet& s_ae, std::size_t ancilla_dim);

struct AssumptionResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionResult> results;
  bool all_pass() const;
};

struct AssumptionInputs {
  const GateSet* gates = nullptr;
  const ResourceSet* resources = nullptr;
  const CondExpectation* e_fix = nullptr;
  std::size_t ancilla_dim = 1;  // > 1 selects the (O), (B'), (C') family
  double tol = 1e-9;
  std::uint64_t seed = 13;
};

AssumptionReport assumption_check(const AssumptionInputs& in);

struct MixingResult {
  double t = 0.0;
  double epsilon = 0.0;
  double threshold = 0.0;
  bool certified = false;
  std::string method;
  std::optional<double> diamond_time;
};

struct MixingOptions {
  double t_min = 1e-3;
  double t_max = 20.0;
  int grid = 200;
  double bisection_tol = 1e-4;
  bool diamond_fallback = true;
  std::size_t ancilla_dim = 1;
};

// Certified upper bound on the complexity-induced mixing time: the first time at which a
// certificate ratio reaches (1 - eps) kappa_upper.
MixingResult mixing_time(const Semigroup& sg, const ResourceSet& s, double kappa_upper, double eps,
                         const std::vector<CMatrix>& certificates, const MixingOptions& opt = {});

// Smallest t with ||T_t - E_fix^*||_diamond <= eps (bisection; monotone in t).
std::optional<double> diamond_mixing_time(const Semigroup& sg, const CondExpectation& e_fix, double eps,
                                          double t_max = 20.0, double tol = 1e-4);

struct BoundParams {
  double alpha = 1.0;
  double beta = 2.0;
  double epsilon = 0.75;
  double tau = 1.0;
  double D = 1.0;
  void validate() const;
};

double c_alpha_beta(double alpha, double beta, double eps, double t_mix);
double lower_bound_M(const BoundParams& p, double kappa_lower, double t_mix);
double env_lower_bound(const BoundParams& p, double kappa_hat_lower, double t_mix_hat);

struct FixedTimeBound {
  bool applicable = false;
  double value = 0.0;
  std::string reason;
};

FixedTimeBound lower_bound_fixed_time(double tau_target, const BoundParams& p, double kappa_lower, double t_mix);
FixedTimeBound lower_bound_fixed_precision(double t, double delta, const BoundParams& p, double kappa_lower,
                                           double t_mix);

// (n/tau) 1/2 min{alpha^{-1/(beta-1)} (1/(6 ln 2))^{beta/(beta-1)}, 1/8}
double pauli_lower_bound_closed_form(double alpha, double beta, std::size_t n, double tau);

struct BoundReport {
  std::string model;
  std::string kind;
  BoundParams params;
  double kappa_lower = 0.0;
  double kappa_upper = 0.0;
  std::string kappa_upper_method;
  double t_mix = 0.0;
  std::string t_mix_method;
  double c_alpha_beta = 0.0;
  double lower_bound = 0.0;
  std::optional<double> upper_bound;
  std::string upper_method;
  std::optional<FixedTimeBound> fixed;
  std::vector<CMatrix> certificates;
};

}  // namespace simcost
