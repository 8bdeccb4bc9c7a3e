#include <cmath>

#include <gtest/gtest.h>

#include "simcost/complexity.hpp"
#include "test_util.hpp"

using namespace simcost;
using namespace simcost::testing;

namespace {

CMatrix sum_local(const CMatrix& op, std::size_t n, std::size_t total_qubits) {
  const auto dims = SystemDims::qubits(total_qubits);
  CMatrix s = CMatrix::Zero(dims.total(), dims.total());
  for (std::size_t j = 0; j < n; ++j) s += embed_local(op, j, dims);
  return s;
}

SuperOperator mixed_replacer(std::size_t n) {
  const std::size_t d = std::size_t{1} << n;
  CMatrix m = CMatrix::Zero(d * d, d * d);
  const CVector vi = vectorize(CMatrix::Identity(d, d));
  m = vi * vi.adjoint() / double(d);
  return SuperOperator(d, m);
}

SuperOperator ground_replacer(std::size_t n) {
  const std::size_t d = std::size_t{1} << n;
  KrausSet ks;
  for (std::size_t i = 0; i < d; ++i) {
    CMatrix k = CMatrix::Zero(d, d);
    k(0, i) = 1.0;
    ks.operators.push_back(k);
  }
  return superop_from_kraus(ks);
}

SearchOptions quick(int restarts = 12, int iterations = 300) {
  SearchOptions o;
  o.restarts = restarts;
  o.iterations = iterations;
  return o;
}

}  // namespace

TEST(Seminorm, Examples) {
  EXPECT_NEAR(lipschitz_seminorm(pauli::Z(), pauli_resources(1)), 2.0, 1e-12);
  for (std::size_t n = 1; n <= 3; ++n)
    EXPECT_NEAR(lipschitz_seminorm(sum_local(pauli::X(), n, n), pauli_resources(n)), 2.0, 1e-12);
  EXPECT_NEAR(lipschitz_seminorm(CMatrix::Identity(4, 4), pauli_resources(2)), 0.0, 1e-14);
  EXPECT_THROW(lipschitz_seminorm(pauli::Z(), ResourceSet(2, {})), std::invalid_argument);
}

TEST(Seminorm, TriangleAndScaling) {
  std::mt19937_64 rng(3);
  const auto s = pauli_resources(2);
  for (int k = 0; k < 10; ++k) {
    const CMatrix a = random_hermitian(4, rng), b = random_hermitian(4, rng);
    EXPECT_LE(lipschitz_seminorm(a + b, s), lipschitz_seminorm(a, s) + lipschitz_seminorm(b, s) + 1e-12);
    EXPECT_NEAR(lipschitz_seminorm(2.5 * a, s), 2.5 * lipschitz_seminorm(a, s), 1e-10);
    EXPECT_NEAR(lipschitz_seminorm(a + 3.0 * CMatrix::Identity(4, 4), s), lipschitz_seminorm(a, s), 1e-10);
  }
}

TEST(Commutant, Dimensions) {
  EXPECT_EQ(commutant(pauli_resources(1)).basis.size(), 1u);
  EXPECT_EQ(commutant(ResourceSet(3, {CMatrix::Identity(3, 3)})).basis.size(), 9u);
  EXPECT_EQ(commutant(ResourceSet(2, {pauli::lower(), pauli::raise()})).basis.size(), 1u);
  EXPECT_EQ(commutant(ResourceSet(2, {pauli::X()})).basis.size(), 2u);
  EXPECT_EQ(commutant(environment_resources(2)).basis.size(), 1u);
  const auto c = commutant(pauli_resources(2));
  ASSERT_EQ(c.basis.size(), 1u);
  EXPECT_NEAR((c.basis[0] * c.basis[0].adjoint()).trace().real(), 1.0, 1e-12);
  EXPECT_LT(algebra_residual(c.basis), 1e-10);
}

TEST(CondExpectation, TraceOnPauliCommutant) {
  std::mt19937_64 rng(5);
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::size_t d = std::size_t{1} << n;
    const auto e = conditional_expectation(commutant(pauli_resources(n)));
    for (int k = 0; k < 5; ++k) {
      const CMatrix x = random_matrix(d, d, rng);
      const CMatrix expect = x.trace() / double(d) * CMatrix::Identity(d, d);
      EXPECT_LT((e.map.apply(x) - expect).cwiseAbs().maxCoeff(), 1e-10);
    }
    EXPECT_TRUE(check_expectation(e, 50).ok(1e-9));
    EXPECT_TRUE(is_channel(adjoint_map(e.map)));
  }
}

TEST(CondExpectation, FixedPoints) {
  const auto ad = fixed_point_expectation(amplitude_damping_model(1, 2.0));
  const CMatrix x = (CMatrix(2, 2) << 0.3, cplx(1, 2), cplx(-1, 0.5), 2.0).finished();
  EXPECT_LT((ad.map.apply(x) - 0.3 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_FALSE(ad.trace_preserving);
  const auto chk = check_expectation(ad);
  EXPECT_LT(chk.idempotence, 1e-10);
  EXPECT_LT(chk.unitality, 1e-10);
  EXPECT_LT(chk.module_property, 1e-10);

  const auto pm = fixed_point_expectation(pauli_model(2));
  EXPECT_TRUE(pm.trace_preserving);
  EXPECT_LT((pm.map.matrix - conditional_expectation(commutant(pauli_resources(2))).map.matrix).cwiseAbs().maxCoeff(),
            1e-9);
}

TEST(Complexity, IdentityIsZero) {
  const auto s = pauli_resources(1);
  EXPECT_EQ(complexity_lower(SuperOperator::identity(2), s, {pauli::Z(), pauli::X()}), 0.0);
  EXPECT_EQ(complexity_search(plain_problem(SuperOperator::identity(2), s), quick()).lower, 0.0);
  EXPECT_THROW(complexity_lower(SuperOperator::identity(2), s, {CMatrix::Identity(2, 2)}), std::invalid_argument);
}

TEST(Complexity, QubitReplacerSandwich) {
  const auto s = pauli_resources(1);
  const auto phi = ground_replacer(1);
  EXPECT_NEAR(complexity_lower(phi, s, {pauli::Z()}), 1.0, 1e-12);
  const double up = complexity_upper_kraus(phi, s, pauli_ground_replacer_hint(1));
  EXPECT_NEAR(up, 2.0, 1e-12);
  const auto r = complexity_search(plain_problem(phi, s), quick());
  EXPECT_GE(r.lower, 1.0 - 1e-9);
  EXPECT_LE(r.lower, 2.0 + 1e-9);
  EXPECT_NEAR(complexity_ratio(plain_problem(phi, s), r.witness), r.lower, 1e-12);
}

TEST(Complexity, ExcitedReplacerHint) {
  // K0 = (iXY + I)/2, K1 = (X - iY)/2 replaces every state by |1><1|
  const auto s = pauli_resources(1);
  KrausHint h;
  h.stages.push_back({{KrausTerm{0.5, {}}, KrausTerm{cplx(0, 0.5), {0, 1}}},
                      {KrausTerm{0.5, {0}}, KrausTerm{cplx(0, -0.5), {1}}}});
  KrausSet ks;
  ks.operators = {hint_operator(h.stages[0][0], s), hint_operator(h.stages[0][1], s)};
  const auto phi = superop_from_kraus(ks);
  EXPECT_TRUE(is_channel(phi));
  EXPECT_NEAR(complexity_upper_kraus(phi, s, h), 2.0, 1e-12);
  EXPECT_THROW(complexity_upper_kraus(ground_replacer(1), s, h), std::invalid_argument);
}

TEST(Complexity, MixedReplacerSandwich) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto s = pauli_resources(n);
    const auto phi = mixed_replacer(n);
    const double cert = complexity_lower(phi, s, {sum_local(pauli::X(), n, n)});
    EXPECT_NEAR(cert, n / 2.0, 1e-12);
    EXPECT_NEAR(complexity_upper_kraus(phi, s, pauli_mixed_replacer_hint(n)), double(n), 1e-12);
    const auto r = complexity_search(plain_problem(phi, s), quick(8, 200));
    EXPECT_GE(r.lower, n / 2.0 - 1e-6);
    EXPECT_LE(r.lower, double(n) + 1e-9);
  }
}

TEST(Complexity, PauliSemigroupCertificate) {
  for (std::size_t n = 1; n <= 2; ++n) {
    const Semigroup sg(pauli_model(n));
    const auto s = pauli_resources(n);
    for (double t : {0.05, 0.3, 1.0}) {
      const double v = complexity_lower(evolve(sg, t), s, {sum_local(pauli::X(), n, n)});
      EXPECT_NEAR(v, (1.0 - std::exp(-2.0 * t)) * n / 2.0, 1e-9);
    }
  }
}

TEST(Complexity, UnboundedWhenCommutantMoves) {
  // S = {X}: commutant contains X, which a Y-conjugation does not fix
  const ResourceSet s(2, {pauli::X()});
  const auto r = complexity_search(plain_problem(conjugation(pauli::Y()), s), quick(2, 10));
  EXPECT_TRUE(r.unbounded);
  EXPECT_TRUE(std::isinf(r.lower));
}

TEST(Complexity, AmplificationDominates) {
  const auto s = pauli_resources(1);
  const auto p = plain_problem(ground_replacer(1), s);
  SearchOptions o = quick(4, 200);
  o.seeds = {pauli::Z()};
  const double base = complexity_search(p, o).lower;
  o.amplification = 2;
  const double amp = complexity_search(p, o).lower;
  EXPECT_GE(amp, base - 1e-9);
  EXPECT_LE(amp, 2.0 + 1e-9);
}

TEST(Complexity, SubadditivityAndConvexity) {
  const auto s = pauli_resources(1);
  KrausHint hx, hy;
  hx.stages.push_back(mixed_word_stage({1.0}, {{0}}));
  hy.stages.push_back(mixed_word_stage({1.0}, {{1}}));
  const auto px = conjugation(pauli::X()), py = conjugation(pauli::Y());
  const double ux = complexity_upper_kraus(px, s, hx), uy = complexity_upper_kraus(py, s, hy);
  EXPECT_NEAR(ux, 1.0, 1e-12);
  const double comp = complexity_search(plain_problem(px * py, s), quick()).lower;
  EXPECT_LE(comp, ux + uy + 1e-9);
  KrausHint hxy;
  hxy.stages = {hy.stages[0], hx.stages[0]};
  EXPECT_NEAR(complexity_upper_kraus(px * py, s, hxy), ux + uy, 1e-12);

  std::mt19937_64 rng(9);
  const auto a = random_mixed_unitary(2, 3, rng), b = random_mixed_unitary(2, 3, rng);
  for (int k = 0; k < 10; ++k) {
    const CMatrix x = random_hermitian(2, rng);
    const double p = 0.3;
    const double mix = complexity_ratio(plain_problem(cplx(p) * a + cplx(1 - p) * b, s), x);
    EXPECT_LE(mix, p * complexity_ratio(plain_problem(a, s), x) + (1 - p) * complexity_ratio(plain_problem(b, s), x) +
                       1e-12);
  }
}

TEST(Complexity, EnvironmentReplacer) {
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto sae = environment_resources(n);
    const auto efix = fixed_point_expectation(amplitude_damping_model(n, 2.0));
    const auto phi = adjoint_map(efix.map);
    EXPECT_LT((phi.matrix - ground_replacer(n).matrix).cwiseAbs().maxCoeff(), 1e-9);
    const auto p = env_problem(phi, sae, 2);
    const CMatrix cert = sum_local(pauli::X(), n, n + 1);
    EXPECT_NEAR(complexity_lower(p, {cert}), n / 2.0, 1e-9);
    const double up = complexity_upper_kraus(phi, sae, environment_replacer_hint(QubitReplacer::Ground, n), 2);
    EXPECT_NEAR(up, 4.0 * n, 1e-12);
    const auto k = kappa(p, {cert}, quick(4, 100), up);
    EXPECT_GE(k.lower, n / 2.0 - 1e-9);
    EXPECT_LE(k.lower, k.upper);
    EXPECT_EQ(k.upper_method, "kraus");
  }
  // mixed replacer through the environment
  const auto phi = mixed_replacer(1);
  EXPECT_NEAR(complexity_upper_kraus(phi, environment_resources(1),
                                     environment_replacer_hint(QubitReplacer::MaximallyMixed, 1), 2),
              2.0, 1e-12);
}

TEST(Complexity, EnvironmentContinuity) {
  const auto sae = environment_resources(1);
  const Semigroup sg(amplitude_damping_model(1, 2.0));
  const CMatrix cert = sum_local(pauli::X(), 1, 2) + 0.3 * sum_local(pauli::Z(), 1, 2);
  for (auto [t1, t2] : {std::pair{0.2, 0.25}, std::pair{0.5, 1.5}}) {
    const auto a = evolve(sg, t1), b = evolve(sg, t2);
    const double gap = std::abs(complexity_ratio(env_problem(a, sae, 2), cert) -
                                complexity_ratio(env_problem(b, sae, 2), cert));
    EXPECT_LE(gap, 4.0 * diamond_distance(a, b) + 1e-7);
  }
}

TEST(Compatibility, HamiltonianFamilies) {
  const auto s = pauli_resources(2);
  const auto dims = SystemDims::qubits(2);
  std::vector<CMatrix> gens;
  for (std::size_t j = 0; j < 2; ++j) {
    gens.push_back(embed_local(pauli::X(), j, dims));
    gens.push_back(-embed_local(pauli::Y(), j, dims));
  }
  const auto c = compatibility_D(GateSet::hamiltonian("pauli", gens, 0.7), s);
  EXPECT_TRUE(c.analytic);
  EXPECT_DOUBLE_EQ(c.value, 0.7);
  EXPECT_NEAR(compatibility_D(GateSet::hamiltonian("pauli", gens, 1e-6), s).value, 0.0, 1e-5);

  const auto env = compatibility_D_env(*exchange_gates(2, 0.5), environment_resources(2), 2);
  EXPECT_TRUE(env.analytic);
  EXPECT_DOUBLE_EQ(env.value, 6.5);

  // generator outside the set: search estimate bounded by 2 ||H|| tau
  const auto z = compatibility_D(GateSet::hamiltonian("z", {pauli::Z()}, 0.3), pauli_resources(1));
  EXPECT_FALSE(z.analytic);
  EXPECT_GT(z.value, 0.0);
  EXPECT_LE(z.value, 0.6 + 1e-9);
}

TEST(Assumptions, PauliConfiguration) {
  const std::size_t n = 2;
  const auto s = pauli_resources(n);
  const auto gs = GateSet::hamiltonian("pauli", s.members, 1.0);
  const auto e = conditional_expectation(commutant(s));
  AssumptionInputs in;
  in.gates = &gs;
  in.resources = &s;
  in.e_fix = &e;
  const auto rep = assumption_check(in);
  ASSERT_EQ(rep.results.size(), 3u);
  EXPECT_TRUE(rep.all_pass());
}

TEST(Assumptions, DroppingYBreaksInvariance) {
  const ResourceSet s(2, {pauli::X()});
  const auto gs = GateSet::hamiltonian("pauli", {pauli::X(), pauli::Y()}, 1.0);
  const auto e = conditional_expectation(commutant(s));
  AssumptionInputs in;
  in.gates = &gs;
  in.resources = &s;
  in.e_fix = &e;
  const auto rep = assumption_check(in);
  EXPECT_FALSE(rep.all_pass());
  EXPECT_EQ(rep.results[1].name, "B");
  EXPECT_FALSE(rep.results[1].pass);
  EXPECT_GT(rep.results[1].residual, 1e-3);
  // oracle: E(ad_u(Z)) with u = exp(iY) rotates Z toward X, which E keeps
  const CMatrix u = matrix_exp(cplx(0, 1) * pauli::Y());
  const CMatrix moved = e.map.apply(conjugation(u).apply(pauli::Z()));
  EXPECT_GT(moved.cwiseAbs().maxCoeff(), 0.5);
}

TEST(Assumptions, DilatedConfiguration) {
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto sae = environment_resources(n);
    const auto gs = exchange_gates(n, 1.0);
    const auto e = fixed_point_expectation(amplitude_damping_model(n, 2.0));
    AssumptionInputs in;
    in.gates = gs.get();
    in.resources = &sae;
    in.e_fix = &e;
    in.ancilla_dim = 2;
    const auto rep = assumption_check(in);
    ASSERT_EQ(rep.results.size(), 4u);
    for (const auto& r : rep.results) EXPECT_TRUE(r.pass) << r.name << " " << r.detail;
  }
}

TEST(Mixing, PauliAnalytic) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const Semigroup sg(pauli_model(n));
    const auto r = mixing_time(sg, pauli_resources(n), double(n), 0.75, {sum_local(pauli::X(), n, n)});
    EXPECT_TRUE(r.certified);
    EXPECT_EQ(r.method, "analytic");
    EXPECT_NEAR(r.t, std::log(2.0) / 2.0, 1e-12);
    EXPECT_NEAR(r.threshold, n / 4.0, 1e-15);
  }
}

TEST(Mixing, GridMatchesAnalytic) {
  // a non-eigen certificate forces the grid path; X + 0.5 Z decays slower than X alone
  const Semigroup sg(pauli_model(1));
  MixingOptions o;
  o.diamond_fallback = false;
  const CMatrix x = pauli::X() + 0.5 * pauli::Z();
  const auto r = mixing_time(sg, pauli_resources(1), 1.0, 0.75, {x}, o);
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(r.method, "grid");
  const auto p = plain_problem(evolve(sg, r.t), pauli_resources(1));
  EXPECT_GE(complexity_ratio(p, x), 0.25 - 1e-12);
  const auto before = plain_problem(evolve(sg, r.t - 2e-4), pauli_resources(1));
  EXPECT_LT(complexity_ratio(before, x), 0.25);
}

TEST(Mixing, LimitsAndFallback) {
  const Semigroup sg(pauli_model(1));
  const auto near_one = mixing_time(sg, pauli_resources(1), 1.0, 1.0 - 1e-9, {pauli::X()});
  EXPECT_LT(near_one.t, 1e-6);
  EXPECT_THROW(mixing_time(sg, pauli_resources(1), 1.0, 1.0, {pauli::X()}), std::invalid_argument);
  // threshold above what the certificate reaches: diamond fallback supplies the time
  const auto r = mixing_time(sg, pauli_resources(1), 1.0, 0.25, {pauli::X()});
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(r.method, "diamond");
  ASSERT_TRUE(r.diamond_time.has_value());
  const auto e = fixed_point_expectation(sg.generator());
  EXPECT_LE(diamond_distance(evolve(sg, *r.diamond_time), adjoint_map(e.map)), 0.25 + 1e-6);
}

TEST(Mixing, AmplitudeDampingEnvironment) {
  const std::size_t n = 1;
  const Semigroup sg(amplitude_damping_model(n, 2.0));
  MixingOptions o;
  o.ancilla_dim = 2;
  const auto r = mixing_time(sg, environment_resources(n), 4.0 * n, 0.9, {sum_local(pauli::X(), n, n + 1)}, o);
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(r.method, "analytic");
  EXPECT_NEAR(r.t, std::log(5.0), 1e-12);
}

TEST(Bounds, PauliClosedForm) {
  EXPECT_NEAR(pauli_lower_bound_closed_form(2, 2, 1, 1), 0.0144539, 1e-6);
  for (double a : {1.0, 2.0})
    for (double b : {2.0, 3.0})
      for (std::size_t n = 1; n <= 3; ++n)
        for (double tau : {0.5, 1.0}) {
          BoundParams p;
          p.alpha = a;
          p.beta = b;
          p.tau = tau;
          p.D = tau;
          const double m = lower_bound_M(p, n / 2.0, std::log(2.0) / 2.0);
          EXPECT_NEAR(m, pauli_lower_bound_closed_form(a, b, n, tau), 1e-12);
        }
}

TEST(Bounds, Validation) {
  EXPECT_THROW(c_alpha_beta(1.0, 1.0, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(c_alpha_beta(1.0, 1.005, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(c_alpha_beta(0.0, 2.0, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(c_alpha_beta(1.0, 2.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(c_alpha_beta(1.0, 2.0, 0.5, 0.0), 0.25);
  EXPECT_LT(c_alpha_beta(1.0, 2.0, 1.0 - 1e-9, 1.0), 1e-9);
}

TEST(Bounds, FixedTimeAndPrecision) {
  BoundParams p;
  p.alpha = 1.0;
  p.beta = 2.0;
  p.D = 1.0;
  const double tm = 0.5;
  auto ok = lower_bound_fixed_time(0.2, p, 2.0, tm);
  EXPECT_TRUE(ok.applicable);
  EXPECT_NEAR(ok.value, 0.2 * 2.0 / (8.0 * tm), 1e-15);
  auto bad = lower_bound_fixed_time(0.25, p, 2.0, tm);
  EXPECT_FALSE(bad.applicable);
  EXPECT_FALSE(bad.reason.empty());
  EXPECT_NEAR(lower_bound_fixed_time(1e-8, p, 2.0, tm).value, 0.0, 1e-8);

  auto fp = lower_bound_fixed_precision(5.0, 0.1, p, 2.0, tm);
  EXPECT_TRUE(fp.applicable);
  EXPECT_NEAR(fp.value, 5.0 * 2.0 / (8.0 * tm), 1e-15);
  EXPECT_FALSE(lower_bound_fixed_precision(0.3, 0.1, p, 2.0, tm).applicable);
}

TEST(Bounds, AmplitudeDampingSandwich) {
  BoundParams p;
  p.alpha = 2.0;
  p.beta = 2.0;
  p.epsilon = 0.9;
  for (std::size_t n = 1; n <= 3; ++n) {
    p.tau = 1.0;
    p.D = p.tau + 6.0;
    const double lo = env_lower_bound(p, n / 2.0, std::log(5.0));
    EXPECT_GT(lo, 0.0);
    EXPECT_LE(lo, M_PI * n / p.tau);
  }
}
