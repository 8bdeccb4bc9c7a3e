#include <cmath>

#include <gtest/gtest.h>

#include "simcost/lindblad.hpp"
#include "simcost/norms.hpp"
#include "test_util.hpp"

using namespace simcost;
using namespace simcost::testing;

namespace {

SuperOperator completely_depolarizing(std::size_t d) {
  SuperOperator s = SuperOperator::zero(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t a = 0; a < d; ++a) s.matrix(a + d * a, i + d * i) = 1.0 / double(d);
  return s;
}

}  // namespace

TEST(Diamond, ZeroMap) {
  const auto r = diamond_norm(SuperOperator::zero(3));
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.upper, 0.0);
}

TEST(Diamond, IdentityMinusDepolarizing) {
  // closed form 2(1 - 1/d^2)
  for (std::size_t d : {2, 3}) {
    const auto r = diamond_norm(SuperOperator::identity(d) - completely_depolarizing(d));
    EXPECT_NEAR(r.value, 2.0 * (1.0 - 1.0 / double(d * d)), 1e-7);
    EXPECT_LE(r.gap, 1e-7);
  }
  EXPECT_NEAR(sampled_lower_bound(SuperOperator::identity(2) - completely_depolarizing(2), 1000), 1.5, 1e-5);
}

TEST(Diamond, OrthogonalUnitaries) {
  EXPECT_NEAR(diamond_distance(SuperOperator::identity(2), conjugation(pauli::X())), 2.0, 1e-7);
}

TEST(Diamond, FrozenReferenceValues) {
  // reference values from an independent conic solver (Watrous primal)
  const auto l = dissipator(pauli::lower());
  const SuperOperator s1 = SuperOperator(2, matrix_exp(0.3 * l.matrix)) -
                           conjugation(matrix_exp(cplx(0, 0.2) * pauli::X()));
  EXPECT_NEAR(diamond_norm(s1).value, 0.7037671968, 1e-7);
  const SuperOperator s2 =
      SuperOperator(2, matrix_exp(0.5 * (dissipator(pauli::X()).matrix + dissipator(pauli::Y()).matrix))) -
      SuperOperator(2, matrix_exp(0.5 * dissipator(pauli::Z()).matrix));
  EXPECT_NEAR(diamond_norm(s2).value, 1.0 - std::exp(-2.0), 1e-7);
  const SuperOperator s3 = left_right(pauli::X() + cplx(0, 0.5) * pauli::Z(), pauli::Y() - 0.3 * pauli::X());
  EXPECT_NEAR(diamond_norm(s3).value, 1.5660459714, 1e-7);
}

TEST(Diamond, ChannelsHaveUnitNorm) {
  std::mt19937_64 rng(21);
  for (std::size_t d : {2, 3, 4})
    for (int k = 0; k < 3; ++k) {
      const auto r = diamond_norm(random_channel(d, 1 + k, rng));
      EXPECT_NEAR(r.value, 1.0, 1e-7);
    }
  const Semigroup ad(amplitude_damping_model(2));
  EXPECT_NEAR(diamond_norm(evolve(ad, 0.4)).value, 1.0, 1e-7);
}

TEST(Diamond, InvarianceHomogeneityTriangle) {
  std::mt19937_64 rng(22);
  const SuperOperator a = random_channel(2, 2, rng), b = random_channel(2, 3, rng), c = random_channel(2, 2, rng);
  const SuperOperator diff = a - b;
  const double v = diamond_norm(diff).value;
  const SuperOperator u = conjugation(random_unitary(2, rng)), w = conjugation(random_unitary(2, rng));
  EXPECT_NEAR(diamond_norm(u * diff * w).value, v, 1e-7);
  EXPECT_NEAR(diamond_norm(cplx(-2.5, 1.0) * diff).value, std::abs(cplx(-2.5, 1.0)) * v, 1e-7 * 2.7);
  EXPECT_NEAR(diamond_distance(a, b), diamond_distance(b, a), 1e-7);
  EXPECT_LE(diamond_distance(a, c), diamond_distance(a, b) + diamond_distance(b, c) + 1e-7);
  EXPECT_LE(diamond_distance(a, b), 2.0 + 1e-7);
  EXPECT_NEAR(diamond_distance(a, a), 0.0, 1e-12);
}

TEST(Diamond, TinyDifferencesKeepRelativeAccuracy) {
  const SuperOperator small = cplx(1e-9) * (SuperOperator::identity(2) - completely_depolarizing(2));
  EXPECT_NEAR(diamond_norm(small).value, 1.5e-9, 1e-15);
  // finite difference of the semigroup against its derivative L T_t
  const Semigroup s(pauli_model(1));
  const double t = 0.3, h = 1e-7;
  const double deriv = diamond_norm(s.superop_L() * evolve(s, t)).value;
  EXPECT_NEAR(diamond_distance(evolve(s, t + h), evolve(s, t)) / h, deriv, 1e-5 * deriv);
}

TEST(Diamond, CertificateIsDualFeasible) {
  std::mt19937_64 rng(23);
  const SuperOperator diff = random_channel(2, 2, rng) - random_channel(2, 2, rng);
  const auto r = diamond_norm(diff);
  const CMatrix j = choi_from_superop(diff).matrix;
  CMatrix big(8, 8);
  big << r.certificate.W0, -j, -j.adjoint(), r.certificate.W1;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(big), Eigen::EigenvaluesOnly);
  EXPECT_GT(es.eigenvalues()(0), -1e-12);
  EXPECT_NEAR(0.5 * (r.certificate.lambda0 + r.certificate.lambda1), r.upper, 1e-12);
  EXPECT_NEAR(diamond_lower_value(diff, r.certificate.rho0, r.certificate.rho1), r.lower, 1e-12);
}

TEST(Diamond, LinearGrowthBound) {
  const Semigroup s(amplitude_damping_model(1));
  const double lnorm = diamond_norm(s.superop_L()).value;
  for (double t : {0.01, 0.1, 1.0}) {
    const double err = diamond_distance(evolve(s, t), SuperOperator::identity(2));
    EXPECT_LE(err, std::min(t * lnorm * std::exp(t * lnorm), 2.0) + 1e-7);
  }
}

TEST(Sampled, AgreesWithSdp) {
  std::mt19937_64 rng(24);
  for (int k = 0; k < 4; ++k) {
    const SuperOperator d2 = random_channel(2, 2, rng) - random_channel(2, 2, rng);
    const double sdp = diamond_norm(d2).value;
    const double smp = sampled_lower_bound(d2, 200, 100 + k);
    EXPECT_LE(smp, sdp + 1e-7);
    EXPECT_NEAR(smp, sdp, 1e-5);
  }
  for (int k = 0; k < 2; ++k) {
    const SuperOperator d4 = random_channel(4, 2, rng) - random_channel(4, 3, rng);
    const double sdp = diamond_norm(d4).value;
    const double smp = sampled_lower_bound(d4, 300, 200 + k);
    EXPECT_LE(smp, sdp + 1e-7);
    EXPECT_NEAR(smp, sdp, 1e-4);
  }
}

TEST(Sampled, ZeroMonotoneAndErrors) {
  EXPECT_EQ(sampled_lower_bound(SuperOperator::zero(2), 10), 0.0);
  std::mt19937_64 rng(25);
  const SuperOperator d = random_channel(3, 2, rng) - random_channel(3, 2, rng);
  double prev = 0.0;
  for (int trials : {1, 2, 5, 20, 60}) {
    const double v = sampled_lower_bound(d, trials, 7);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_THROW(sampled_lower_bound(d, 0), std::invalid_argument);
}
