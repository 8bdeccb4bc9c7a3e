#pragma once

#include <random>

#include "simcost/qmat.hpp"

namespace simcost::testing {

inline CMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(r, c);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline CMatrix random_hermitian(std::size_t d, std::mt19937_64& rng) {
  return hermitian_part(random_matrix(d, d, rng));
}

inline CMatrix random_unitary(std::size_t d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(d, d, rng));
  return qr.householderQ() * CMatrix::Identity(d, d);
}

inline CMatrix random_density(std::size_t d, std::mt19937_64& rng) {
  const CMatrix g = random_matrix(d, d, rng);
  CMatrix r = g * g.adjoint();
  return r / r.trace();
}

inline SuperOperator random_channel(std::size_t d, std::size_t k, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(d * k, d, rng));
  const CMatrix v = qr.householderQ() * CMatrix::Identity(d * k, d);
  KrausSet ks;
  for (std::size_t i = 0; i < k; ++i) ks.operators.push_back(v.block(i * d, 0, d, d));
  return superop_from_kraus(ks);
}

inline SuperOperator random_mixed_unitary(std::size_t d, std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> w(k);
  double tot = 0;
  for (auto& x : w) tot += (x = u(rng));
  SuperOperator s = SuperOperator::zero(d);
  for (std::size_t i = 0; i < k; ++i) s = s + cplx(w[i] / tot) * conjugation(random_unitary(d, rng));
  return s;
}

}  // namespace simcost::testing
