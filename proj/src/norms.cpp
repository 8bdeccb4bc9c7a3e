#include "simcost/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace simcost {

namespace {

CMatrix psd_sqrt(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(rho));
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix normalized_state(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(x));
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  CMatrix r = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  const double tr = r.trace().real();
  if (!(tr > 0.0)) return CMatrix::Identity(x.rows(), x.cols()) / static_cast<double>(x.rows());
  return r / tr;
}

double lambda_max(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double lambda_min(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Hermitian basis element k of a D x D space: diagonal units first, then
// symmetric and antisymmetric pairs for every p < q.
struct HermBasis {
  std::size_t D;
  std::vector<std::vector<std::pair<std::pair<int, int>, cplx>>> elems;

  explicit HermBasis(std::size_t d) : D(d) {
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t p = 0; p < D; ++p) elems.push_back({{{int(p), int(p)}, cplx(1)}});
    for (std::size_t p = 0; p < D; ++p)
      for (std::size_t q = p + 1; q < D; ++q) {
        elems.push_back({{{int(p), int(q)}, cplx(r)}, {{int(q), int(p)}, cplx(r)}});
        elems.push_back({{{int(p), int(q)}, cplx(0, r)}, {{int(q), int(p)}, cplx(0, -r)}});
      }
  }

  CMatrix assemble(const Eigen::VectorXd& coef, std::size_t offset) const {
    CMatrix out = CMatrix::Zero(D, D);
    for (std::size_t k = 0; k < elems.size(); ++k)
      for (const auto& [rc, v] : elems[k]) out(rc.first, rc.second) += coef(offset + k) * v;
    return out;
  }
};

SdpProblem diamond_program(const CMatrix& J, std::size_t din, std::size_t dout, const HermBasis& basis) {
  const std::size_t D = din * dout;
  SdpProblem p;
  p.block_sizes = {int(din), int(din), int(2 * D)};
  p.C = {CMatrix::Zero(din, din), CMatrix::Zero(din, din), CMatrix::Zero(2 * D, 2 * D)};
  p.C[2].topRightCorner(D, D) = -J;
  p.C[2].bottomLeftCorner(D, D) = -J.adjoint();

  const std::size_t m = 2 + 2 * basis.elems.size();
  p.A.resize(m);
  p.b = Eigen::VectorXd::Zero(m);
  p.b(0) = p.b(1) = -0.5;
  for (int w = 0; w < 2; ++w)
    for (std::size_t r = 0; r < din; ++r) p.A[w].push_back({w, int(r), int(r), cplx(-1)});
  for (int w = 0; w < 2; ++w)
    for (std::size_t k = 0; k < basis.elems.size(); ++k) {
      auto& a = p.A[2 + w * basis.elems.size() + k];
      for (const auto& [rc, v] : basis.elems[k]) {
        const int pr = rc.first, pc = rc.second;
        if (pr % int(dout) == pc % int(dout)) a.push_back({w, pr / int(dout), pc / int(dout), v});
        a.push_back({2, pr + w * int(D), pc + w * int(D), -v});
      }
    }
  return p;
}

}  // namespace

double diamond_lower_value(const SuperOperator& s, const CMatrix& rho0, const CMatrix& rho1) {
  const std::size_t d = s.din;
  const CMatrix m0 = psd_sqrt(rho0), m1 = psd_sqrt(rho1);
  CVector u(d * d), v(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      u(i * d + k) = m0(i, k);
      v(i * d + k) = m1(i, k);
    }
  return trace_norm(apply_tensor_id(s, u * v.adjoint(), d));
}

DiamondResult diamond_norm(const SuperOperator& s, const DiamondOptions& opt) {
  if (!s.square()) throw std::invalid_argument("diamond_norm: map must be square");
  const std::size_t d = s.din;
  DiamondResult res;
  const ChoiMatrix choi = choi_from_superop(s);
  const double scale = choi.matrix.norm();
  if (scale == 0.0) {
    res.certificate.W0 = res.certificate.W1 = CMatrix::Zero(d * d, d * d);
    res.certificate.rho0 = res.certificate.rho1 = CMatrix::Identity(d, d) / double(d);
    return res;
  }
  const CMatrix J = choi.matrix / scale;
  const HermBasis basis(d * d);
  const SdpProblem prob = diamond_program(J, d, d, basis);
  SdpOptions so;
  so.tol = std::min(1e-10, 0.01 * opt.tol);
  so.max_iter = opt.max_iter;
  const SdpSolution sol = solve_sdp(prob, so);
  res.iterations = sol.iterations;

  // certified upper value from a repaired dual point
  const std::size_t D = d * d;
  CMatrix W0 = basis.assemble(sol.y, 2), W1 = basis.assemble(sol.y, 2 + basis.elems.size());
  W0 = hermitian_part(W0);
  W1 = hermitian_part(W1);
  CMatrix big(2 * D, 2 * D);
  big << W0, -J, -J.adjoint(), W1;
  const double shift = std::max(0.0, -lambda_min(big));
  W0 += shift * CMatrix::Identity(D, D);
  W1 += shift * CMatrix::Identity(D, D);
  const double l0 = lambda_max(trace_output(W0, d, d));
  const double l1 = lambda_max(trace_output(W1, d, d));
  res.upper = 0.5 * (l0 + l1) * scale;

  // lower value from the primal input states
  const CMatrix r0 = normalized_state(sol.X[0]), r1 = normalized_state(sol.X[1]);
  double lo = 0.0;
  CMatrix best0 = r0, best1 = r1;
  for (int variant = 0; variant < 2; ++variant) {
    const CMatrix a = variant ? CMatrix(r0.transpose()) : r0;
    const CMatrix b = variant ? CMatrix(r1.transpose()) : r1;
    const double v = diamond_lower_value(s, a, b);
    if (v > lo) {
      lo = v;
      best0 = a;
      best1 = b;
    }
  }
  res.lower = std::min(lo, res.upper);
  res.value = 0.5 * (res.lower + res.upper);
  res.gap = res.upper - res.lower;
  res.certificate = DiamondCertificate{W0 * scale, W1 * scale, l0 * scale, l1 * scale, best0, best1};

  if (res.gap > opt.tol * std::max(1.0, res.upper))
    throw SolverError("diamond_norm: certified gap " + std::to_string(res.gap) +
                      " exceeds tolerance after " + std::to_string(sol.iterations) + " iterations");
  return res;
}

double diamond_distance(const SuperOperator& a, const SuperOperator& b, const DiamondOptions& opt) {
  return diamond_norm(a - b, opt).value;
}

double sampled_lower_bound(const SuperOperator& s, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("sampled_lower_bound: trials must be >= 1");
  if (!s.square()) throw std::invalid_argument("sampled_lower_bound: map must be square");
  const std::size_t d = s.din, n = d * d;
  const SuperOperator sdag(d, s.matrix.adjoint());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;

  // trace norm of m and the unitary polar factor q with Re Tr(q^dag m) = ||m||_1
  auto polar = [](const CMatrix& m, CMatrix& q) {
    if (is_hermitian(m, 1e-13 * (1.0 + m.cwiseAbs().maxCoeff()))) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
      const Eigen::VectorXd ev = es.eigenvalues();
      Eigen::VectorXd sg(ev.size());
      for (Eigen::Index i = 0; i < ev.size(); ++i) sg(i) = ev(i) >= 0 ? 1.0 : -1.0;
      q = es.eigenvectors() * sg.asDiagonal() * es.eigenvectors().adjoint();
      return ev.cwiseAbs().sum();
    }
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    q = svd.matrixU() * svd.matrixV().adjoint();
    return svd.singularValues().sum();
  };
  auto value = [&](const CVector& psi) { return trace_norm(apply_tensor_id(s, psi * psi.adjoint(), d)); };
  auto refine = [&](CVector psi) {
    CMatrix q;
    double f = polar(apply_tensor_id(s, psi * psi.adjoint(), d), q);
    for (int it = 0; it < 2000; ++it) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(apply_tensor_id(sdag, q, d)));
      psi = es.eigenvectors().col(n - 1);
      CMatrix qn;
      const double fn = polar(apply_tensor_id(s, psi * psi.adjoint(), d), qn);
      const bool done = fn <= f + 1e-14 * std::max(1.0, f);
      f = std::max(f, fn);
      q = std::move(qn);
      if (done) break;
    }
    return f;
  };

  double best = 0.0, best_raw = -1.0;
  for (int k = 0; k < trials; ++k) {
    CVector psi(n);
    for (std::size_t i = 0; i < n; ++i) psi(i) = cplx(g(rng), g(rng));
    psi.normalize();
    const double raw = value(psi);
    best = std::max(best, raw);
    if (k < 8 || raw > best_raw) best = std::max(best, refine(psi));
    best_raw = std::max(best_raw, raw);
  }
  return best;
}

}  // namespace simcost
