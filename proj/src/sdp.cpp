#include "simcost/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace simcost {

namespace {

using Blocks = std::vector<CMatrix>;

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k].conjugate().cwiseProduct(b[k])).sum().real();
  return s;
}

double fro(const Blocks& a) {
  double s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

Blocks axpy(const Blocks& x, double alpha, const Blocks& d) {
  Blocks out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] + alpha * d[k];
  return out;
}

void hermitize(Blocks& a) {
  for (auto& m : a) m = hermitian_part(m);
}

struct NtScaling {
  CMatrix G, Ginv, W;
  Eigen::VectorXd lam;
};

Eigen::LLT<CMatrix> robust_llt(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() == Eigen::Success) return llt;
  const double shift = 1e-14 * (1.0 + m.cwiseAbs().maxCoeff());
  Eigen::LLT<CMatrix> again(m + shift * CMatrix::Identity(m.rows(), m.cols()));
  if (again.info() != Eigen::Success) throw SolverError("sdp: iterate lost positive definiteness");
  return again;
}

NtScaling nt_scaling(const CMatrix& x, const CMatrix& s) {
  const auto n = x.rows();
  const CMatrix lx = robust_llt(x).matrixL();
  const CMatrix ls = robust_llt(s).matrixL();
  Eigen::JacobiSVD<CMatrix> svd(ls.adjoint() * lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
  NtScaling sc;
  sc.lam = svd.singularValues();
  const Eigen::VectorXd is = sc.lam.cwiseSqrt().cwiseInverse();
  sc.G = lx * svd.matrixV() * is.asDiagonal();
  const CMatrix lxinv = lx.triangularView<Eigen::Lower>().solve(CMatrix::Identity(n, n));
  sc.Ginv = sc.lam.cwiseSqrt().asDiagonal() * svd.matrixV().adjoint() * lxinv;
  sc.W = sc.G * sc.G.adjoint();
  return sc;
}

// largest alpha with x + alpha dx >= 0 (infinity if unbounded)
double max_step(const CMatrix& x, const CMatrix& dx) {
  const CMatrix l = robust_llt(x).matrixL();
  const auto tri = l.triangularView<Eigen::Lower>();
  CMatrix m = tri.solve(dx);
  m = tri.solve(m.adjoint()).adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

}  // namespace

void SdpProblem::validate() const {
  if (C.size() != block_sizes.size()) throw std::invalid_argument("sdp: C has wrong block count");
  for (std::size_t k = 0; k < C.size(); ++k)
    if (C[k].rows() != block_sizes[k] || C[k].cols() != block_sizes[k])
      throw std::invalid_argument("sdp: C block has wrong size");
  if (static_cast<std::size_t>(b.size()) != A.size())
    throw std::invalid_argument("sdp: b and constraint list differ in length");
  for (const auto& a : A)
    for (const auto& e : a) {
      if (e.block < 0 || static_cast<std::size_t>(e.block) >= block_sizes.size())
        throw std::invalid_argument("sdp: constraint entry references a missing block");
      const int n = block_sizes[e.block];
      if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
        throw std::invalid_argument("sdp: constraint entry out of range");
    }
}

std::vector<CMatrix> sdp_adjoint(const SdpProblem& p, const Eigen::VectorXd& y) {
  Blocks out(p.block_sizes.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = CMatrix::Zero(p.block_sizes[k], p.block_sizes[k]);
  for (std::size_t i = 0; i < p.A.size(); ++i) {
    if (y(i) == 0.0) continue;
    for (const auto& e : p.A[i]) out[e.block](e.row, e.col) += y(i) * e.value;
  }
  return out;
}

Eigen::VectorXd sdp_apply(const SdpProblem& p, const std::vector<CMatrix>& x) {
  Eigen::VectorXd out(p.A.size());
  for (std::size_t i = 0; i < p.A.size(); ++i) {
    double s = 0.0;
    for (const auto& e : p.A[i]) s += (e.value * x[e.block](e.col, e.row)).real();
    out(i) = s;
  }
  return out;
}

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opt) {
  p.validate();
  const std::size_t nb = p.block_sizes.size();
  const std::size_t m = p.A.size();
  double ntot = 0.0;
  for (int s : p.block_sizes) ntot += s;

  // starting point
  std::vector<double> anorm(nb, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> sq(nb, 0.0);
    for (const auto& e : p.A[i]) sq[e.block] += std::norm(e.value);
    for (std::size_t k = 0; k < nb; ++k) anorm[k] = std::max(anorm[k], std::sqrt(sq[k]));
  }
  Blocks X(nb), S(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const double nk = p.block_sizes[k];
    double xi = std::max(10.0, std::sqrt(nk));
    for (std::size_t i = 0; i < m; ++i) xi = std::max(xi, nk * (1.0 + std::abs(p.b(i))) / (1.0 + anorm[k]));
    const double eta = std::max({10.0, std::sqrt(nk), (1.0 + std::max(anorm[k], p.C[k].norm())) / std::sqrt(nk)});
    X[k] = xi * CMatrix::Identity(p.block_sizes[k], p.block_sizes[k]);
    S[k] = eta * CMatrix::Identity(p.block_sizes[k], p.block_sizes[k]);
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  const double bnorm = p.b.norm();
  const double cnorm = fro(p.C);

  SdpSolution sol, best;
  double best_merit = std::numeric_limits<double>::infinity();
  int since_best = 0;
  int stall = 0;
  for (int it = 0; it <= opt.max_iter; ++it) {
    const Eigen::VectorXd rp = p.b - sdp_apply(p, X);
    Blocks Rd = p.C;
    {
      const Blocks aty = sdp_adjoint(p, y);
      for (std::size_t k = 0; k < nb; ++k) Rd[k] -= S[k] + aty[k];
    }
    const double pobj = inner(p.C, X);
    const double dobj = p.b.dot(y);
    const double xs = inner(X, S);
    sol.primal_objective = pobj;
    sol.dual_objective = dobj;
    sol.primal_infeasibility = rp.norm() / (1.0 + bnorm);
    sol.dual_infeasibility = fro(Rd) / (1.0 + cnorm);
    sol.relative_gap = std::max(std::abs(pobj - dobj), xs) / (1.0 + std::abs(pobj) + std::abs(dobj));
    sol.iterations = it;
    const double merit = std::max({sol.primal_infeasibility, sol.dual_infeasibility, sol.relative_gap});
    if (merit < 0.5 * best_merit) since_best = 0; else ++since_best;
    if (merit < best_merit) {
      best_merit = merit;
      best = sol;
      best.X = X;
      best.S = S;
      best.y = y;
    }
    if (merit < opt.tol) {
      best.converged = true;
      break;
    }
    // numerical stagnation: further iterations only degrade the iterate
    if (it == opt.max_iter || stall >= 5 || since_best >= 8) break;

    try {
      const double mu = xs / ntot;
      std::vector<NtScaling> sc(nb);
      for (std::size_t k = 0; k < nb; ++k) sc[k] = nt_scaling(X[k], S[k]);

      // Schur complement M_ij = Re Tr(A_i W A_j W)
      Eigen::MatrixXd M(m, m);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
          double s = 0.0;
          for (const auto& e : p.A[i])
            for (const auto& f : p.A[j]) {
              if (e.block != f.block) continue;
              const CMatrix& W = sc[e.block].W;
              s += (e.value * f.value * W(e.col, f.row) * W(f.col, e.row)).real();
            }
          M(i, j) = M(j, i) = s;
        }
      Eigen::LLT<Eigen::MatrixXd> chol(M);
      if (chol.info() != Eigen::Success) {
        const double reg = 1e-13 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
        chol.compute(M + reg * Eigen::MatrixXd::Identity(m, m));
        if (chol.info() != Eigen::Success) throw SolverError("sdp: Schur complement is singular");
      }

      Blocks WRdW(nb);
      for (std::size_t k = 0; k < nb; ++k) WRdW[k] = sc[k].W * Rd[k] * sc[k].W;
      const Eigen::VectorXd arw = sdp_apply(p, WRdW);

      auto solve_dir = [&](const Blocks& Rc, Blocks& dX, Eigen::VectorXd& dy, Blocks& dS) {
        const Eigen::VectorXd rhs = rp - sdp_apply(p, Rc) + arw;
        dy = chol.solve(rhs);
        dy += chol.solve(rhs - M * dy);
        const Blocks ady = sdp_adjoint(p, dy);
        dS.resize(nb);
        dX.resize(nb);
        for (std::size_t k = 0; k < nb; ++k) {
          dS[k] = hermitian_part(Rd[k] - ady[k]);
          dX[k] = hermitian_part(Rc[k] - sc[k].W * dS[k] * sc[k].W);
        }
      };

      // predictor
      Blocks Rc(nb), dX, dS;
      Eigen::VectorXd dy;
      for (std::size_t k = 0; k < nb; ++k) Rc[k] = -X[k];
      solve_dir(Rc, dX, dy, dS);
      double ap = 1.0, ad = 1.0;
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(X[k], dX[k]));
        ad = std::min(ad, max_step(S[k], dS[k]));
      }
      const double mu_aff = inner(axpy(X, ap, dX), axpy(S, ad, dS)) / ntot;
      const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

      // corrector
      for (std::size_t k = 0; k < nb; ++k) {
        const auto& s = sc[k];
        const CMatrix dxt = s.Ginv * dX[k] * s.Ginv.adjoint();
        const CMatrix dst = s.G.adjoint() * dS[k] * s.G;
        const auto n = p.block_sizes[k];
        CMatrix rhs = -0.5 * (dxt * dst + dst * dxt);
        for (int r = 0; r < n; ++r) rhs(r, r) += sigma * mu - s.lam(r) * s.lam(r);
        CMatrix h(n, n);
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c) h(r, c) = 2.0 * rhs(r, c) / (s.lam(r) + s.lam(c));
        Rc[k] = hermitian_part(s.G * h * s.G.adjoint());
      }
      solve_dir(Rc, dX, dy, dS);
      ap = std::numeric_limits<double>::infinity();
      ad = ap;
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(X[k], dX[k]));
        ad = std::min(ad, max_step(S[k], dS[k]));
      }
      const double gamma = 0.9 + 0.09 * std::min({1.0, ap, ad});
      ap = std::min(1.0, gamma * ap);
      ad = std::min(1.0, gamma * ad);
      if (std::max(ap, ad) < 1e-8) ++stall; else stall = 0;

      X = axpy(X, ap, dX);
      S = axpy(S, ad, dS);
      y += ad * dy;
      hermitize(X);
      hermitize(S);
    } catch (const SolverError&) {
      if (best.X.empty()) throw;
      break;  // breakdown near the optimum: keep the best iterate
    }
  }
  best.iterations = sol.iterations;
  return best;
}

}  // namespace simcost
