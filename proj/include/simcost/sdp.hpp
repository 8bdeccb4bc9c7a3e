#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "simcost/qmat.hpp"

namespace simcost {

// Block-diagonal Hermitian semidefinite program
//   primal:  min <C, X>   s.t. <A_i, X> = b_i,  X >= 0
//   dual:    max b^T y    s.t. S = C - sum_i y_i A_i >= 0
// with <A, X> = Re Tr(A X).  Constraint matrices are sparse; every entry is
// listed explicitly (both triangles), so A_i is Hermitian by construction.
struct SdpEntry {
  int block;
  int row;
  int col;
  cplx value;
};

struct SdpProblem {
  std::vector<int> block_sizes;
  std::vector<CMatrix> C;
  std::vector<std::vector<SdpEntry>> A;
  Eigen::VectorXd b;

  std::size_t num_constraints() const { return A.size(); }
  void validate() const;
};

struct SdpOptions {
  double tol = 1e-10;
  int max_iter = 200;
};

struct SdpSolution {
  std::vector<CMatrix> X;
  std::vector<CMatrix> S;
  Eigen::VectorXd y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double relative_gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opt = {});

// helpers shared with callers that post-process solutions
std::vector<CMatrix> sdp_adjoint(const SdpProblem& p, const Eigen::VectorXd& y);
Eigen::VectorXd sdp_apply(const SdpProblem& p, const std::vector<CMatrix>& x);

}  // namespace simcost
