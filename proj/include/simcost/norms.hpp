#pragma once

#include <cstdint>

#include "simcost/qmat.hpp"
#include "simcost/sdp.hpp"

namespace simcost {

// Dual feasible point of the two-block diamond-norm program together with
// the primal states that realise the lower value.
struct DiamondCertificate {
  CMatrix W0, W1;      // din*dout square, [[W0, -J], [-J^dag, W1]] >= 0
  double lambda0 = 0;  // lambda_max(Tr_out W0)
  double lambda1 = 0;
  CMatrix rho0, rho1;  // input states for the lower value
};

struct DiamondResult {
  double value = 0.0;  // midpoint of [lower, upper]
  double lower = 0.0;
  double upper = 0.0;
  double gap = 0.0;
  int iterations = 0;
  DiamondCertificate certificate;
};

struct DiamondOptions {
  double tol = 1e-7;
  int max_iter = 200;
};

DiamondResult diamond_norm(const SuperOperator& s, const DiamondOptions& opt = {});
double diamond_distance(const SuperOperator& a, const SuperOperator& b, const DiamondOptions& opt = {});

// ||(s (x) id)(x)||_1 restricted to x = |u><v| with Tr_ref uu* = rho0, Tr_ref vv* = rho1.
double diamond_lower_value(const SuperOperator& s, const CMatrix& rho0, const CMatrix& rho1);

// Random pure states on H (x) H followed by fixed-point refinement.
double sampled_lower_bound(const SuperOperator& s, int trials, std::uint64_t seed = 0x5eed);

}  // namespace simcost
