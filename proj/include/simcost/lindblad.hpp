#pragma once

#include <vector>

#include "simcost/qmat.hpp"

namespace simcost {

struct LindbladGenerator {
  SystemDims dims;
  CMatrix hamiltonian;         // d x d, Hermitian (zero allowed)
  std::vector<CMatrix> jumps;  // V_j

  LindbladGenerator() = default;
  LindbladGenerator(SystemDims d, CMatrix h, std::vector<CMatrix> v);

  std::size_t dim() const { return dims.total(); }
};

// L(x) = -i[H,x] + sum_j V_j x V_j^dag - 1/2 {V_j^dag V_j, x}
SuperOperator generator_superop(const LindbladGenerator& g);

// Single dissipator L_V.
SuperOperator dissipator(const CMatrix& v);

class Semigroup {
 public:
  explicit Semigroup(LindbladGenerator g);

  const LindbladGenerator& generator() const { return gen_; }
  const SuperOperator& superop_L() const { return L_; }
  std::size_t dim() const { return gen_.dim(); }

 private:
  LindbladGenerator gen_;
  SuperOperator L_;
};

SuperOperator evolve(const Semigroup& s, double t);

bool is_unital(const LindbladGenerator& g, double tol = kStructTol);
double nogo_slope(const LindbladGenerator& g);  // ||L(I)||_1

// Reference models.
// Pauli noise: L = sum_j L_{X_j} + L_{Y_j}.
LindbladGenerator pauli_model(std::size_t n);
// Amplitude damping: L = sum_j L_{sqrt(rate) a_j}, a = |0><1|.
LindbladGenerator amplitude_damping_model(std::size_t n, double rate = 1.0);

}  // namespace simcost
