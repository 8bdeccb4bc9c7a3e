#include "simcost/lindblad.hpp"

#include <cmath>
#include <stdexcept>

namespace simcost {

LindbladGenerator::LindbladGenerator(SystemDims d, CMatrix h, std::vector<CMatrix> v)
    : dims(std::move(d)), hamiltonian(std::move(h)), jumps(std::move(v)) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  if (hamiltonian.size() == 0) hamiltonian = CMatrix::Zero(n, n);
  if (hamiltonian.rows() != n || hamiltonian.cols() != n)
    throw std::invalid_argument("LindbladGenerator: Hamiltonian has wrong dimension");
  if (!is_hermitian(hamiltonian, kAlgebraTol))
    throw std::invalid_argument("LindbladGenerator: Hamiltonian is not Hermitian");
  for (const auto& v : jumps)
    if (v.rows() != n || v.cols() != n)
      throw std::invalid_argument("LindbladGenerator: jump operator has wrong dimension");
}

SuperOperator dissipator(const CMatrix& v) {
  const auto d = static_cast<std::size_t>(v.rows());
  const CMatrix vdv = v.adjoint() * v;
  const CMatrix id = CMatrix::Identity(d, d);
  CMatrix m = tensor(v.conjugate(), v) - 0.5 * tensor(id, vdv) - 0.5 * tensor(vdv.transpose(), id);
  return SuperOperator(d, std::move(m));
}

SuperOperator generator_superop(const LindbladGenerator& g) {
  const std::size_t d = g.dim();
  const CMatrix id = CMatrix::Identity(d, d);
  const cplx mi(0, -1);
  CMatrix m = mi * (tensor(id, g.hamiltonian) - tensor(g.hamiltonian.transpose(), id));
  for (const auto& v : g.jumps) m += dissipator(v).matrix;
  return SuperOperator(d, std::move(m));
}

Semigroup::Semigroup(LindbladGenerator g) : gen_(std::move(g)), L_(generator_superop(gen_)) {}

SuperOperator evolve(const Semigroup& s, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("evolve: time must be non-negative");
  if (t == 0.0) return SuperOperator::identity(s.dim());
  return SuperOperator(s.dim(), matrix_exp(t * s.superop_L().matrix));
}

bool is_unital(const LindbladGenerator& g, double tol) { return nogo_slope(g) <= tol; }

double nogo_slope(const LindbladGenerator& g) {
  const std::size_t d = g.dim();
  return trace_norm(generator_superop(g).apply(CMatrix::Identity(d, d)));
}

LindbladGenerator pauli_model(std::size_t n) {
  if (n == 0) throw std::invalid_argument("pauli_model: need at least one qubit");
  const auto dims = SystemDims::qubits(n);
  std::vector<CMatrix> v;
  for (std::size_t j = 0; j < n; ++j) {
    v.push_back(embed_local(pauli::X(), j, dims));
    v.push_back(embed_local(pauli::Y(), j, dims));
  }
  return LindbladGenerator(dims, CMatrix(), std::move(v));
}

LindbladGenerator amplitude_damping_model(std::size_t n, double rate) {
  if (n == 0) throw std::invalid_argument("amplitude_damping_model: need at least one qubit");
  if (!(rate > 0.0)) throw std::invalid_argument("amplitude_damping_model: rate must be positive");
  const auto dims = SystemDims::qubits(n);
  std::vector<CMatrix> v;
  for (std::size_t j = 0; j < n; ++j)
    v.push_back(std::sqrt(rate) * embed_local(pauli::lower(), j, dims));
  return LindbladGenerator(dims, CMatrix(), std::move(v));
}

}  // namespace simcost
