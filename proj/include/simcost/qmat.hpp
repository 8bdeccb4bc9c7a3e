#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace simcost {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kStructTol = 1e-9;
inline constexpr double kAlgebraTol = 1e-10;

// Ordered local dimensions of a composite system.
struct SystemDims {
  std::vector<std::size_t> factors;

  SystemDims() = default;
  explicit SystemDims(std::vector<std::size_t> f);
  static SystemDims qubits(std::size_t n);

  std::size_t total() const;
  std::size_t size() const { return factors.size(); }
};

// Linear map B(C^din) -> B(C^dout) acting on column-stacked operators.
// The matrix is dout^2 x din^2; vec(AXB) = (B^T kron A) vec(X).
struct SuperOperator {
  std::size_t din = 0;
  std::size_t dout = 0;
  CMatrix matrix;

  SuperOperator() = default;
  SuperOperator(std::size_t d, CMatrix m);
  SuperOperator(std::size_t din_, std::size_t dout_, CMatrix m);

  std::size_t dim() const { return din; }
  bool square() const { return din == dout; }

  CMatrix apply(const CMatrix& x) const;

  static SuperOperator identity(std::size_t d);
  static SuperOperator zero(std::size_t d);
};

SuperOperator operator*(const SuperOperator& a, const SuperOperator& b);  // a after b
SuperOperator operator+(const SuperOperator& a, const SuperOperator& b);
SuperOperator operator-(const SuperOperator& a, const SuperOperator& b);
SuperOperator operator*(cplx c, const SuperOperator& a);

// Choi matrix on H_in (x) H_out:  J = sum_ij |i><j| (x) Phi(|i><j|).
struct ChoiMatrix {
  std::size_t din = 0;
  std::size_t dout = 0;
  CMatrix matrix;
};

struct KrausSet {
  std::vector<CMatrix> operators;
};

namespace pauli {
CMatrix I();
CMatrix X();
CMatrix Y();
CMatrix Z();
CMatrix lower();  // |0><1|
CMatrix raise();  // |1><0|
}  // namespace pauli

CMatrix tensor(const CMatrix& a, const CMatrix& b);
CMatrix tensor(const std::vector<CMatrix>& ops);
CMatrix embed_local(const CMatrix& op, std::size_t site, const SystemDims& dims);
CMatrix partial_trace(const CMatrix& m, const SystemDims& dims,
                      const std::vector<std::size_t>& keep);
CMatrix matrix_exp(const CMatrix& a);

double op_norm(const CMatrix& a);
double trace_norm(const CMatrix& a);
CMatrix commutator(const CMatrix& a, const CMatrix& b);
bool is_hermitian(const CMatrix& a, double tol = kAlgebraTol);
CMatrix hermitian_part(const CMatrix& a);

CVector vectorize(const CMatrix& a);
CMatrix devectorize(const CVector& v, std::size_t rows, std::size_t cols);
CMatrix devectorize(const CVector& v);  // square

SuperOperator superop_from_kraus(const KrausSet& k);
SuperOperator conjugation(const CMatrix& u);  // ad_U(x) = U x U^dagger
SuperOperator left_right(const CMatrix& a, const CMatrix& b);  // x -> a x b
ChoiMatrix choi_from_superop(const SuperOperator& s);
SuperOperator superop_from_choi(const ChoiMatrix& c);
SuperOperator adjoint_map(const SuperOperator& s);
KrausSet kraus_from_choi(const ChoiMatrix& c, double tol = kStructTol);

// id_k (x) s and s (x) id_k, with the factor ordering as written.
SuperOperator superop_tensor(const SuperOperator& a, const SuperOperator& b);

// Structural checks on channels.
double cp_violation(const SuperOperator& s);  // max(0, -lambda_min(Choi))
double tp_violation(const SuperOperator& s);  // ||Tr_out J - I||_F
CMatrix trace_output(const CMatrix& j, std::size_t din, std::size_t dout);
bool is_channel(const SuperOperator& s, double tol = kStructTol);

// Operator x on H_in (x) H_ref mapped through (s (x) id_ref).
CMatrix apply_tensor_id(const SuperOperator& s, const CMatrix& x, std::size_t dref);

}  // namespace simcost
