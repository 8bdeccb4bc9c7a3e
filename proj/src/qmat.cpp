#include "simcost/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace simcost {

SystemDims::SystemDims(std::vector<std::size_t> f) : factors(std::move(f)) {
  for (auto d : factors)
    if (d < 2) throw std::invalid_argument("SystemDims: local dimension must be >= 2");
}

SystemDims SystemDims::qubits(std::size_t n) {
  return SystemDims(std::vector<std::size_t>(n, 2));
}

std::size_t SystemDims::total() const {
  return std::accumulate(factors.begin(), factors.end(), std::size_t{1},
                         std::multiplies<>());
}

SuperOperator::SuperOperator(std::size_t d, CMatrix m) : SuperOperator(d, d, std::move(m)) {}

SuperOperator::SuperOperator(std::size_t din_, std::size_t dout_, CMatrix m)
    : din(din_), dout(dout_), matrix(std::move(m)) {
  if (static_cast<std::size_t>(matrix.cols()) != din * din ||
      static_cast<std::size_t>(matrix.rows()) != dout * dout)
    throw std::invalid_argument("SuperOperator: matrix shape does not match dimensions");
}

CMatrix SuperOperator::apply(const CMatrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != din || static_cast<std::size_t>(x.cols()) != din)
    throw std::invalid_argument("SuperOperator::apply: operand has wrong size");
  return devectorize(matrix * vectorize(x), dout, dout);
}

SuperOperator SuperOperator::identity(std::size_t d) {
  return SuperOperator(d, CMatrix::Identity(d * d, d * d));
}

SuperOperator SuperOperator::zero(std::size_t d) {
  return SuperOperator(d, CMatrix::Zero(d * d, d * d));
}

SuperOperator operator*(const SuperOperator& a, const SuperOperator& b) {
  if (a.din != b.dout) throw std::invalid_argument("SuperOperator composition: dimension mismatch");
  return SuperOperator(b.din, a.dout, a.matrix * b.matrix);
}

SuperOperator operator+(const SuperOperator& a, const SuperOperator& b) {
  if (a.din != b.din || a.dout != b.dout)
    throw std::invalid_argument("SuperOperator sum: dimension mismatch");
  return SuperOperator(a.din, a.dout, a.matrix + b.matrix);
}

SuperOperator operator-(const SuperOperator& a, const SuperOperator& b) {
  if (a.din != b.din || a.dout != b.dout)
    throw std::invalid_argument("SuperOperator difference: dimension mismatch");
  return SuperOperator(a.din, a.dout, a.matrix - b.matrix);
}

SuperOperator operator*(cplx c, const SuperOperator& a) {
  return SuperOperator(a.din, a.dout, c * a.matrix);
}

namespace pauli {
CMatrix I() { return CMatrix::Identity(2, 2); }
CMatrix X() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
CMatrix Y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
CMatrix Z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
CMatrix lower() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}
CMatrix raise() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 0) = 1;
  return m;
}
}  // namespace pauli

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix tensor(const std::vector<CMatrix>& ops) {
  if (ops.empty()) return CMatrix::Identity(1, 1);
  CMatrix out = ops.front();
  for (std::size_t k = 1; k < ops.size(); ++k) out = tensor(out, ops[k]);
  return out;
}

CMatrix embed_local(const CMatrix& op, std::size_t site, const SystemDims& dims) {
  if (site >= dims.size()) throw std::out_of_range("embed_local: site out of range");
  const auto d = static_cast<Eigen::Index>(dims.factors[site]);
  if (op.rows() != d || op.cols() != d)
    throw std::invalid_argument("embed_local: operator does not match local dimension");
  std::size_t left = 1, right = 1;
  for (std::size_t k = 0; k < site; ++k) left *= dims.factors[k];
  for (std::size_t k = site + 1; k < dims.size(); ++k) right *= dims.factors[k];
  return tensor(tensor(CMatrix::Identity(left, left), op), CMatrix::Identity(right, right));
}

CMatrix partial_trace(const CMatrix& m, const SystemDims& dims,
                      const std::vector<std::size_t>& keep) {
  const std::size_t d = dims.total();
  if (static_cast<std::size_t>(m.rows()) != d || static_cast<std::size_t>(m.cols()) != d)
    throw std::invalid_argument("partial_trace: matrix does not match dims");
  const std::size_t nf = dims.size();
  std::vector<bool> kept(nf, false);
  for (auto k : keep) {
    if (k >= nf) throw std::out_of_range("partial_trace: factor index out of range");
    kept[k] = true;
  }
  std::size_t dk = 1;
  for (std::size_t k = 0; k < nf; ++k)
    if (kept[k]) dk *= dims.factors[k];

  // split a flat index into (kept index, traced index)
  std::vector<std::size_t> kidx(d), tidx(d);
  for (std::size_t r = 0; r < d; ++r) {
    std::size_t rem = r, ki = 0, ti = 0, kstride = 1, tstride = 1;
    for (std::size_t k = nf; k-- > 0;) {
      const std::size_t f = dims.factors[k];
      const std::size_t digit = rem % f;
      rem /= f;
      if (kept[k]) {
        ki += digit * kstride;
        kstride *= f;
      } else {
        ti += digit * tstride;
        tstride *= f;
      }
    }
    kidx[r] = ki;
    tidx[r] = ti;
  }
  CMatrix out = CMatrix::Zero(dk, dk);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t r = 0; r < d; ++r)
      if (tidx[r] == tidx[c]) out(kidx[r], kidx[c]) += m(r, c);
  return out;
}

CMatrix matrix_exp(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix_exp: matrix must be square");
  if (a.size() == 0) return a;
  return a.exp();
}

double op_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

double trace_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == a.cols() && is_hermitian(a, 1e-14 * (1.0 + a.cwiseAbs().maxCoeff()))) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues().sum();
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

bool is_hermitian(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

CVector vectorize(const CMatrix& a) {
  return Eigen::Map<const CVector>(a.data(), a.size());  // Eigen storage is column-major
}

CMatrix devectorize(const CVector& v, std::size_t rows, std::size_t cols) {
  if (static_cast<std::size_t>(v.size()) != rows * cols)
    throw std::invalid_argument("devectorize: size mismatch");
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

CMatrix devectorize(const CVector& v) {
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != static_cast<std::size_t>(v.size()))
    throw std::invalid_argument("devectorize: length is not a perfect square");
  return devectorize(v, d, d);
}

SuperOperator left_right(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("left_right: inner dimensions differ");
  return SuperOperator(b.rows(), a.rows(), tensor(b.transpose(), a));
}

SuperOperator conjugation(const CMatrix& u) { return left_right(u, u.adjoint()); }

SuperOperator superop_from_kraus(const KrausSet& k) {
  if (k.operators.empty()) throw std::invalid_argument("superop_from_kraus: empty Kraus set");
  const auto& k0 = k.operators.front();
  CMatrix m = CMatrix::Zero(k0.rows() * k0.rows(), k0.cols() * k0.cols());
  for (const auto& op : k.operators) {
    if (op.rows() != k0.rows() || op.cols() != k0.cols())
      throw std::invalid_argument("superop_from_kraus: inconsistent Kraus shapes");
    m += tensor(op.conjugate(), op);
  }
  return SuperOperator(k0.cols(), k0.rows(), std::move(m));
}

ChoiMatrix choi_from_superop(const SuperOperator& s) {
  const std::size_t di = s.din, dox = s.dout;
  CMatrix j(di * dox, di * dox);
  for (std::size_t i = 0; i < di; ++i)
    for (std::size_t jj = 0; jj < di; ++jj)
      for (std::size_t a = 0; a < dox; ++a)
        for (std::size_t b = 0; b < dox; ++b)
          j(i * dox + a, jj * dox + b) = s.matrix(a + dox * b, i + di * jj);
  return ChoiMatrix{di, dox, std::move(j)};
}

SuperOperator superop_from_choi(const ChoiMatrix& c) {
  const std::size_t di = c.din, dox = c.dout;
  if (static_cast<std::size_t>(c.matrix.rows()) != di * dox)
    throw std::invalid_argument("superop_from_choi: matrix does not match dimensions");
  CMatrix m(dox * dox, di * di);
  for (std::size_t i = 0; i < di; ++i)
    for (std::size_t jj = 0; jj < di; ++jj)
      for (std::size_t a = 0; a < dox; ++a)
        for (std::size_t b = 0; b < dox; ++b)
          m(a + dox * b, i + di * jj) = c.matrix(i * dox + a, jj * dox + b);
  return SuperOperator(di, dox, std::move(m));
}

namespace {
// permutation vec(x) -> vec(x^T) for d x d operators
std::vector<Eigen::Index> transpose_perm(std::size_t d) {
  std::vector<Eigen::Index> p(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) p[i + d * j] = static_cast<Eigen::Index>(j + d * i);
  return p;
}
}  // namespace

SuperOperator adjoint_map(const SuperOperator& s) {
  // Tr(Phi(x) y) = Tr(x Phi*(y))  =>  [Phi*] = P_in [Phi]^T P_out
  const auto pin = transpose_perm(s.din);
  const auto pout = transpose_perm(s.dout);
  CMatrix m(s.din * s.din, s.dout * s.dout);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = s.matrix(pout[c], pin[r]);
  return SuperOperator(s.dout, s.din, std::move(m));
}

KrausSet kraus_from_choi(const ChoiMatrix& c, double tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(c.matrix));
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() < -tol) throw std::invalid_argument("kraus_from_choi: map is not completely positive");
  KrausSet out;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) <= tol) continue;
    CMatrix op(c.dout, c.din);
    const CVector v = std::sqrt(ev(k)) * es.eigenvectors().col(k);
    for (std::size_t i = 0; i < c.din; ++i)
      for (std::size_t a = 0; a < c.dout; ++a) op(a, i) = v(i * c.dout + a);
    out.operators.push_back(std::move(op));
  }
  return out;
}

SuperOperator superop_tensor(const SuperOperator& a, const SuperOperator& b) {
  const std::size_t di = a.din * b.din, dox = a.dout * b.dout;
  CMatrix m(dox * dox, di * di);
  for (std::size_t j = 0; j < a.din; ++j)
    for (std::size_t i = 0; i < a.din; ++i) {
      const CMatrix ax = a.matrix.col(i + a.din * j).reshaped(a.dout, a.dout);
      for (std::size_t l = 0; l < b.din; ++l)
        for (std::size_t k = 0; k < b.din; ++k) {
          const CMatrix bx = b.matrix.col(k + b.din * l).reshaped(b.dout, b.dout);
          const std::size_t r = i * b.din + k, c = j * b.din + l;
          m.col(r + di * c) = tensor(ax, bx).reshaped();
        }
    }
  return SuperOperator(di, dox, std::move(m));
}

double cp_violation(const SuperOperator& s) {
  const auto j = choi_from_superop(s);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(j.matrix), Eigen::EigenvaluesOnly);
  return std::max(0.0, -es.eigenvalues().minCoeff());
}

CMatrix trace_output(const CMatrix& j, std::size_t din, std::size_t dout) {
  if (static_cast<std::size_t>(j.rows()) != din * dout || j.rows() != j.cols())
    throw std::invalid_argument("trace_output: matrix does not match dimensions");
  CMatrix out = CMatrix::Zero(din, din);
  for (std::size_t i = 0; i < din; ++i)
    for (std::size_t k = 0; k < din; ++k)
      for (std::size_t a = 0; a < dout; ++a) out(i, k) += j(i * dout + a, k * dout + a);
  return out;
}

double tp_violation(const SuperOperator& s) {
  const auto j = choi_from_superop(s);
  return (trace_output(j.matrix, s.din, s.dout) - CMatrix::Identity(s.din, s.din)).norm();
}

bool is_channel(const SuperOperator& s, double tol) {
  const auto j = choi_from_superop(s);
  if (!is_hermitian(j.matrix, tol)) return false;
  return cp_violation(s) <= tol && tp_violation(s) <= tol;
}

CMatrix apply_tensor_id(const SuperOperator& s, const CMatrix& x, std::size_t dref) {
  const std::size_t di = s.din, dox = s.dout;
  if (static_cast<std::size_t>(x.rows()) != di * dref || x.rows() != x.cols())
    throw std::invalid_argument("apply_tensor_id: operand has wrong size");
  CMatrix out(dox * dref, dox * dref);
  CMatrix blk(di, di);
  for (std::size_t l = 0; l < dref; ++l)
    for (std::size_t k = 0; k < dref; ++k) {
      for (std::size_t j = 0; j < di; ++j)
        for (std::size_t i = 0; i < di; ++i) blk(i, j) = x(i * dref + k, j * dref + l);
      const CMatrix y = devectorize(s.matrix * vectorize(blk), dox, dox);
      for (std::size_t b = 0; b < dox; ++b)
        for (std::size_t a = 0; a < dox; ++a) out(a * dref + k, b * dref + l) = y(a, b);
    }
  return out;
}

}  // namespace simcost
