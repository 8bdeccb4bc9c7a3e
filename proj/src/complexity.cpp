#include "simcost/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace simcost {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TopSingular {
  double value = 0.0;
  CVector u, v;
};

TopSingular top_singular(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.singularValues()(0), svd.matrixU().col(0), svd.matrixV().col(0)};
}

CMatrix random_gaussian(std::size_t d, std::mt19937_64& rng, bool hermitian) {
  std::normal_distribution<double> g;
  CMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
  return hermitian ? hermitian_part(m) : m;
}

double hs(const CMatrix& a, const CMatrix& b) { return (a.adjoint() * b).trace().real(); }

CMatrix project_off(const CMatrix& x, const std::vector<CMatrix>& basis) {
  CMatrix y = x;
  for (const auto& b : basis) y -= (b.adjoint() * x).trace() * b;
  return y;
}

bool contains_up_to_sign(const ResourceSet& s, const CMatrix& g, double tol = 1e-12) {
  for (const auto& m : s.members) {
    if (m.rows() != g.rows()) continue;
    if ((m - g).cwiseAbs().maxCoeff() <= tol || (m + g).cwiseAbs().maxCoeff() <= tol) return true;
  }
  return false;
}

std::vector<CMatrix> sample_gates(const GateSet& u) {
  std::vector<CMatrix> out;
  for (const auto& h : u.generators)
    for (double f : {1.0, -1.0, 1.0 / 3.0}) out.push_back(matrix_exp(cplx(0, f * u.tau) * h));
  for (const auto& w : u.unitaries) out.push_back(w);
  return out;
}

KrausWord word_product(const KrausWord& a, const KrausWord& b) {
  KrausWord out;
  for (const auto& p : a)
    for (const auto& q : b) {
      KrausTerm t{p.coef * q.coef, p.letters};
      t.letters.insert(t.letters.end(), q.letters.begin(), q.letters.end());
      out.push_back(std::move(t));
    }
  return out;
}

KrausWord scaled(cplx c, KrausWord w) {
  for (auto& t : w) t.coef *= c;
  return w;
}

KrausWord concat(KrausWord a, const KrausWord& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

ResourceSet::ResourceSet(std::size_t d, std::vector<CMatrix> m) : dim(d), members(std::move(m)) {
  for (const auto& s : members)
    if (s.rows() != Eigen::Index(dim) || s.cols() != Eigen::Index(dim))
      throw std::invalid_argument("ResourceSet: member dimension mismatch");
}

bool ResourceSet::star_closed(double tol) const {
  for (const auto& s : members) {
    const CMatrix sd = s.adjoint();
    bool found = false;
    for (const auto& t : members)
      if ((t - sd).cwiseAbs().maxCoeff() <= tol) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

ResourceSet ResourceSet::amplified(std::size_t n) const {
  std::vector<CMatrix> m;
  for (const auto& s : members) m.push_back(tensor(CMatrix::Identity(n, n), s));
  return ResourceSet(n * dim, std::move(m));
}

ResourceSet pauli_resources(std::size_t n) {
  const auto dims = SystemDims::qubits(n);
  std::vector<CMatrix> m;
  for (std::size_t j = 0; j < n; ++j) {
    m.push_back(embed_local(pauli::X(), j, dims));
    m.push_back(embed_local(pauli::Y(), j, dims));
  }
  return ResourceSet(dims.total(), std::move(m));
}

ResourceSet environment_resources(std::size_t n) {
  return ResourceSet(std::size_t{2} << n, environment_pauli_resources(n));
}

double lipschitz_seminorm(const CMatrix& x, const ResourceSet& s) {
  if (s.members.empty()) throw std::invalid_argument("lipschitz_seminorm: empty resource set");
  if (x.rows() != Eigen::Index(s.dim) || x.cols() != Eigen::Index(s.dim))
    throw std::invalid_argument("lipschitz_seminorm: dimension mismatch");
  double best = 0.0;
  for (const auto& m : s.members) best = std::max(best, op_norm(commutator(m, x)));
  return best;
}

Commutant commutant(const ResourceSet& s, double tol) {
  const std::size_t d = s.dim, d2 = d * d;
  Commutant c;
  c.dim = d;
  CMatrix gram = CMatrix::Zero(d2, d2);
  const CMatrix id = CMatrix::Identity(d, d);
  for (const auto& m : s.members) {
    // vec(mx - xm) = (I (x) m - m^T (x) I) vec(x)
    const CMatrix cm = tensor(id, m) - tensor(m.transpose(), id);
    gram += cm.adjoint() * cm;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k) <= tol * scale) keep.push_back(k);
  CMatrix v(d2, keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    v.col(k) = es.eigenvectors().col(keep[k]);
    c.basis.push_back(devectorize(v.col(k), d, d));
  }
  c.projector = v * v.adjoint();
  return c;
}

double algebra_residual(const std::vector<CMatrix>& basis, int pairs, std::uint64_t seed) {
  if (basis.empty()) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  auto combo = [&] {
    CMatrix x = CMatrix::Zero(basis[0].rows(), basis[0].cols());
    for (const auto& b : basis) x += cplx(g(rng), g(rng)) * b;
    return CMatrix(x / x.norm());
  };
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const CMatrix a = combo(), b = combo();
    worst = std::max(worst, project_off(a * b, basis).norm());
    worst = std::max(worst, project_off(a.adjoint(), basis).norm());
  }
  return worst;
}

CondExpectation conditional_expectation(const Commutant& c, double tol) {
  const double res = algebra_residual(c.basis);
  if (res > std::max(tol, 1e-8))
    throw std::runtime_error("conditional_expectation: commutant fails the algebra closure check (residual " +
                             std::to_string(res) + ")");
  CondExpectation e;
  e.map = SuperOperator(c.dim, c.projector);
  e.range_basis = c.basis;
  e.trace_preserving = true;
  return e;
}

CondExpectation fixed_point_expectation(const LindbladGenerator& g, double tol) {
  const std::size_t d = g.dim();
  const CMatrix m = adjoint_map(generator_superop(g)).matrix;
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv(0));
  std::vector<Eigen::Index> null;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) <= tol * scale) null.push_back(k);
  if (null.empty()) throw std::runtime_error("fixed_point_expectation: generator has no fixed points");
  CMatrix v(d * d, null.size()), w(d * d, null.size());
  for (std::size_t k = 0; k < null.size(); ++k) {
    v.col(k) = svd.matrixV().col(null[k]);
    w.col(k) = svd.matrixU().col(null[k]);
  }
  const CMatrix wv = w.adjoint() * v;
  Eigen::FullPivLU<CMatrix> lu(wv);
  if (!lu.isInvertible()) throw std::runtime_error("fixed_point_expectation: zero eigenvalue is not semisimple");
  CondExpectation e;
  e.map = SuperOperator(d, v * lu.solve(w.adjoint()));
  for (std::size_t k = 0; k < null.size(); ++k) e.range_basis.push_back(devectorize(v.col(k), d, d));
  const CVector vi = vectorize(CMatrix::Identity(d, d));
  e.trace_preserving = (vi.adjoint() * e.map.matrix - vi.adjoint()).cwiseAbs().maxCoeff() <= 1e-9;
  return e;
}

bool ExpectationCheck::ok(double tol) const {
  return idempotence <= tol && unitality <= tol && module_property <= tol && self_adjointness <= tol;
}

ExpectationCheck check_expectation(const CondExpectation& e, int samples, std::uint64_t seed) {
  const std::size_t d = e.map.din;
  ExpectationCheck r;
  r.idempotence = (e.map.matrix * e.map.matrix - e.map.matrix).cwiseAbs().maxCoeff();
  const CMatrix id = CMatrix::Identity(d, d);
  r.unitality = (e.map.apply(id) - id).cwiseAbs().maxCoeff();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  auto in_range = [&] {
    CMatrix x = CMatrix::Zero(d, d);
    for (const auto& b : e.range_basis) x += cplx(g(rng), g(rng)) * b;
    return x;
  };
  for (int k = 0; k < samples; ++k) {
    const CMatrix x = random_gaussian(d, rng, false), y = random_gaussian(d, rng, false);
    const CMatrix s1 = in_range(), s2 = in_range();
    r.module_property = std::max(
        r.module_property, (e.map.apply(s1 * x * s2) - s1 * e.map.apply(x) * s2).cwiseAbs().maxCoeff());
    if (e.trace_preserving)
      r.self_adjointness = std::max(
          r.self_adjointness, std::abs((e.map.apply(x) * y).trace() - (x * e.map.apply(y)).trace()));
  }
  return r;
}

LipschitzProblem plain_problem(const SuperOperator& phi, const ResourceSet& s) {
  if (!phi.square() || phi.din != s.dim) throw std::invalid_argument("plain_problem: dimension mismatch");
  LipschitzProblem p;
  p.psi = adjoint_map(phi) - SuperOperator::identity(phi.din);
  p.resources = s;
  p.commutant_basis = commutant(s).basis;
  return p;
}

LipschitzProblem env_problem(const SuperOperator& phi, const ResourceSet& s_ae, std::size_t ancilla_dim) {
  const std::size_t d = phi.din;
  if (!phi.square() || d * ancilla_dim != s_ae.dim) throw std::invalid_argument("env_problem: dimension mismatch");
  const SuperOperator enc = encode_superop(d, ancilla_dim), dec = decode_superop(d, ancilla_dim);
  if ((dec * enc).matrix.isApprox(SuperOperator::identity(d).matrix, 1e-12) == false)
    throw std::runtime_error("env_problem: decode o encode is not the identity");
  LipschitzProblem p;
  p.psi = adjoint_map(dec) * (adjoint_map(phi) - SuperOperator::identity(d)) * adjoint_map(enc);
  p.resources = s_ae;
  p.commutant_basis = commutant(s_ae).basis;
  return p;
}

LipschitzProblem amplify(const LipschitzProblem& p, std::size_t n) {
  if (n <= 1) return p;
  LipschitzProblem a;
  a.psi = superop_tensor(SuperOperator::identity(n), p.psi);
  a.resources = p.resources.amplified(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      CMatrix e = CMatrix::Zero(n, n);
      e(i, j) = 1.0;
      for (const auto& b : p.commutant_basis) a.commutant_basis.push_back(tensor(e, b));
    }
  return a;
}

double complexity_ratio(const LipschitzProblem& p, const CMatrix& x, double floor) {
  const double den = lipschitz_seminorm(x, p.resources);
  if (!(den > floor * x.norm())) return 0.0;
  return op_norm(p.psi.apply(x)) / den;
}

double complexity_lower(const LipschitzProblem& p, const std::vector<CMatrix>& certificates) {
  double best = 0.0;
  bool any = false;
  for (const auto& x : certificates) {
    if (!(lipschitz_seminorm(x, p.resources) > 1e-8 * x.norm())) continue;
    any = true;
    best = std::max(best, complexity_ratio(p, x));
  }
  if (!any) throw std::invalid_argument("complexity_lower: every certificate has zero seminorm");
  return best;
}

double complexity_lower(const SuperOperator& phi, const ResourceSet& s, const std::vector<CMatrix>& certificates) {
  return complexity_lower(plain_problem(phi, s), certificates);
}

SearchResult complexity_search(const LipschitzProblem& base, const SearchOptions& opt) {
  const LipschitzProblem p = amplify(base, opt.amplification);
  const std::size_t d = p.resources.dim;
  SearchResult res;
  res.witness = CMatrix::Zero(d, d);
  for (const auto& b : p.commutant_basis)
    if (op_norm(p.psi.apply(b)) > 1e-9) {
      res.unbounded = true;
      res.lower = kInf;
      res.witness = b;
      return res;
    }
  if (p.resources.members.empty()) return res;
  const CMatrix psi_adj = p.psi.matrix.adjoint();

  // value and ascent direction of ||Psi(x)|| / |||x|||
  auto eval = [&](const CMatrix& x, CMatrix* grad) {
    double den = 0.0;
    std::size_t active = 0;
    TopSingular ds;
    for (std::size_t k = 0; k < p.resources.members.size(); ++k) {
      const TopSingular t = top_singular(commutator(p.resources.members[k], x));
      if (t.value > den) {
        den = t.value;
        active = k;
        ds = t;
      }
    }
    if (!(den > 1e-8 * x.norm())) return 0.0;
    const TopSingular ns = top_singular(p.psi.apply(x));
    const double f = ns.value / den;
    if (grad) {
      const CMatrix yn = ns.u * ns.v.adjoint();
      const CMatrix gn = devectorize(psi_adj * vectorize(yn), d, d);
      const CMatrix& s = p.resources.members[active];
      const CMatrix yd = ds.u * ds.v.adjoint();
      const CMatrix gd = s.adjoint() * yd - yd * s.adjoint();
      *grad = (gn - f * gd) / den;
    }
    return f;
  };
  auto normalize = [&](CMatrix x) {
    x = project_off(x, p.commutant_basis);
    if (opt.hermitian) x = hermitian_part(x);
    const double nx = x.norm();
    return nx > 0 ? CMatrix(x / nx) : x;
  };

  std::vector<CMatrix> starts;
  for (const auto& s : opt.seeds) {
    CMatrix x = s;
    if (std::size_t(x.rows()) * opt.amplification == d && opt.amplification > 1)
      x = tensor(CMatrix::Identity(opt.amplification, opt.amplification), s);
    if (std::size_t(x.rows()) == d) starts.push_back(x);
  }
  {
    // leading right singular vectors of Psi off the commutant
    Eigen::JacobiSVD<CMatrix> svd(p.psi.matrix, Eigen::ComputeFullV);
    const Eigen::Index top = std::min<Eigen::Index>(4, svd.matrixV().cols());
    for (Eigen::Index k = 0; k < top; ++k) {
      const CMatrix v = devectorize(svd.matrixV().col(k), d, d);
      starts.push_back(v);
      if (opt.hermitian) starts.push_back(cplx(0, 1) * v);
    }
  }
  std::mt19937_64 rng(opt.seed);
  for (int r = 0; r < opt.restarts; ++r) starts.push_back(random_gaussian(d, rng, opt.hermitian));

  for (const auto& s0 : starts) {
    CMatrix x = normalize(s0);
    if (x.norm() == 0.0) continue;
    CMatrix g;
    double f = eval(x, &g);
    if (f > res.lower) {
      res.lower = f;
      res.witness = x;
    }
    double step = 0.3;
    for (int it = 0; it < opt.iterations && step > 1e-9; ++it) {
      CMatrix dir = project_off(g, p.commutant_basis);
      if (opt.hermitian) dir = hermitian_part(dir);
      const double nd = dir.norm();
      if (!(nd > 1e-14)) break;
      const CMatrix xn = normalize(x + (step / nd) * dir);
      CMatrix gn;
      const double fn = eval(xn, &gn);
      if (fn > f) {
        x = xn;
        f = fn;
        g = gn;
        step = std::min(1.0, step * 1.5);
      } else {
        step *= 0.5;
      }
    }
    // certified value re-evaluated from the witness
    const double fc = complexity_ratio(p, x);
    if (fc > res.lower) {
      res.lower = fc;
      res.witness = x;
    }
  }
  return res;
}

CMatrix hint_operator(const KrausWord& w, const ResourceSet& s) {
  CMatrix k = CMatrix::Zero(s.dim, s.dim);
  for (const auto& t : w) {
    CMatrix prod = CMatrix::Identity(s.dim, s.dim);
    for (std::size_t l : t.letters) {
      if (l >= s.members.size()) throw std::out_of_range("hint_operator: letter out of range");
      prod = prod * s.members[l];
    }
    k += t.coef * prod;
  }
  return k;
}

double hint_residual(const KrausHint& h, const ResourceSet& s, const SuperOperator& phi, std::size_t ancilla_dim) {
  const std::size_t d = s.dim / ancilla_dim;
  if (d * ancilla_dim != s.dim || phi.din != d || !phi.square())
    throw std::invalid_argument("hint_residual: dimension mismatch");
  double form = 0.0;
  SuperOperator rebuilt = SuperOperator::identity(d);
  for (const auto& stage : h.stages) {
    KrausSet ks;
    for (const auto& w : stage) {
      const CMatrix k = hint_operator(w, s);
      CMatrix ka(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) ka(i, j) = k(i * ancilla_dim, j * ancilla_dim);
      if (ancilla_dim > 1)
        form = std::max(form, (k - tensor(ka, CMatrix::Identity(ancilla_dim, ancilla_dim))).cwiseAbs().maxCoeff());
      ks.operators.push_back(ka);
    }
    rebuilt = superop_from_kraus(ks) * rebuilt;
  }
  return std::max(form, (rebuilt.matrix - phi.matrix).cwiseAbs().maxCoeff());
}

double complexity_upper_kraus(const SuperOperator& phi, const ResourceSet& s, const KrausHint& h,
                              std::size_t ancilla_dim) {
  const double res = hint_residual(h, s, phi, ancilla_dim);
  if (res > 1e-9)
    throw std::invalid_argument("complexity_upper_kraus: hint does not reproduce the channel (residual " +
                                std::to_string(res) + ")");
  std::vector<double> norms;
  for (const auto& m : s.members) norms.push_back(op_norm(m));
  // Phi* - id = sum_stages (earlier stages)* o sum_i K_i^dag [., K_i]; [x, s_1...s_k] expands by Leibniz
  double total = 0.0;
  for (const auto& stage : h.stages)
    for (const auto& w : stage) {
      double comm = 0.0;
      for (const auto& t : w) {
        double lets = 0.0;
        for (std::size_t l = 0; l < t.letters.size(); ++l) {
          double prod = 1.0;
          for (std::size_t m = 0; m < t.letters.size(); ++m)
            if (m != l) prod *= norms[t.letters[m]];
          lets += prod;
        }
        comm += std::abs(t.coef) * lets;
      }
      total += op_norm(hint_operator(w, s)) * comm;
    }
  return total;
}

KrausStage qubit_replacer_stage(QubitReplacer kind, const KrausWord& x_word, const KrausWord& y_word) {
  const KrausWord id{KrausTerm{}};
  // Z = -i X Y
  const KrausWord z = scaled(cplx(0, -1), word_product(x_word, y_word));
  if (kind == QubitReplacer::MaximallyMixed)
    return {scaled(0.5, id), scaled(0.5, x_word), scaled(0.5, y_word), scaled(0.5, z)};
  // |0><0| = (I + Z)/2, |0><1| = (X + iY)/2
  return {scaled(0.5, concat(id, z)), scaled(0.5, concat(x_word, scaled(cplx(0, 1), y_word)))};
}

KrausStage mixed_word_stage(const std::vector<double>& probs, const std::vector<std::vector<std::size_t>>& words) {
  if (probs.size() != words.size()) throw std::invalid_argument("mixed_word_stage: length mismatch");
  KrausStage st;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] < 0.0) throw std::invalid_argument("mixed_word_stage: negative probability");
    st.push_back({KrausTerm{std::sqrt(probs[k]), words[k]}});
  }
  return st;
}

namespace {

KrausHint pauli_hint(QubitReplacer kind, std::size_t n) {
  KrausHint h;
  for (std::size_t j = 0; j < n; ++j)
    h.stages.push_back(qubit_replacer_stage(kind, {KrausTerm{1.0, {2 * j}}}, {KrausTerm{1.0, {2 * j + 1}}}));
  return h;
}

}  // namespace

KrausHint pauli_mixed_replacer_hint(std::size_t n) { return pauli_hint(QubitReplacer::MaximallyMixed, n); }
KrausHint pauli_ground_replacer_hint(std::size_t n) { return pauli_hint(QubitReplacer::Ground, n); }

KrausHint environment_replacer_hint(QubitReplacer kind, std::size_t n) {
  // X_j (x) I = (X_j (x) Y_E)(I (x) Y_E),  Y_j (x) I = (Y_j (x) X_E)(I (x) X_E)
  KrausHint h;
  for (std::size_t j = 0; j < n; ++j)
    h.stages.push_back(
        qubit_replacer_stage(kind, {KrausTerm{1.0, {2 + 2 * j, 1}}}, {KrausTerm{1.0, {3 + 2 * j, 0}}}));
  return h;
}

KappaBounds kappa(const LipschitzProblem& fixed_problem, const std::vector<CMatrix>& certificates,
                  const SearchOptions& opt, const std::optional<double>& kraus_upper) {
  KappaBounds k;
  if (!certificates.empty()) k.lower = complexity_lower(fixed_problem, certificates);
  if (opt.restarts > 0 || !opt.seeds.empty()) {
    SearchOptions o = opt;
    o.seeds.insert(o.seeds.end(), certificates.begin(), certificates.end());
    const SearchResult sr = complexity_search(fixed_problem, o);
    if (sr.lower > k.lower) {
      k.lower = sr.lower;
      k.witness = sr.witness;
    }
  }
  if (kraus_upper) {
    k.upper = *kraus_upper;
    k.upper_method = "kraus";
  } else {
    k.upper = kInf;
    k.upper_method = "unavailable";
  }
  return k;
}

CompatibilityResult compatibility_D(const GateSet& u, const ResourceSet& s) {
  CompatibilityResult r;
  bool all_in = u.unitaries.empty();
  for (const auto& g : u.generators) all_in = all_in && contains_up_to_sign(s, g);
  if (all_in) {
    r.value = u.tau;
    r.analytic = true;
    r.note = "generators belong to the resource set";
    return r;
  }
  SearchOptions o;
  o.restarts = 8;
  o.iterations = 200;
  for (const auto& w : sample_gates(u))
    r.value = std::max(r.value, complexity_search(plain_problem(conjugation(w), s), o).lower);
  r.note = "generators outside the resource set; value is a search estimate over sampled gates";
  return r;
}

CompatibilityResult compatibility_D_env(const GateSet& u, const ResourceSet& s_ae, std::size_t ancilla_dim) {
  CompatibilityResult r;
  const std::size_t d = s_ae.dim / ancilla_dim;
  bool all_in = u.unitaries.empty() && ancilla_dim == 2;
  for (const auto& g : u.generators) all_in = all_in && contains_up_to_sign(s_ae, g);
  if (all_in) {
    all_in = contains_up_to_sign(s_ae, tensor(CMatrix::Identity(d, d), pauli::X())) &&
             contains_up_to_sign(s_ae, tensor(CMatrix::Identity(d, d), pauli::Y()));
  }
  if (all_in) {
    r.value = u.tau + 6.0;
    r.analytic = true;
    r.note = "generators and ancilla Paulis belong to the resource set";
    return r;
  }
  SearchOptions o;
  o.restarts = 8;
  o.iterations = 200;
  const SuperOperator enc = encode_superop(d, ancilla_dim), dec = decode_superop(d, ancilla_dim);
  for (const auto& w : sample_gates(u))
    r.value = std::max(r.value,
                       complexity_search(env_problem(dec * conjugation(w) * enc, s_ae, ancilla_dim), o).lower);
  r.note = "family outside the analytic case; value is a search estimate over sampled gates";
  return r;
}

bool AssumptionReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const AssumptionResult& r) { return r.pass; });
}

AssumptionReport assumption_check(const AssumptionInputs& in) {
  if (!in.gates || !in.resources || !in.e_fix) throw std::invalid_argument("assumption_check: missing input");
  const GateSet& u = *in.gates;
  const ResourceSet& s = *in.resources;
  const CondExpectation& e = *in.e_fix;
  const std::size_t k = in.ancilla_dim;
  AssumptionReport rep;

  double star = 0.0;
  for (const auto& m : s.members) {
    double best = kInf;
    for (const auto& t : s.members) best = std::min(best, (t - m.adjoint()).cwiseAbs().maxCoeff());
    star = std::max(star, best);
  }
  rep.results.push_back({"A", star <= 1e-12, star, "resource set closed under adjoint"});

  const auto gates = sample_gates(u);
  if (k == 1) {
    double b = 0.0;
    for (const auto& w : gates) b = std::max(b, (e.map * conjugation(w) - e.map).matrix.cwiseAbs().maxCoeff());
    rep.results.push_back({"B", b <= in.tol, b, "E_fix o ad_u = E_fix on sampled gates"});
    const auto c = compatibility_D(u, s);
    rep.results.push_back({"C", c.analytic, 0.0, c.note + "; D = " + std::to_string(c.value)});
  } else {
    const std::size_t d = s.dim / k;
    const SuperOperator enc = encode_superop(d, k), dec = decode_superop(d, k);
    const double o = (dec * enc - SuperOperator::identity(d)).matrix.cwiseAbs().maxCoeff();
    rep.results.push_back({"O", o <= in.tol, o, "decode o encode = id"});
    double b = 0.0;
    for (const auto& w : gates)
      b = std::max(b, (adjoint_map(dec * conjugation(w) * enc) * e.map - e.map).matrix.cwiseAbs().maxCoeff());
    rep.results.push_back({"B'", b <= in.tol, b, "(D o ad_u o E)* o E_fix = E_fix on sampled gates"});
    const auto c = compatibility_D_env(u, s, k);
    rep.results.push_back({"C'", c.analytic, 0.0, c.note + "; D = " + std::to_string(c.value)});
  }
  return rep;
}

std::optional<double> diamond_mixing_time(const Semigroup& sg, const CondExpectation& e_fix, double eps,
                                          double t_max, double tol) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("diamond_mixing_time: eps must lie in (0,1)");
  const SuperOperator limit = adjoint_map(e_fix.map);
  auto dist = [&](double t) { return diamond_distance(evolve(sg, t), limit); };
  if (dist(t_max) > eps) return std::nullopt;
  if (dist(0.0) <= eps) return 0.0;
  double lo = 0.0, hi = t_max;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (dist(mid) <= eps ? hi : lo) = mid;
  }
  return hi;
}

MixingResult mixing_time(const Semigroup& sg, const ResourceSet& s, double kappa_upper, double eps,
                         const std::vector<CMatrix>& certificates, const MixingOptions& opt) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("mixing_time: eps must lie in (0,1)");
  const std::size_t k = opt.ancilla_dim, d = sg.dim();
  if (d * k != s.dim) throw std::invalid_argument("mixing_time: resource set dimension mismatch");
  MixingResult r;
  r.epsilon = eps;
  r.threshold = (1.0 - eps) * kappa_upper;
  r.t = kInf;
  if (!(r.threshold > 0.0)) {
    r.t = 0.0;
    r.certified = true;
    r.method = "trivial";
    return r;
  }
  const SuperOperator lstar = adjoint_map(sg.superop_L());
  const SuperOperator estar = adjoint_map(encode_superop(d, k));
  std::vector<CMatrix> generic;
  for (const auto& x : certificates) {
    const double semi = lipschitz_seminorm(x, s);
    if (!(semi > 1e-12)) continue;
    const CMatrix y = k == 1 ? x : estar.apply(x);
    const CMatrix ly = lstar.apply(y);
    const double yy = y.squaredNorm();
    if (yy == 0.0) continue;
    const double rate = -hs(y, ly) / yy;
    if ((ly + rate * y).norm() <= 1e-10 * (1.0 + ly.norm()) && rate > 0.0) {
      // ratio(t) = (1 - e^{-rate t}) ||y|| / |||x|||
      const double reach = r.threshold * semi / op_norm(y);
      if (reach < 1.0) {
        const double t = -std::log1p(-reach) / rate;
        if (t < r.t) {
          r.t = t;
          r.method = "analytic";
        }
      }
    } else {
      generic.push_back(x);
    }
  }
  if (!generic.empty()) {
    auto curve = [&](double t) {
      const SuperOperator tt = evolve(sg, t);
      const LipschitzProblem p = k == 1 ? plain_problem(tt, s) : env_problem(tt, s, k);
      double best = 0.0;
      for (const auto& x : generic) best = std::max(best, complexity_ratio(p, x));
      return best;
    };
    const double lmin = std::log(opt.t_min), lmax = std::log(opt.t_max);
    double prev = 0.0;
    for (int i = 0; i < opt.grid; ++i) {
      const double t = std::exp(lmin + (lmax - lmin) * i / (opt.grid - 1));
      if (t >= r.t) break;
      if (curve(t) >= r.threshold) {
        double lo = prev, hi = t;
        while (hi - lo > opt.bisection_tol) {
          const double mid = 0.5 * (lo + hi);
          (curve(mid) >= r.threshold ? hi : lo) = mid;
        }
        r.t = hi;
        r.method = "grid";
        break;
      }
      prev = t;
    }
  }
  r.certified = std::isfinite(r.t);
  if (opt.diamond_fallback && d <= 4) {
    r.diamond_time = diamond_mixing_time(sg, fixed_point_expectation(sg.generator()), eps, opt.t_max);
    if (!r.certified && r.diamond_time) {
      r.t = *r.diamond_time;
      r.certified = true;
      r.method = "diamond";
    }
  }
  return r;
}

void BoundParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("bound: alpha must be positive");
  if (!(beta > 1.0)) throw std::invalid_argument("bound: beta must exceed 1");
  if (beta < 1.01) throw std::invalid_argument("bound: beta below 1.01 is outside the supported range");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("bound: epsilon must lie in (0,1)");
  if (!(tau > 0.0)) throw std::invalid_argument("bound: tau must be positive");
  if (!(D > 0.0)) throw std::invalid_argument("bound: D must be positive");
}

double c_alpha_beta(double alpha, double beta, double eps, double t_mix) {
  BoundParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.epsilon = eps;
  p.validate();
  if (!(t_mix >= 0.0)) throw std::invalid_argument("bound: mixing time must be non-negative");
  const long double cap = (1.0L - eps) / 2.0L;
  if (t_mix == 0.0) return double(cap);
  const long double b = beta;
  const long double first = std::pow((long double)alpha, -1.0L / (b - 1.0L)) *
                            std::pow((1.0L - eps) / (3.0L * t_mix), b / (b - 1.0L));
  return double(std::min(first, cap));
}

double lower_bound_M(const BoundParams& p, double kappa_lower, double t_mix) {
  p.validate();
  return c_alpha_beta(p.alpha, p.beta, p.epsilon, t_mix) * kappa_lower / p.D;
}

double env_lower_bound(const BoundParams& p, double kappa_hat_lower, double t_mix_hat) {
  return lower_bound_M(p, kappa_hat_lower, t_mix_hat);
}

FixedTimeBound lower_bound_fixed_time(double tau_target, const BoundParams& p, double kappa_lower, double t_mix) {
  p.validate();
  FixedTimeBound b;
  const double lhs = t_mix * p.alpha * std::pow(tau_target, p.beta - 1.0);
  if (lhs < 0.125) {
    b.applicable = true;
    b.value = tau_target * kappa_lower / (8.0 * p.D * t_mix);
  } else {
    b.reason = "t_mix alpha tau^(beta-1) = " + std::to_string(lhs) + " is not below 1/8";
  }
  return b;
}

FixedTimeBound lower_bound_fixed_precision(double t, double delta, const BoundParams& p, double kappa_lower,
                                           double t_mix) {
  p.validate();
  FixedTimeBound b;
  if (t > 8.0 * delta * t_mix) {
    b.applicable = true;
    b.value = t * kappa_lower / (8.0 * p.D * t_mix);
  } else {
    b.reason = "t = " + std::to_string(t) + " does not exceed 8 delta t_mix = " + std::to_string(8.0 * delta * t_mix);
  }
  return b;
}

double pauli_lower_bound_closed_form(double alpha, double beta, std::size_t n, double tau) {
  const long double b = beta;
  const long double first = std::pow((long double)alpha, -1.0L / (b - 1.0L)) *
                            std::pow(1.0L / (6.0L * std::log(2.0L)), b / (b - 1.0L));
  return double((long double)n / tau * 0.5L * std::min(first, 0.125L));
}

}  // namespace simcost
