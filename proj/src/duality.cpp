#include "duality.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <sstream>

namespace swd {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::equal:
      return "equal";
    case Verdict::lhs_strictly_larger:
      return "lhs_strictly_larger";
    case Verdict::rhs_strictly_larger:
      return "rhs_strictly_larger";
    default:
      return "incomparable";
  }
}

DualityReport compare_as_report(const MatrixAlgebra& lhs, const MatrixAlgebra& rhs,
                                const Tolerance& tol) {
  const SpanComparison cmp = compare_spans(lhs, rhs, tol);
  DualityReport rep;
  rep.lhs_dim = lhs.dim();
  rep.rhs_dim = rhs.dim();
  rep.lhs_in_rhs_residual = cmp.lhs_in_rhs;
  rep.rhs_in_lhs_residual = cmp.rhs_in_lhs;
  rep.max_residual = std::max(cmp.lhs_in_rhs, cmp.rhs_in_lhs);
  rep.mutual_containment = cmp.lhs_in_rhs <= tol.match_eps && cmp.rhs_in_lhs <= tol.match_eps;
  if (cmp.equal) {
    rep.verdict = Verdict::equal;
  } else if (cmp.rhs_in_lhs <= tol.match_eps && lhs.dim() > rhs.dim()) {
    rep.verdict = Verdict::lhs_strictly_larger;
    rep.max_residual = cmp.rhs_in_lhs;
  } else if (cmp.lhs_in_rhs <= tol.match_eps && rhs.dim() > lhs.dim()) {
    rep.verdict = Verdict::rhs_strictly_larger;
    rep.max_residual = cmp.lhs_in_rhs;
  } else {
    rep.verdict = Verdict::incomparable;
  }
  return rep;
}

DualityReport verify_duality(const MatrixAlgebra& a, int n, const Tolerance& tol) {
  tol.validate();
  TensorSpace::make(a.ambient_dim, n);  // enforce the cap early
  const MatrixAlgebra aprime = commutant(a, tol);
  const MatrixAlgebra lhs = commutant(collective_algebra(aprime, n, tol), tol);
  const MatrixAlgebra rhs = joint_algebra(a, n, tol);
  DualityReport rep = compare_as_report(lhs, rhs, tol);
  rep.detail = "lhs=Comm{Q(G_A)}, rhs=Alg{A^n, P(S_n)}";
  return rep;
}

cmat range_isometry(const cmat& projector, const Tolerance& tol) {
  HermEig e = herm_eig(projector, tol);
  int count = 0;
  for (long i = 0; i < e.eigenvalues.size(); ++i)
    if (e.eigenvalues(i) > 0.5) ++count;
  if (count == 0) throw ValidationError("range_isometry: projector has empty range");
  return e.eigenvectors.rightCols(count);
}

namespace {

MatrixAlgebra compressed_algebra(const MatrixAlgebra& alg, const cmat& isom, const Tolerance& tol) {
  const int dd = static_cast<int>(isom.cols());
  std::vector<cmat> comp;
  comp.reserve(alg.dim());
  for (int i = 0; i < alg.dim(); ++i) comp.push_back(isom.adjoint() * alg.element(i) * isom);
  // Compression by an invariant subspace is a *-homomorphism, so the span is
  // already an algebra; closure_algebra re-spans and validates it.
  std::vector<cmat> mults;
  Rng rng(0xc0117e55ull + static_cast<uint64_t>(dd));
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 2; ++t) {
    cmat r = cmat::Zero(dd, dd);
    for (const auto& c : comp) r += cplx(g(rng), g(rng)) * c;
    mults.push_back(r);
  }
  return closure_algebra(comp, mults, dd, tol);
}

}  // namespace

DualityReport verify_restricted_duality(const MatrixAlgebra& a, int n, int sign,
                                        const Tolerance& tol) {
  tol.validate();
  const TensorSpace space = TensorSpace::make(a.ambient_dim, n);
  const SubspaceProjector pi = sym_projector(space, sign);
  if (pi.trace() < 0.5)
    throw ValidationError("verify_restricted_duality: the requested subspace is empty");
  const cmat isom = range_isometry(pi.matrix, tol);

  const MatrixAlgebra aprime = commutant(a, tol);
  const MatrixAlgebra qg = collective_algebra(aprime, n, tol);   // Alg{Q(G_A)}
  const MatrixAlgebra qgp = collective_algebra(a, n, tol);       // Alg{Q(G'_A)}

  const MatrixAlgebra b_g = compressed_algebra(qg, isom, tol);
  const MatrixAlgebra b_gp = compressed_algebra(qgp, isom, tol);

  const MatrixAlgebra comm_g = commutant(b_g, tol);
  const MatrixAlgebra comm_gp = commutant(b_gp, tol);

  DualityReport rep = compare_as_report(b_gp, comm_g, tol);
  const SpanComparison mirror = compare_spans(b_g, comm_gp, tol);
  rep.max_residual = std::max({rep.max_residual, mirror.lhs_in_rhs, mirror.rhs_in_lhs});
  if (!mirror.equal && rep.verdict == Verdict::equal) rep.verdict = Verdict::incomparable;
  std::ostringstream os;
  os << "compressed to " << (sign > 0 ? "symmetric" : "antisymmetric") << " subspace dim "
     << isom.cols() << "; mirror check dims " << b_g.dim() << "/" << comm_gp.dim();
  rep.detail = os.str();
  return rep;
}

namespace {

MatrixAlgebra left_factor_algebra() {
  // End(C^2) (x) I_2 inside End(C^4)
  std::vector<cmat> gens;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cmat e = cmat::Zero(2, 2);
      e(i, j) = 1.0;
      gens.push_back(kron(e, cmat::Identity(2, 2)));
    }
  return generate_algebra(gens, 4, Tolerance{});
}

MatrixAlgebra right_factor_algebra() {
  std::vector<cmat> gens;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cmat e = cmat::Zero(2, 2);
      e(i, j) = 1.0;
      gens.push_back(kron(cmat::Identity(2, 2), e));
    }
  return generate_algebra(gens, 4, Tolerance{});
}

DualityReport lambda2_compare(const cmat& proj, const Tolerance& tol) {
  const TensorSpace space = TensorSpace::make(4, 3);
  const cmat isom = range_isometry(proj, tol);
  const int dd = static_cast<int>(isom.cols());

  const MatrixAlgebra qg = collective_algebra(left_factor_algebra(), 3, tol);    // Q(G)
  const MatrixAlgebra qgp = collective_algebra(right_factor_algebra(), 3, tol);  // Q(G')

  const MatrixAlgebra lhs = compressed_algebra(qgp, isom, tol);

  // rhs: operators on the component commuting with both the compressed
  // collective action of G and the compressed permutation action.
  std::vector<cmat> joint_seed;
  for (int i = 0; i < qg.dim(); ++i) joint_seed.push_back(isom.adjoint() * qg.element(i) * isom);
  for (const auto& s : all_permutations(3))
    joint_seed.push_back(isom.adjoint() * perm_op(space, s).matrix * isom);
  std::vector<cmat> mults;
  Rng rng(0x1a3bda2ull);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 3; ++t) {
    cmat r = cmat::Zero(dd, dd);
    for (const auto& c : joint_seed) r += cplx(g(rng), g(rng)) * c;
    mults.push_back(r);
  }
  const MatrixAlgebra joint = closure_algebra(joint_seed, mults, dd, tol);
  const MatrixAlgebra rhs = commutant(joint, tol);

  return compare_as_report(lhs, rhs, tol);
}

}  // namespace

DualityReport lambda2_counterexample(const Tolerance& tol) {
  tol.validate();
  const TensorSpace space = TensorSpace::make(4, 3);
  const auto projs = sn_isotypic_projectors(space, tol, 17);
  const std::vector<int> lambda2{2, 1};
  const cmat* two_dim = nullptr;
  for (const auto& p : projs)
    if (p.partition == lambda2) two_dim = &p.matrix;
  if (!two_dim) throw InternalError("lambda2_counterexample: missing (2,1) isotypic projector");
  DualityReport rep = lambda2_compare(*two_dim, tol);
  rep.detail = "lambda2 component of (C^4)^3; lhs=Alg{Pi Q(G') Pi}, rhs=Comm{Pi Q(G) Pi} ^ Comm{Pi P(S_3) Pi}";
  return rep;
}

DualityReport lambda2_symmetric_control(const Tolerance& tol) {
  tol.validate();
  const TensorSpace space = TensorSpace::make(4, 3);
  DualityReport rep = lambda2_compare(sym_projector(space, +1).matrix, tol);
  rep.detail = "symmetric component control of the lambda2 instance";
  return rep;
}

DualityReport nongauge_counterexample(const Tolerance& tol) {
  tol.validate();
  const TensorSpace space = TensorSpace::make(3, 2);

  cmat jz = cmat::Zero(3, 3), jx = cmat::Zero(3, 3), jy = cmat::Zero(3, 3);
  jz(0, 0) = 1;
  jz(2, 2) = -1;
  const double r = 1.0 / std::sqrt(2.0);
  jx(0, 1) = jx(1, 0) = jx(1, 2) = jx(2, 1) = r;
  jy(0, 1) = cplx(0, -r);
  jy(1, 0) = cplx(0, r);
  jy(1, 2) = cplx(0, -r);
  jy(2, 1) = cplx(0, r);

  std::vector<cmat> coll;
  const cmat i3 = cmat::Identity(3, 3);
  for (const cmat& j : {jx, jy, jz}) coll.push_back(kron(j, i3) + kron(i3, j));
  const MatrixAlgebra coll_alg = generate_algebra(coll, 9, tol);
  const MatrixAlgebra lhs = commutant(coll_alg, tol);

  std::vector<cmat> perms;
  for (const auto& s : all_permutations(2)) perms.push_back(perm_op(space, s).matrix);
  const MatrixAlgebra rhs = generate_algebra(perms, 9, tol);

  DualityReport rep = compare_as_report(lhs, rhs, tol);
  rep.detail = "lhs=Comm{Q(H)} for spin-1 H, rhs=Alg{P(S_2)}";
  return rep;
}

cmat LpmChannel::apply(const cmat& m) const {
  const long nn = total_dim();
  if (m.rows() != nn || m.cols() != nn) throw DimensionError("LpmChannel::apply: dimension mismatch");
  const cmat sandwiched = sym_proj * m * sym_proj;
  const cmat twirled = project_tensor_power(site_algebra, copies, sandwiched);
  cmat out = cmat::Zero(nn, nn);
  for (size_t i = 0; i < central_projectors.size(); ++i) {
    if (coefficients[i] <= 0.0) continue;
    out.noalias() +=
        (central_projectors[i] * twirled * central_projectors[i]) / coefficients[i];
  }
  out += (m.trace() / static_cast<double>(nn)) * (cmat::Identity(nn, nn) - support);
  return out;
}

cmat LpmChannel::choi() const {
  const long nn = total_dim();
  cmat choi(nn * nn, nn * nn);
  cmat e = cmat::Zero(nn, nn);
  for (long i = 0; i < nn; ++i)
    for (long j = 0; j < nn; ++j) {
      e(i, j) = 1.0;
      const cmat li = apply(e);
      e(i, j) = 0.0;
      // choi = sum_ij E_ij (x) L(E_ij)
      for (long r = 0; r < nn; ++r)
        for (long c = 0; c < nn; ++c) choi(i * nn + r, j * nn + c) = li(r, c);
    }
  return choi;
}

LpmChannel build_lpm(const MatrixAlgebra& a, int n, int sign, const Tolerance& tol, uint64_t seed) {
  tol.validate();
  const TensorSpace space = TensorSpace::make(a.ambient_dim, n);
  const SubspaceProjector pi = sym_projector(space, sign);
  if (pi.trace() < 0.5) throw ValidationError("build_lpm: the +/- subspace is empty");

  LpmChannel ch;
  ch.sign = sign;
  ch.copies = n;
  ch.site_algebra = a;
  ch.sym_proj = pi.matrix;

  const MatrixAlgebra coll = collective_algebra(a, n, tol);  // Alg{Q(G'_A)}
  ch.central_projectors = minimal_central_projectors(coll, tol, seed);

  const cmat twirled_pi = project_tensor_power(a, n, pi.matrix);
  const double include_cut = 1e3 * tol.match_eps;
  cmat support = cmat::Zero(space.total_dim, space.total_dim);
  cmat recon = cmat::Zero(space.total_dim, space.total_dim);
  for (const auto& p : ch.central_projectors) {
    const double tr = p.trace().real();
    double coef = (p * twirled_pi).trace().real() / tr;
    if (coef < -tol.match_eps)
      throw ValidationError("build_lpm: negative expansion coefficient " + std::to_string(coef) +
                            "; the site algebra is mis-specified");
    if (coef < include_cut) coef = 0.0;
    ch.coefficients.push_back(coef);
    if (coef > 0.0) {
      support += p;
      recon += coef * p;
    }
  }
  ch.support = support;
  if ((recon - twirled_pi).norm() > 1e2 * tol.match_eps)
    throw InternalError("build_lpm: twirled projector is not central in Alg{Q(G'_A)}");

  const cmat id = cmat::Identity(space.total_dim, space.total_dim);
  if ((ch.apply(id) - id).norm() > tol.match_eps)
    throw InternalError("build_lpm: channel is not unital");
  return ch;
}

MatrixAlgebra noiseless_operators(const MatrixAlgebra& a, int n, const Tolerance& tol) {
  tol.validate();
  if (n == 1) return a;
  return joint_algebra(a, n, tol);
}

}  // namespace swd
