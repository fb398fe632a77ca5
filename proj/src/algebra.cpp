#include "algebra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace swd {

namespace {

void check_gens(const std::vector<cmat>& gens, int d, const char* where) {
  for (const auto& g : gens) {
    require_square(g, where);
    require_finite(g, where);
    if (g.rows() != d) throw DimensionError(std::string(where) + ": generator dimension mismatch");
  }
}

double spectral_norm_bound(const cmat& a) { return a.norm(); }

}  // namespace

double MatrixAlgebra::closure_defect(int product_samples) const {
  double worst = basis.residual(identity());
  const int m = dim();
  Rng rng(0xc105ed5eedull ^ (static_cast<uint64_t>(m) << 16));
  std::uniform_int_distribution<int> pick(0, std::max(0, m - 1));
  const long pairs = static_cast<long>(m) * m;
  if (pairs <= product_samples) {
    for (int i = 0; i < m; ++i) {
      const cmat bi = element(i);
      worst = std::max(worst, basis.residual(bi.adjoint()));
      for (int j = 0; j < m; ++j) worst = std::max(worst, basis.residual(bi * element(j)));
    }
  } else {
    for (int s = 0; s < product_samples; ++s) {
      const cmat bi = element(pick(rng));
      const cmat bj = element(pick(rng));
      worst = std::max(worst, basis.residual(bi.adjoint()));
      worst = std::max(worst, basis.residual(bi * bj));
    }
  }
  return worst;
}

void MatrixAlgebra::require_valid(const Tolerance& tol) const {
  if (ambient_dim <= 0 || dim() == 0) throw ValidationError("MatrixAlgebra: empty algebra");
  const double defect = closure_defect();
  if (defect > tol.match_eps)
    throw ValidationError("MatrixAlgebra: closure defect " + std::to_string(defect) +
                          " exceeds match_eps");
}

std::vector<cmat> MatrixAlgebra::hermitian_spanning_set() const {
  std::vector<cmat> herms;
  herms.reserve(dim());
  std::vector<cmat> candidates;
  for (int i = 0; i < dim(); ++i) {
    const cmat b = element(i);
    candidates.push_back((b + b.adjoint()) / 2.0);
    candidates.push_back(cplx(0, 1) * (b - b.adjoint()) / 2.0);
  }
  // Keep a linearly independent subset of the Hermitian parts; over R its
  // size equals the complex dimension of the algebra.
  SpanBasis seen(ambient_dim);
  for (const auto& h : candidates)
    if (seen.absorb(h, 1e-9)) herms.push_back(h);
  return herms;
}

std::vector<cmat> MatrixAlgebra::generating_set(uint64_t seed) const {
  if (!generators.empty()) return generators;
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cmat> out;
  const int count = dim() <= 1 ? 1 : 3;
  for (int t = 0; t < count; ++t) {
    cmat r = cmat::Zero(ambient_dim, ambient_dim);
    for (int i = 0; i < dim(); ++i) r += cplx(g(rng), g(rng)) * element(i);
    out.push_back(r);
  }
  return out;
}

MatrixAlgebra span_algebra(const std::vector<cmat>& gens, int d, const Tolerance& tol) {
  tol.validate();
  check_gens(gens, d, "span_algebra");
  std::vector<cmat> seed;
  seed.push_back(cmat::Identity(d, d));
  for (const auto& g : gens) seed.push_back(g);
  return MatrixAlgebra(d, span_basis_of(seed, tol), gens);
}

MatrixAlgebra closure_algebra(const std::vector<cmat>& seed, const std::vector<cmat>& multipliers,
                              int d, const Tolerance& tol) {
  tol.validate();
  check_gens(seed, d, "closure_algebra");
  check_gens(multipliers, d, "closure_algebra");

  std::vector<cmat> mults = multipliers;
  for (const auto& m : multipliers) mults.push_back(m.adjoint());

  SpanBasis basis(d);
  std::vector<cmat> fresh;
  // reference scale guards against absorbing roundoff from products that are
  // mathematically zero
  auto add = [&](const cmat& x, double ref) {
    if (x.norm() <= 1e-9 * std::max(1.0, ref)) return false;
    if (basis.absorb(x, tol.rank_eps)) {
      fresh.push_back(basis.element(basis.size() - 1));
      return true;
    }
    return false;
  };

  add(cmat::Identity(d, d), 1.0);
  for (const auto& s : seed) {
    add(s, s.norm());
    add(s.adjoint(), s.norm());
  }

  const long cap = static_cast<long>(d) * d;
  int round = 0;
  while (!fresh.empty() && basis.size() < cap) {
    if (++round > 2 * d * d)
      throw InternalError("closure_algebra: closure loop failed to stabilize");
    std::vector<cmat> work;
    work.swap(fresh);
    for (const auto& b : work) {
      for (const auto& g : mults) {
        if (basis.size() >= cap) break;
        const double ref = b.norm() * g.norm();
        add(b * g, ref);
        add(g * b, ref);
      }
    }
  }

  MatrixAlgebra out(d, std::move(basis), {});
  // Closure sanity: products of seed elements must stay inside the span.
  if (!out.is_full()) {
    Rng rng(0x10c4ull + static_cast<uint64_t>(d));
    std::uniform_int_distribution<size_t> pick(0, seed.size() - 1);
    const int checks = std::min<size_t>(32, seed.size() * seed.size());
    for (int t = 0; t < static_cast<int>(checks); ++t) {
      const cmat& a = seed[pick(rng)];
      const cmat& b = seed[pick(rng)];
      const cmat p = a * b;
      if (out.residual(p) > tol.match_eps * std::max(1.0, p.norm()))
        throw InternalError("closure_algebra: span not closed under seed products");
    }
  }
  return out;
}

MatrixAlgebra generate_algebra(const std::vector<cmat>& gens, int d, const Tolerance& tol) {
  MatrixAlgebra out = closure_algebra(gens, gens, d, tol);
  out.generators = gens;
  if (out.dim() > d * d)
    throw InternalError("generate_algebra: closure exceeded d^2 basis elements");
  return out;
}

std::vector<cmat> unitary_spanning_set(const MatrixAlgebra& alg, const Tolerance& tol,
                                       uint64_t seed, int extra_random) {
  std::vector<cmat> herms;
  for (const auto& g : alg.generating_set(seed)) {
    herms.push_back((g + g.adjoint()) / 2.0);
    herms.push_back(cplx(0, 1) * (g - g.adjoint()) / 2.0);
  }
  Rng rng(seed ^ 0x77ull);
  std::normal_distribution<double> gs(0.0, 1.0);
  for (int t = 0; t < extra_random; ++t) {
    cmat r = cmat::Zero(alg.ambient_dim, alg.ambient_dim);
    for (int i = 0; i < alg.dim(); ++i) r += cplx(gs(rng), gs(rng)) * alg.element(i);
    herms.push_back((r + r.adjoint()) / 2.0);
  }
  std::vector<cmat> out;
  for (const auto& h : herms) {
    const double norm = spectral_norm_bound(h);
    if (norm < 1e-14) continue;
    // Scale keeps eigenphase spread below 2*pi so Comm{exp(ih)} = Comm{h}.
    out.push_back(unitary_exp_i(h / (1.0 + norm), tol));
  }
  if (out.empty()) out.push_back(cmat::Identity(alg.ambient_dim, alg.ambient_dim));
  return out;
}

MatrixAlgebra commutant(const MatrixAlgebra& alg, const Tolerance& tol) {
  tol.validate();
  if (alg.ambient_dim <= 0 || alg.dim() == 0) throw ValidationError("commutant: empty algebra");

  std::vector<cmat> fixed;
  for (int attempt = 0;; ++attempt) {
    const std::vector<cmat> unitaries =
        unitary_spanning_set(alg, tol, 0xabcdef12ull + attempt * 0x9e37ull, 4 + 4 * attempt);
    fixed = fixed_point_space(unitaries, tol);

    // The fixed space must commute with the full basis, not only with the
    // sampled spanning set.
    double worst = 0.0;
    for (const auto& x : fixed) {
      for (int i = 0; i < alg.dim() && worst <= tol.match_eps; ++i) {
        const cmat b = alg.element(i);
        worst = std::max(worst, (x * b - b * x).norm());
      }
      if (worst > tol.match_eps) break;
    }
    if (worst <= tol.match_eps) break;
    if (attempt >= 2)
      throw InternalError("commutant: fixed-point basis failed commutation validation");
  }

  Eigen::MatrixXcd cols(static_cast<long>(alg.ambient_dim) * alg.ambient_dim, fixed.size());
  for (size_t i = 0; i < fixed.size(); ++i) cols.col(static_cast<long>(i)) = vec_of(fixed[i]);
  return MatrixAlgebra(alg.ambient_dim, SpanBasis(alg.ambient_dim, std::move(cols)), {});
}

SpanComparison compare_spans(const MatrixAlgebra& lhs, const MatrixAlgebra& rhs,
                             const Tolerance& tol) {
  if (lhs.ambient_dim != rhs.ambient_dim) throw DimensionError("compare_spans: ambient mismatch");
  SpanComparison cmp;
  if (lhs.is_full() && rhs.is_full()) {
    cmp.equal = true;
    return cmp;
  }
  for (int i = 0; i < lhs.dim(); ++i)
    cmp.lhs_in_rhs = std::max(cmp.lhs_in_rhs, rhs.residual(lhs.element(i)));
  for (int i = 0; i < rhs.dim(); ++i)
    cmp.rhs_in_lhs = std::max(cmp.rhs_in_lhs, lhs.residual(rhs.element(i)));
  cmp.equal = lhs.dim() == rhs.dim() && cmp.lhs_in_rhs <= tol.match_eps &&
              cmp.rhs_in_lhs <= tol.match_eps;
  return cmp;
}

GaugeReport is_gauge_pair(const MatrixAlgebra& alg, const Tolerance& tol) {
  tol.validate();
  const MatrixAlgebra once = commutant(alg, tol);
  const MatrixAlgebra twice = commutant(once, tol);
  const SpanComparison cmp = compare_spans(alg, twice, tol);
  GaugeReport rep;
  rep.input_dim = alg.dim();
  rep.bicommutant_dim = twice.dim();
  rep.max_residual = std::max(cmp.lhs_in_rhs, cmp.rhs_in_lhs);
  rep.is_gauge = cmp.equal;
  return rep;
}

MatrixAlgebra center(const MatrixAlgebra& alg, const Tolerance& tol) {
  tol.validate();
  const int d = alg.ambient_dim;
  const int m = alg.dim();
  if (alg.is_full()) {
    std::vector<cmat> sc = {cmat::Identity(d, d) / std::sqrt(static_cast<double>(d))};
    Eigen::MatrixXcd cols(static_cast<long>(d) * d, 1);
    cols.col(0) = vec_of(sc[0]);
    return MatrixAlgebra(d, SpanBasis(d, std::move(cols)), {});
  }

  // Solve [X, h_j] = 0 restricted to algebra coordinates; commuting with a
  // generating family is enough, and the result is validated below.
  std::vector<cmat> herms;
  for (const auto& g : alg.generating_set(0xce47e6ull)) {
    herms.push_back((g + g.adjoint()) / 2.0);
    herms.push_back(cplx(0, 1) * (g - g.adjoint()) / 2.0);
  }
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (attempt == 1) herms = alg.hermitian_spanning_set();  // exhaustive fallback
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(m, m);
    Eigen::MatrixXcd cons(static_cast<long>(d) * d, m);
    for (const auto& h : herms) {
      const double scale = std::max(1.0, h.norm());
      for (int k = 0; k < m; ++k) {
        const cmat b = alg.element(k);
        cons.col(k) = vec_of((h * b - b * h) / scale);
      }
      gram.noalias() += cons.adjoint() * cons;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    const double lmax = std::max(1.0, es.eigenvalues().maxCoeff());
    std::vector<cmat> out;
    for (int k = 0; k < m; ++k) {
      if (es.eigenvalues()(k) > 1e-10 * lmax) continue;
      cmat x = cmat::Zero(d, d);
      for (int t = 0; t < m; ++t) x += es.eigenvectors()(t, k) * alg.element(t);
      out.push_back(x);
    }
    MatrixAlgebra z(d, span_basis_of(out, tol), {});
    bool valid = true;
    for (int i = 0; i < z.dim() && valid; ++i) {
      const cmat x = z.element(i);
      for (int j = 0; j < alg.dim(); ++j) {
        const cmat b = alg.element(j);
        if ((x * b - b * x).norm() > tol.match_eps) {
          valid = false;
          break;
        }
      }
    }
    if (valid) return z;
  }
  throw InternalError("center: validation failed");
}

std::vector<cmat> minimal_central_projectors(const MatrixAlgebra& alg, const Tolerance& tol,
                                             uint64_t seed) {
  tol.validate();
  const MatrixAlgebra z = center(alg, tol);
  const int d = alg.ambient_dim;
  const double gap = 1e3 * tol.match_eps;

  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng(seed + static_cast<uint64_t>(attempt) * 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> g(0.0, 1.0);
    cmat zc = cmat::Zero(d, d);
    for (int i = 0; i < z.dim(); ++i) zc += cplx(g(rng), g(rng)) * z.element(i);
    cmat h = (zc + zc.adjoint()) / 2.0;
    const double norm = h.norm();
    if (norm < 1e-12) continue;
    h /= norm;

    HermEig e = herm_eig(h, tol);
    const auto groups = cluster_values(e.eigenvalues, gap);
    if (static_cast<int>(groups.size()) != z.dim()) continue;  // collision, reseed

    std::vector<cmat> projs;
    bool ok = true;
    cmat sum = cmat::Zero(d, d);
    for (const auto& grp : groups) {
      cmat p = cmat::Zero(d, d);
      for (int idx : grp) p += e.eigenvectors.col(idx) * e.eigenvectors.col(idx).adjoint();
      if ((p * p - p).norm() > tol.match_eps || z.residual(p) > tol.match_eps) {
        ok = false;
        break;
      }
      sum += p;
      projs.push_back(p);
    }
    if (!ok) continue;
    if ((sum - cmat::Identity(d, d)).norm() > tol.match_eps) continue;
    return projs;
  }
  throw InternalError("minimal_central_projectors: eigenvalue-gap ambiguity after 5 reseeds (seed " +
                      std::to_string(seed) + ")");
}

namespace {

// Isometry onto the range of a (numerical) projector.
cmat projector_range(const cmat& p, const Tolerance& tol) {
  HermEig e = herm_eig(p, tol);
  int count = 0;
  for (long i = 0; i < e.eigenvalues.size(); ++i)
    if (e.eigenvalues(i) > 0.5) ++count;
  return e.eigenvectors.rightCols(count);
}

}  // namespace

BlockStructure block_decompose(const MatrixAlgebra& alg, const Tolerance& tol, uint64_t seed) {
  tol.validate();
  const int d = alg.ambient_dim;
  const std::vector<cmat> projs = minimal_central_projectors(alg, tol, seed);
  const MatrixAlgebra comm = commutant(alg, tol);

  struct Block {
    int m, n;
    double fingerprint;
    cmat columns;  // d x (m*n), ordered as |i> (x) |k>
  };
  std::vector<Block> blocks;

  Rng rng(seed ^ 0xb10cull);
  const cmat probe = random_hermitian(d, rng);

  for (const auto& p : projs) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 5)
        throw InternalError("block_decompose: failed to split block after 5 retries (seed " +
                            std::to_string(seed) + ")");
      Rng blk_rng(seed + 0x51ull + attempt * 1234567ull);
      const cmat v = projector_range(p, tol);
      const int k = static_cast<int>(v.cols());

      // Compressed algebra on the block gives m_J.
      std::vector<cmat> comp;
      for (int i = 0; i < alg.dim(); ++i) comp.push_back(v.adjoint() * alg.element(i) * v);
      SpanBasis comp_span = span_basis_of(comp, tol);
      const int m2 = comp_span.size();
      const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m2))));
      if (m * m != m2 || k % m != 0) continue;
      const int n = k / m;

      // Generic Hermitian element of the compressed commutant splits the
      // block into n copies of the m-dimensional irrep.
      std::normal_distribution<double> g(0.0, 1.0);
      cmat cc = cmat::Zero(k, k);
      cmat gc = cmat::Zero(k, k);
      for (int i = 0; i < comm.dim(); ++i) {
        const cmat e = v.adjoint() * comm.element(i) * v;
        cc += cplx(g(blk_rng), g(blk_rng)) * e;
        gc += cplx(g(blk_rng), g(blk_rng)) * e;
      }
      cmat b = (cc + cc.adjoint()) / 2.0;
      if (n == 1) {
        blocks.push_back({m, n, 0.0, v});
        break;
      }
      HermEig be = herm_eig(b, tol);
      const double spread = std::max(1.0, be.eigenvalues(k - 1) - be.eigenvalues(0));
      auto groups = cluster_values(be.eigenvalues, 1e-6 * spread);
      if (static_cast<int>(groups.size()) != n) continue;
      bool sizes_ok = true;
      for (const auto& grp : groups) sizes_ok &= static_cast<int>(grp.size()) == m;
      if (!sizes_ok) continue;

      std::vector<cmat> eigbases;  // k x m each
      for (const auto& grp : groups) {
        cmat vk(k, m);
        for (int c = 0; c < m; ++c) vk.col(c) = be.eigenvectors.col(grp[c]);
        eigbases.push_back(vk);
      }

      // Intertwiners V_1 -> V_k from a generic commutant element; Schur makes
      // them proportional to unitaries.
      cmat cols(k, k);
      bool ok = true;
      for (int kk = 0; kk < n && ok; ++kk) {
        cmat s;
        if (kk == 0) {
          s = cmat::Identity(m, m);
        } else {
          s = eigbases[kk].adjoint() * gc * eigbases[0];
          cmat sts = s.adjoint() * s;
          const double c2 = sts.trace().real() / m;
          if (c2 < 1e-20 || (sts - c2 * cmat::Identity(m, m)).norm() > 1e3 * tol.match_eps * c2) {
            ok = false;
            break;
          }
          s /= std::sqrt(c2);
        }
        const cmat bk = eigbases[kk] * s;  // columns: images of the reference basis
        for (int i = 0; i < m; ++i) cols.col(static_cast<long>(i) * n + kk) = bk.col(i);
      }
      if (!ok) continue;

      Block blk;
      blk.m = m;
      blk.n = n;
      blk.columns = v * cols;
      blocks.push_back(std::move(blk));
      break;
    }
    blocks.back().fingerprint = (p * probe).trace().real();
  }

  std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.m != b.m) return a.m < b.m;
    return a.fingerprint < b.fingerprint;
  });

  BlockStructure out;
  out.basis_change = cmat(d, d);
  int col = 0;
  for (const auto& blk : blocks) {
    out.blocks.push_back({blk.m, blk.n});
    out.basis_change.middleCols(col, blk.m * blk.n) = blk.columns;
    col += blk.m * blk.n;
  }
  if (col != d) throw InternalError("block_decompose: block dimensions do not sum to ambient_dim");

  // Validate: conjugation sends every basis element to blockwise X (x) I_n.
  const cmat w = out.basis_change;
  if ((w.adjoint() * w - cmat::Identity(d, d)).norm() > tol.match_eps)
    throw InternalError("block_decompose: basis change is not unitary");
  for (int i = 0; i < alg.dim(); ++i) {
    const cmat t = w.adjoint() * alg.element(i) * w;
    int off = 0;
    double resid = 0.0;
    for (const auto& [m, n] : out.blocks) {
      cmat x = cmat::Zero(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) x(a, b) = t(off + a * n, off + b * n);
      resid = std::max(resid, (t.middleRows(off, m * n).middleCols(off, m * n) - kron(x, cmat::Identity(n, n))).norm());
      off += m * n;
    }
    cmat block_only = cmat::Zero(d, d);
    off = 0;
    for (const auto& [m, n] : out.blocks) {
      block_only.block(off, off, m * n, m * n) = t.block(off, off, m * n, m * n);
      off += m * n;
    }
    resid = std::max(resid, (t - block_only).norm());
    if (resid > tol.match_eps)
      throw InternalError("block_decompose: conjugated element leaves block form, residual " +
                          std::to_string(resid));
  }
  return out;
}

cmat conditional_expectation(const MatrixAlgebra& alg, const cmat& x, const Tolerance& tol) {
  tol.validate();
  require_square(x, "conditional_expectation");
  if (x.rows() != alg.ambient_dim) throw DimensionError("conditional_expectation: dimension mismatch");
  return alg.project(x);
}

}  // namespace swd
