#include "matcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace swd {

void Tolerance::validate() const {
  if (!(rank_eps > 0.0 && rank_eps < 1.0))
    throw ValidationError("Tolerance: rank_eps must lie in (0,1)");
  if (!(match_eps > 0.0 && match_eps < 1.0))
    throw ValidationError("Tolerance: match_eps must lie in (0,1)");
}

double fro_norm(const cmat& a) { return a.norm(); }

bool all_finite(const cmat& a) { return a.allFinite(); }

void require_square(const cmat& a, const std::string& where) {
  if (a.rows() != a.cols())
    throw DimensionError(where + ": matrix is not square (" + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ")");
  if (a.rows() == 0) throw DimensionError(where + ": empty matrix");
}

void require_finite(const cmat& a, const std::string& where) {
  if (!all_finite(a)) throw ValidationError(where + ": non-finite entries");
}

cmat kron(const cmat& a, const cmat& b) {
  require_square(a, "kron");
  require_square(b, "kron");
  const long p = a.rows(), q = b.rows();
  cmat out(p * q, p * q);
  for (long i = 0; i < p; ++i)
    for (long j = 0; j < p; ++j) out.block(i * q, j * q, q, q) = a(i, j) * b;
  return out;
}

cplx hs_inner(const cmat& a, const cmat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("hs_inner: dimension mismatch");
  return (a.adjoint() * b).trace();
}

cvec vec_of(const cmat& a) {
  return Eigen::Map<const cvec>(a.data(), a.size());
}

cmat mat_of(const cvec& v, int d) {
  if (v.size() != static_cast<long>(d) * d) throw DimensionError("mat_of: size mismatch");
  return Eigen::Map<const cmat>(v.data(), d, d);
}

SpanBasis::SpanBasis(int matrix_dim)
    : dim_(matrix_dim), storage_(static_cast<long>(matrix_dim) * matrix_dim, 0) {}

SpanBasis::SpanBasis(int matrix_dim, Eigen::MatrixXcd cols)
    : dim_(matrix_dim), size_(static_cast<int>(cols.cols())), storage_(std::move(cols)) {
  if (storage_.rows() != static_cast<long>(dim_) * dim_)
    throw DimensionError("SpanBasis: column length mismatch");
}

void SpanBasis::ensure_capacity(int want) {
  if (storage_.cols() >= want) return;
  int cap = std::max(16, static_cast<int>(storage_.cols()));
  while (cap < want) cap = std::min(cap * 2, dim_ * dim_);
  Eigen::MatrixXcd bigger(storage_.rows(), cap);
  bigger.leftCols(size_) = storage_.leftCols(size_);
  storage_ = std::move(bigger);
}

cmat SpanBasis::element(int i) const {
  if (i < 0 || i >= size_) throw DimensionError("SpanBasis::element: index out of range");
  return mat_of(storage_.col(i), dim_);
}

bool SpanBasis::absorb_vec(cvec v, double rel_cutoff) {
  const double orig = v.norm();
  if (!(orig > 0) || !v.allFinite()) return false;
  if (is_full()) return false;
  auto q = cols();
  if (size_ > 0) {
    v -= q * (q.adjoint() * v);
    v -= q * (q.adjoint() * v);  // second pass keeps the basis tight
  }
  const double res = v.norm();
  if (res <= rel_cutoff * orig) return false;
  ensure_capacity(size_ + 1);
  storage_.col(size_) = v / res;
  ++size_;
  return true;
}

bool SpanBasis::absorb(const cmat& m, double rel_cutoff) {
  if (m.rows() != dim_ || m.cols() != dim_) throw DimensionError("SpanBasis::absorb: wrong dim");
  return absorb_vec(vec_of(m), rel_cutoff);
}

cmat SpanBasis::project(const cmat& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw DimensionError("SpanBasis::project: wrong dim");
  if (size_ == 0) return cmat::Zero(dim_, dim_);
  auto q = cols();
  cvec v = vec_of(x);
  return mat_of(q * (q.adjoint() * v), dim_);
}

double SpanBasis::residual(const cmat& x) const { return (x - project(x)).norm(); }

// Rank and basis from the Gram spectrum: eigenvalues of S^dag S are squared
// singular values, so the rank_eps cutoff applies to sqrt(lambda). A QR pass
// restores orthonormality lost near small singular values.
SpanBasis span_basis_of(const std::vector<cmat>& mats, const Tolerance& tol) {
  tol.validate();
  if (mats.empty()) return SpanBasis(1, Eigen::MatrixXcd(1, 0));
  const int d = static_cast<int>(mats.front().rows());
  const long k = static_cast<long>(mats.size());
  Eigen::MatrixXcd stacked(static_cast<long>(d) * d, k);
  for (long i = 0; i < k; ++i) {
    require_square(mats[i], "orthonormal_span");
    require_finite(mats[i], "orthonormal_span");
    if (mats[i].rows() != d) throw DimensionError("orthonormal_span: mixed dimensions");
    stacked.col(i) = vec_of(mats[i]);
  }
  Eigen::MatrixXcd gram = stacked.adjoint() * stacked;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  if (es.info() != Eigen::Success) throw InternalError("orthonormal_span: eigensolver failed");
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(lmax > 0)) return SpanBasis(d, Eigen::MatrixXcd(static_cast<long>(d) * d, 0));
  const double smax = std::sqrt(lmax);
  // Eigenvalues of the Gram are squared singular values; its noise floor
  // (~eps * lmax) masks singular values near rank_eps * smax, so borderline
  // directions are settled by an unsquared residual against the input.
  const double confident = std::max(tol.rank_eps * tol.rank_eps, 1e-13) * lmax;
  std::vector<long> kept;
  std::vector<double> scales;
  for (long i = k - 1; i >= 0; --i) {  // ascending order: walk from the top
    const double lam = es.eigenvalues()(i);
    if (lam > confident) {
      kept.push_back(i);
      scales.push_back(std::sqrt(lam));
      continue;
    }
    const double resid = (stacked * es.eigenvectors().col(i)).norm();
    if (resid > tol.rank_eps * smax) {
      kept.push_back(i);
      scales.push_back(resid);
    }
  }
  const int rank = static_cast<int>(kept.size());
  Eigen::MatrixXcd u(static_cast<long>(d) * d, rank);
  for (int c = 0; c < rank; ++c) u.col(c) = stacked * es.eigenvectors().col(kept[c]) / scales[c];
  if (rank > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(u);
    Eigen::MatrixXcd thin_q =
        qr.householderQ() * Eigen::MatrixXcd::Identity(static_cast<long>(d) * d, rank);
    u = std::move(thin_q);
    // canonical phases: the dominant entry of each column is real positive
    for (int c = 0; c < rank; ++c) {
      long imax = 0;
      u.col(c).cwiseAbs().maxCoeff(&imax);
      const cplx v = u(imax, c);
      if (std::abs(v) > 0) u.col(c) *= std::conj(v) / std::abs(v);
    }
  }
  return SpanBasis(d, std::move(u));
}

std::vector<cmat> orthonormal_span(const std::vector<cmat>& mats, const Tolerance& tol) {
  SpanBasis b = span_basis_of(mats, tol);
  std::vector<cmat> out;
  out.reserve(b.size());
  for (int i = 0; i < b.size(); ++i) out.push_back(b.element(i));
  return out;
}

HermEig herm_eig(const cmat& h, const Tolerance& tol) {
  tol.validate();
  require_square(h, "herm_eig");
  require_finite(h, "herm_eig");
  const double scale = std::max(fro_norm(h), 1e-300);
  if ((h - h.adjoint()).norm() > tol.match_eps * std::max(scale, 1.0))
    throw ValidationError("herm_eig: input is not Hermitian within match_eps");
  Eigen::SelfAdjointEigenSolver<cmat> es((h + h.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw InternalError("herm_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

cmat unitary_exp_i(const cmat& h, const Tolerance& tol) {
  HermEig e = herm_eig(h, tol);
  cvec phases(e.eigenvalues.size());
  for (long i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(cplx(0.0, e.eigenvalues(i)));
  return e.eigenvectors * phases.asDiagonal() * e.eigenvectors.adjoint();
}

std::vector<std::vector<int>> cluster_values(const rvec& sorted_vals, double gap) {
  std::vector<std::vector<int>> groups;
  for (long i = 0; i < sorted_vals.size(); ++i) {
    if (groups.empty() || sorted_vals(i) - sorted_vals(groups.back().back()) > gap)
      groups.push_back({});
    groups.back().push_back(static_cast<int>(i));
  }
  return groups;
}

namespace {

bool nearly_scalar(const cmat& b, double eps) {
  const int d = static_cast<int>(b.rows());
  const cplx mean = b.trace() / static_cast<double>(d);
  return (b - mean * cmat::Identity(d, d)).norm() <= eps * std::max(1.0, b.norm());
}

std::vector<cmat> full_matrix_unit_basis(int d) {
  std::vector<cmat> out;
  out.reserve(static_cast<size_t>(d) * d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      cmat e = cmat::Zero(d, d);
      e(i, j) = 1.0;
      out.push_back(e);
    }
  return out;
}

// Candidate superspace from one Hermitian probe: eigenvector outer products
// within each eigenvalue cluster. Returns (eigvecs, clusters).
std::pair<cmat, std::vector<std::vector<int>>> probe_blocks(const cmat& probe, const Tolerance& tol) {
  HermEig e = herm_eig(probe, tol);
  const double spread = std::max(1.0, e.eigenvalues(e.eigenvalues.size() - 1) - e.eigenvalues(0));
  return {e.eigenvectors, cluster_values(e.eigenvalues, 1e-6 * spread)};
}

}  // namespace

std::vector<cmat> fixed_point_space(const std::vector<std::pair<cmat, cmat>>& maps,
                                    const Tolerance& tol) {
  tol.validate();
  if (maps.empty()) throw ValidationError("fixed_point_space: no conjugation pairs given");
  const int d = static_cast<int>(maps.front().first.rows());
  std::vector<cmat> unitaries;
  unitaries.reserve(maps.size());
  for (const auto& [b, bdag] : maps) {
    require_square(b, "fixed_point_space");
    if (b.rows() != d) throw DimensionError("fixed_point_space: mixed dimensions");
    const double scale = std::max(1.0, b.norm());
    if ((bdag - b.adjoint()).norm() > tol.match_eps * scale)
      throw ValidationError("fixed_point_space: second element of pair is not the adjoint");
    if ((b * b.adjoint() - cmat::Identity(d, d)).norm() > tol.match_eps * scale)
      throw ValidationError("fixed_point_space: non-unitary generator");
    unitaries.push_back(b);
  }
  return fixed_point_space(unitaries, tol);
}

// The joint fixed space of unitary conjugations equals the eigenvalue-1
// eigenspace of the averaging map (1/k) sum_i B_i (.) B_i^dag. It is extracted
// here in two stages: a Hermitian mix of the generators' real/imaginary parts
// confines candidates to its eigenvalue blocks, then the commutation
// constraints [B_i, X] = 0 are solved exactly in those block coordinates.
std::vector<cmat> fixed_point_space(const std::vector<cmat>& unitaries, const Tolerance& tol) {
  tol.validate();
  if (unitaries.empty()) throw ValidationError("fixed_point_space: no generators");
  const int d = static_cast<int>(unitaries.front().rows());
  for (const auto& u : unitaries) {
    require_square(u, "fixed_point_space");
    if (u.rows() != d) throw DimensionError("fixed_point_space: mixed dimensions");
    if ((u * u.adjoint() - cmat::Identity(d, d)).norm() > tol.match_eps * std::max(1.0, u.norm()))
      throw ValidationError("fixed_point_space: non-unitary generator");
  }

  bool all_scalar = true;
  for (const auto& u : unitaries)
    if (!nearly_scalar(u, tol.match_eps)) all_scalar = false;
  if (all_scalar) return full_matrix_unit_basis(d);

  Rng rng(0x5eedf17edull + static_cast<uint64_t>(d));
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int attempt = 0; attempt < 4; ++attempt) {
    cmat mix = cmat::Zero(d, d);
    for (const auto& u : unitaries) {
      const cmat re = (u + u.adjoint()) / 2.0;
      const cmat im = cplx(0, 1) * (u - u.adjoint()) / 2.0;
      mix += gauss(rng) * re + gauss(rng) * im;
    }
    auto [vecs, clusters] = probe_blocks(mix, tol);

    // Block coordinates: one candidate per (cluster, i, j) pair.
    struct Coord {
      int c, i, j;
    };
    std::vector<Coord> coords;
    for (size_t c = 0; c < clusters.size(); ++c)
      for (int i : clusters[c])
        for (int j : clusters[c]) coords.push_back({static_cast<int>(c), i, j});
    const long D1 = static_cast<long>(coords.size());

    // Gram matrix of the stacked commutation constraints in block coordinates.
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(D1, D1);
    Eigen::MatrixXcd cons(static_cast<long>(d) * d, D1);
    for (const auto& u : unitaries) {
      const cmat uv = u * vecs;        // columns u*v_i
      const cmat vu = u.adjoint() * vecs;
      for (long k = 0; k < D1; ++k) {
        // [u, v_i v_j^dag] = (u v_i) v_j^dag - v_i (u^dag v_j)^dag
        const auto& co = coords[k];
        cmat comm = uv.col(co.i) * vecs.col(co.j).adjoint() - vecs.col(co.i) * vu.col(co.j).adjoint();
        cons.col(k) = vec_of(comm);
      }
      gram.noalias() += cons.adjoint() * cons;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    if (es.info() != Eigen::Success) throw InternalError("fixed_point_space: Gram eigensolver failed");
    const double lmax = std::max(1.0, es.eigenvalues().maxCoeff());
    const double cutoff = 1e-10 * lmax;
    std::vector<cmat> basis;
    for (long k = 0; k < D1; ++k) {
      if (es.eigenvalues()(k) > cutoff) continue;
      cmat x = cmat::Zero(d, d);
      for (long t = 0; t < D1; ++t) {
        const auto& co = coords[t];
        x.noalias() += es.eigenvectors()(t, k) * (vecs.col(co.i) * vecs.col(co.j).adjoint());
      }
      basis.push_back(x);
    }

    bool valid = true;
    for (const auto& x : basis) {
      for (const auto& u : unitaries) {
        if ((u * x - x * u).norm() > tol.match_eps) {
          valid = false;
          break;
        }
      }
      if (!valid) break;
    }
    if (valid) return basis;
  }
  throw InternalError("fixed_point_space: block reduction failed to converge after 4 probe retries");
}

cmat random_gaussian(int d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  cmat m(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

cmat random_hermitian(int d, Rng& rng) {
  cmat m = random_gaussian(d, rng);
  return (m + m.adjoint()) / 2.0;
}

cmat random_unitary(int d, Rng& rng) {
  cmat m = random_gaussian(d, rng);
  Eigen::HouseholderQR<cmat> qr(m);
  cmat q = qr.householderQ();
  cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    cplx ph = r(i, i) / std::abs(r(i, i));
    q.col(i) *= ph;
  }
  return q;
}

cmat random_density(int d, Rng& rng) {
  cmat g = random_gaussian(d, rng);
  cmat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace swd
