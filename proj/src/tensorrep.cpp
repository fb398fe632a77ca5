#include "tensorrep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace swd {

TensorSpace TensorSpace::make(int d, int n, long cap) {
  if (d < 1 || n < 1) throw ValidationError("TensorSpace: need d >= 1, n >= 1");
  long total = 1;
  for (int k = 0; k < n; ++k) {
    total *= d;
    if (total > cap)
      throw CapError("TensorSpace: d^n = " + std::to_string(total) + "+ exceeds cap " +
                     std::to_string(cap));
  }
  return {d, n, total};
}

std::vector<Perm> all_permutations(int n) {
  Perm base(n);
  std::iota(base.begin(), base.end(), 0);
  std::vector<Perm> out;
  do {
    out.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

Perm compose(const Perm& s, const Perm& t) {
  if (s.size() != t.size()) throw ValidationError("compose: size mismatch");
  Perm out(s.size());
  for (size_t k = 0; k < s.size(); ++k) out[k] = s[t[k]];
  return out;
}

int perm_parity(const Perm& s) {
  int parity = 0;
  std::vector<bool> seen(s.size(), false);
  for (size_t k = 0; k < s.size(); ++k) {
    if (seen[k]) continue;
    int len = 0;
    for (size_t j = k; !seen[j]; j = s[j]) {
      seen[j] = true;
      ++len;
    }
    parity ^= (len - 1) & 1;
  }
  return parity;
}

namespace {

void check_perm(const TensorSpace& space, const Perm& s) {
  if (static_cast<int>(s.size()) != space.copies)
    throw ValidationError("perm_op: permutation length does not match copies");
  std::vector<bool> seen(s.size(), false);
  for (int v : s) {
    if (v < 0 || v >= static_cast<int>(s.size()) || seen[v])
      throw ValidationError("perm_op: malformed permutation");
    seen[v] = true;
  }
}

}  // namespace

std::vector<long> perm_index_map(const TensorSpace& space, const Perm& s) {
  check_perm(space, s);
  const int d = space.site_dim, n = space.copies;
  std::vector<long> map(space.total_dim);
  std::vector<int> digits(n), moved(n);
  for (long idx = 0; idx < space.total_dim; ++idx) {
    long rem = idx;
    for (int k = n - 1; k >= 0; --k) {
      digits[k] = static_cast<int>(rem % d);
      rem /= d;
    }
    for (int k = 0; k < n; ++k) moved[s[k]] = digits[k];
    long out = 0;
    for (int k = 0; k < n; ++k) out = out * d + moved[k];
    map[idx] = out;
  }
  return map;
}

PermOperator perm_op(const TensorSpace& space, const Perm& s) {
  const auto map = perm_index_map(space, s);
  cmat p = cmat::Zero(space.total_dim, space.total_dim);
  for (long i = 0; i < space.total_dim; ++i) p(map[i], i) = 1.0;
  return {s, std::move(p)};
}

cmat apply_perm_conj(const TensorSpace& space, const Perm& s, const cmat& x) {
  if (x.rows() != space.total_dim || x.cols() != space.total_dim)
    throw DimensionError("apply_perm_conj: dimension mismatch");
  const auto map = perm_index_map(space, s);
  cmat out(space.total_dim, space.total_dim);
  for (long j = 0; j < space.total_dim; ++j)
    for (long i = 0; i < space.total_dim; ++i) out(map[i], map[j]) = x(i, j);
  return out;
}

cmat symmetrize(const TensorSpace& space, const cmat& x) {
  if (x.rows() != space.total_dim || x.cols() != space.total_dim)
    throw DimensionError("symmetrize: dimension mismatch");
  cmat acc = cmat::Zero(space.total_dim, space.total_dim);
  const auto perms = all_permutations(space.copies);
  for (const auto& s : perms) acc += apply_perm_conj(space, s, x);
  return acc / static_cast<double>(perms.size());
}

SubspaceProjector sym_projector(const TensorSpace& space, int sign) {
  if (sign != 1 && sign != -1) throw ValidationError("sym_projector: sign must be +1 or -1");
  cmat acc = cmat::Zero(space.total_dim, space.total_dim);
  const auto perms = all_permutations(space.copies);
  for (const auto& s : perms) {
    const auto map = perm_index_map(space, s);
    const double w = (sign == 1 || perm_parity(s) == 0) ? 1.0 : -1.0;
    for (long i = 0; i < space.total_dim; ++i) acc(map[i], i) += w;
  }
  SubspaceProjector out;
  out.kind = sign == 1 ? SubspaceKind::symmetric : SubspaceKind::antisymmetric;
  out.partition.assign(sign == 1 ? 1 : space.copies, sign == 1 ? space.copies : 1);
  out.matrix = acc / static_cast<double>(perms.size());
  return out;
}

std::vector<std::vector<int>> partitions_of(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rest, int maxpart) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(rest, maxpart); p >= 1; --p) {
      cur.push_back(p);
      rec(rest - p, p);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

namespace {

std::vector<std::vector<int>> hook_lengths(const std::vector<int>& part) {
  const int rows = static_cast<int>(part.size());
  std::vector<int> collen;  // conjugate partition
  for (int c = 0; c < part[0]; ++c) {
    int len = 0;
    for (int r = 0; r < rows; ++r)
      if (part[r] > c) ++len;
    collen.push_back(len);
  }
  std::vector<std::vector<int>> hooks(rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < part[r]; ++c) hooks[r].push_back(part[r] - c + collen[c] - r - 1);
  return hooks;
}

}  // namespace

long sn_irrep_dim(const std::vector<int>& part) {
  const int n = std::accumulate(part.begin(), part.end(), 0);
  long fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  long hooky = 1;
  for (const auto& row : hook_lengths(part))
    for (int h : row) hooky *= h;
  return fact / hooky;
}

long gl_irrep_dim(const std::vector<int>& part, int d) {
  if (static_cast<int>(part.size()) > d) return 0;
  const auto hooks = hook_lengths(part);
  // product over cells of (d + c - r) / hook(r, c)
  double num = 1.0, den = 1.0;
  for (int r = 0; r < static_cast<int>(part.size()); ++r)
    for (int c = 0; c < part[r]; ++c) {
      num *= d + c - r;
      den *= hooks[r][c];
    }
  return std::lround(num / den);
}

std::vector<SubspaceProjector> sn_isotypic_projectors(const TensorSpace& space,
                                                      const Tolerance& tol, uint64_t seed) {
  std::vector<cmat> perm_mats;
  for (const auto& s : all_permutations(space.copies)) perm_mats.push_back(perm_op(space, s).matrix);
  const MatrixAlgebra sn_alg =
      generate_algebra(perm_mats, static_cast<int>(space.total_dim), tol);
  std::vector<cmat> projs = minimal_central_projectors(sn_alg, tol, seed);

  std::vector<SubspaceProjector> out;
  const int n = space.copies;
  // The 1-d irreps are matched against the explicit +/- projectors, so only
  // the remaining partitions enter the trace table.
  std::vector<std::pair<std::vector<int>, long>> expected;  // (partition, trace)
  if (n <= 4) {
    for (const auto& part : partitions_of(n)) {
      if (static_cast<int>(part.size()) == 1 || part.front() == 1) continue;
      const long tr = sn_irrep_dim(part) * gl_irrep_dim(part, space.site_dim);
      if (tr > 0) expected.push_back({part, tr});
    }
  }

  const cmat plus = sym_projector(space, +1).matrix;
  const cmat minus = sym_projector(space, -1).matrix;
  for (auto& p : projs) {
    SubspaceProjector sp;
    sp.matrix = std::move(p);
    const double tr = sp.trace();
    if ((sp.matrix - plus).norm() <= 1e3 * tol.match_eps) {
      sp.kind = SubspaceKind::symmetric;
      sp.partition.assign(1, n);
    } else if ((sp.matrix - minus).norm() <= 1e3 * tol.match_eps) {
      sp.kind = SubspaceKind::antisymmetric;
      sp.partition.assign(n, 1);
    } else {
      sp.kind = SubspaceKind::isotypic;
      std::vector<const std::vector<int>*> hits;
      for (const auto& [part, etr] : expected)
        if (std::abs(tr - static_cast<double>(etr)) < 0.5) hits.push_back(&part);
      if (hits.size() == 1) sp.partition = *hits.front();
    }
    out.push_back(std::move(sp));
  }
  std::sort(out.begin(), out.end(),
            [](const SubspaceProjector& a, const SubspaceProjector& b) {
              if (a.trace() != b.trace()) return a.trace() > b.trace();
              return a.partition > b.partition;
            });
  return out;
}

MatrixAlgebra tensor_power_algebra(const MatrixAlgebra& alg, int n, long cap) {
  const TensorSpace space = TensorSpace::make(alg.ambient_dim, n, cap);
  const int m = alg.dim();
  long count = 1;
  for (int k = 0; k < n; ++k) {
    count *= m;
    if (count > cap * cap)
      throw CapError("tensor_power_algebra: basis count exceeds cap");
  }
  const long nn = space.total_dim;
  Eigen::MatrixXcd cols(nn * nn, count);
  std::vector<int> word(n, 0);
  for (long w = 0; w < count; ++w) {
    long rem = w;
    for (int k = n - 1; k >= 0; --k) {
      word[k] = static_cast<int>(rem % m);
      rem /= m;
    }
    cmat acc = alg.element(word[0]);
    for (int k = 1; k < n; ++k) acc = kron(acc, alg.element(word[k]));
    cols.col(w) = vec_of(acc);
  }
  std::vector<cmat> gens;
  for (const auto& g : alg.generating_set()) {
    for (int k = 0; k < n; ++k) {
      cmat site = cmat::Identity(1, 1);
      for (int j = 0; j < n; ++j)
        site = kron(site, j == k ? g : cmat::Identity(alg.ambient_dim, alg.ambient_dim));
      gens.push_back(site);
    }
  }
  return MatrixAlgebra(static_cast<int>(nn), SpanBasis(static_cast<int>(nn), std::move(cols)),
                       std::move(gens));
}

MatrixAlgebra collective_algebra(const MatrixAlgebra& alg, int n, const Tolerance& tol) {
  tol.validate();
  const TensorSpace space = TensorSpace::make(alg.ambient_dim, n);
  const int m = alg.dim();

  // Symmetrized tensor words depend only on the multiset of basis indices.
  std::vector<cmat> cands;
  std::vector<int> word(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int lo) {
    if (pos == n) {
      cmat acc = alg.element(word[0]);
      for (int k = 1; k < n; ++k) acc = kron(acc, alg.element(word[k]));
      cands.push_back(symmetrize(space, acc));
      return;
    }
    for (int i = lo; i < m; ++i) {
      word[pos] = i;
      rec(pos + 1, i);
    }
  };
  rec(0, 0);

  // Collective degree-1 elements generate the same algebra; keep them as the
  // stored generating set.
  std::vector<cmat> gens;
  for (int i = 0; i < m; ++i) {
    const cmat b = alg.element(i);
    cmat coll = cmat::Zero(space.total_dim, space.total_dim);
    for (int k = 0; k < n; ++k) {
      cmat site = cmat::Identity(1, 1);
      for (int j = 0; j < n; ++j)
        site = kron(site, j == k ? b : cmat::Identity(alg.ambient_dim, alg.ambient_dim));
      coll += site;
    }
    gens.push_back(coll);
  }

  MatrixAlgebra out(static_cast<int>(space.total_dim), span_basis_of(cands, tol), std::move(gens));
  return out;
}

MatrixAlgebra joint_algebra(const MatrixAlgebra& alg, int n, const Tolerance& tol) {
  tol.validate();
  const TensorSpace space = TensorSpace::make(alg.ambient_dim, n);
  const MatrixAlgebra power = tensor_power_algebra(alg, n);
  const long nn = space.total_dim;

  if (power.is_full()) return power;  // permutations already inside

  std::vector<cmat> seed;
  for (int i = 0; i < power.dim(); ++i) seed.push_back(power.element(i));
  std::vector<cmat> perm_mats;
  for (const auto& s : all_permutations(n)) {
    cmat pm = perm_op(space, s).matrix;
    seed.push_back(pm);
    perm_mats.push_back(std::move(pm));
  }

  // Multipliers: a couple of generic tensor-power elements plus permutation
  // generators; the closure is validated against the full seed.
  std::vector<cmat> mults;
  Rng rng(0x701e7ull + static_cast<uint64_t>(nn));
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 2; ++t) {
    cmat r = cmat::Zero(nn, nn);
    for (int i = 0; i < power.dim(); ++i) r += cplx(g(rng), g(rng)) * power.element(i);
    mults.push_back(r);
  }
  if (n >= 2) {
    Perm tr(n);
    std::iota(tr.begin(), tr.end(), 0);
    std::swap(tr[0], tr[1]);
    mults.push_back(perm_op(space, tr).matrix);
    Perm cyc(n);
    for (int k = 0; k < n; ++k) cyc[k] = (k + 1) % n;
    mults.push_back(perm_op(space, cyc).matrix);
  }

  MatrixAlgebra out = closure_algebra(seed, mults, static_cast<int>(nn), tol);
  out.generators = power.generators;
  for (auto& pm : perm_mats) out.generators.push_back(std::move(pm));
  return out;
}

cmat project_tensor_power(const MatrixAlgebra& site_alg, int n, const cmat& x) {
  const int d = site_alg.ambient_dim;
  const TensorSpace space = TensorSpace::make(d, n);
  if (x.rows() != space.total_dim || x.cols() != space.total_dim)
    throw DimensionError("project_tensor_power: dimension mismatch");
  const int m = site_alg.dim();
  std::vector<cmat> site_basis;
  for (int i = 0; i < m; ++i) site_basis.push_back(site_alg.element(i));

  cmat cur = x;
  long hi_dim = 1, lo_dim = space.total_dim / d;  // site 0 is the most significant digit
  for (int site = 0; site < n; ++site) {
    cmat next = cmat::Zero(space.total_dim, space.total_dim);
    // index = hi * (d * lo) + a * lo + lo_idx
    for (long hr = 0; hr < hi_dim; ++hr)
      for (long hc = 0; hc < hi_dim; ++hc)
        for (long lr = 0; lr < lo_dim; ++lr)
          for (long lc = 0; lc < lo_dim; ++lc) {
            for (int i = 0; i < m; ++i) {
              cplx coef = 0.0;
              for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                  coef += std::conj(site_basis[i](a, b)) *
                          cur(hr * d * lo_dim + a * lo_dim + lr, hc * d * lo_dim + b * lo_dim + lc);
              if (coef == cplx(0.0)) continue;
              for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                  const cplx v = site_basis[i](a, b);
                  if (v != cplx(0.0))
                    next(hr * d * lo_dim + a * lo_dim + lr, hc * d * lo_dim + b * lo_dim + lc) +=
                        coef * v;
                }
            }
          }
    cur = std::move(next);
    hi_dim *= d;
    lo_dim /= d;
  }
  return cur;
}

}  // namespace swd
