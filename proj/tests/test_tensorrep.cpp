#include "tensorrep.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>

using namespace swd;

namespace {
const Tolerance tol{};

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long out = 1;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

MatrixAlgebra diag2() { return generate_algebra({oracle::pauli_z()}, 2, tol); }
MatrixAlgebra full2() { return generate_algebra({oracle::pauli_x(), oracle::pauli_z()}, 2, tol); }

}  // namespace

TEST_CASE("tensor space capping") {
  CHECK(TensorSpace::make(2, 6).total_dim == 64);
  CHECK(TensorSpace::make(4, 3).total_dim == 64);
  CHECK_THROWS_AS(TensorSpace::make(2, 13), CapError);
}

TEST_CASE("perm_op basics") {
  const TensorSpace s22 = TensorSpace::make(2, 2);
  CHECK((perm_op(s22, {0, 1}).matrix - cmat::Identity(4, 4)).norm() == doctest::Approx(0.0));

  // swap sends |01> to |10>
  const cmat swap = perm_op(s22, {1, 0}).matrix;
  cvec e01 = cvec::Zero(4), e10 = cvec::Zero(4);
  e01(1) = 1;
  e10(2) = 1;
  CHECK((swap * e01 - e10).norm() == doctest::Approx(0.0));

  // 3-cycle cubes to the identity
  const TensorSpace s23 = TensorSpace::make(2, 3);
  const cmat c = perm_op(s23, {1, 2, 0}).matrix;
  CHECK((c * c * c - cmat::Identity(8, 8)).norm() == doctest::Approx(0.0));

  CHECK_THROWS_AS(perm_op(s22, {0, 0}), ValidationError);
}

TEST_CASE("perm_op is a faithful homomorphism for n <= 4") {
  for (int n : {2, 3, 4}) {
    const TensorSpace space = TensorSpace::make(2, n);
    const auto perms = all_permutations(n);
    std::vector<cmat> mats;
    for (const auto& s : perms) mats.push_back(perm_op(space, s).matrix);
    for (size_t a = 0; a < perms.size(); ++a)
      for (size_t b = 0; b < perms.size(); ++b) {
        const cmat prod = mats[a] * mats[b];
        const cmat direct = perm_op(space, compose(perms[a], perms[b])).matrix;
        REQUIRE((prod - direct).norm() < 1e-12);
      }
    // faithful: distinct permutations give distinct matrices
    for (size_t a = 0; a < perms.size(); ++a)
      for (size_t b = a + 1; b < perms.size(); ++b)
        REQUIRE((mats[a] - mats[b]).norm() > 0.5);
  }
}

TEST_CASE("sym_projector traces") {
  for (int d : {2, 3}) {
    for (int n : {2, 3}) {
      const TensorSpace space = TensorSpace::make(d, n);
      const auto plus = sym_projector(space, +1);
      const auto minus = sym_projector(space, -1);
      CHECK(plus.trace() == doctest::Approx(static_cast<double>(binom(d + n - 1, n))));
      CHECK(minus.trace() == doctest::Approx(static_cast<double>(binom(d, n))));
      CHECK((plus.matrix * minus.matrix).norm() <= tol.match_eps);
      CHECK((plus.matrix * plus.matrix - plus.matrix).norm() <= tol.match_eps);
    }
  }
  // antisymmetric space of 3 qubits is empty
  CHECK(sym_projector(TensorSpace::make(2, 3), -1).trace() == doctest::Approx(0.0));
}

TEST_CASE("symmetrize basics") {
  const TensorSpace space = TensorSpace::make(2, 2);
  const cmat swap = perm_op(space, {1, 0}).matrix;

  // already invariant input is returned unchanged
  const cmat inv = kron(oracle::pauli_z(), oracle::pauli_z());
  CHECK((symmetrize(space, inv) - inv).norm() <= tol.match_eps);

  const cmat zi = kron(oracle::pauli_z(), cmat::Identity(2, 2));
  const cmat iz = kron(cmat::Identity(2, 2), oracle::pauli_z());
  CHECK((symmetrize(space, zi) - (zi + iz) / 2.0).norm() <= tol.match_eps);

  Rng rng(4);
  const cmat x = random_gaussian(4, rng);
  const cmat sx = symmetrize(space, x);
  CHECK((swap * sx - sx * swap).norm() <= tol.match_eps);
  CHECK((symmetrize(space, sx) - sx).norm() <= tol.match_eps);
}

TEST_CASE("sn isotypic projectors for n = 2 reproduce the sym/antisym pair") {
  const TensorSpace space = TensorSpace::make(3, 2);
  const auto projs = sn_isotypic_projectors(space, tol, 5);
  REQUIRE(projs.size() == 2);
  const cmat plus = sym_projector(space, +1).matrix;
  const cmat minus = sym_projector(space, -1).matrix;
  bool found_plus = false, found_minus = false;
  for (const auto& p : projs) {
    if ((p.matrix - plus).norm() <= tol.match_eps) {
      found_plus = true;
      CHECK(p.kind == SubspaceKind::symmetric);
      CHECK(p.trace() == doctest::Approx(6.0));
    }
    if ((p.matrix - minus).norm() <= tol.match_eps) {
      found_minus = true;
      CHECK(p.kind == SubspaceKind::antisymmetric);
      CHECK(p.trace() == doctest::Approx(3.0));
    }
  }
  CHECK(found_plus);
  CHECK(found_minus);
}

TEST_CASE("sn isotypic projectors for qubits n=3: traces 4 and 4") {
  const TensorSpace space = TensorSpace::make(2, 3);
  const auto projs = sn_isotypic_projectors(space, tol, 5);
  REQUIRE(projs.size() == 2);
  CHECK(projs[0].trace() == doctest::Approx(4.0));
  CHECK(projs[1].trace() == doctest::Approx(4.0));
  int sym_count = 0, mixed_count = 0;
  for (const auto& p : projs) {
    if (p.kind == SubspaceKind::symmetric) ++sym_count;
    if (p.partition == std::vector<int>{2, 1}) ++mixed_count;
  }
  CHECK(sym_count == 1);
  CHECK(mixed_count == 1);
}

TEST_CASE("sn isotypic projectors for d=4, n=3: traces 20, 40, 4") {
  const TensorSpace space = TensorSpace::make(4, 3);
  const auto projs = sn_isotypic_projectors(space, tol, 5);
  REQUIRE(projs.size() == 3);
  std::vector<double> traces;
  for (const auto& p : projs) traces.push_back(p.trace());
  std::sort(traces.begin(), traces.end());
  CHECK(traces[0] == doctest::Approx(4.0));
  CHECK(traces[1] == doctest::Approx(20.0));
  CHECK(traces[2] == doctest::Approx(40.0));
  // hook-length cross-check: 2 * gl_dim((2,1), 4) = 2 * 20
  CHECK(sn_irrep_dim({2, 1}) == 2);
  CHECK(gl_irrep_dim({2, 1}, 4) == 20);
  CHECK(gl_irrep_dim({3}, 4) == 20);
  CHECK(gl_irrep_dim({1, 1, 1}, 4) == 4);
}

TEST_CASE("tensor_power_algebra basics") {
  const MatrixAlgebra scalars = generate_algebra({}, 2, tol);
  CHECK(tensor_power_algebra(scalars, 3).dim() == 1);

  const MatrixAlgebra diag_power = tensor_power_algebra(diag2(), 2);
  CHECK(diag_power.dim() == 4);
  CHECK(diag_power.ambient_dim == 4);
  // all elements diagonal
  for (int i = 0; i < diag_power.dim(); ++i) {
    const cmat b = diag_power.element(i);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (r != c) CHECK(std::abs(b(r, c)) <= tol.match_eps);
  }

  std::vector<cmat> lf_gens;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cmat e = cmat::Zero(2, 2);
      e(i, j) = 1.0;
      lf_gens.push_back(kron(e, cmat::Identity(2, 2)));
    }
  const MatrixAlgebra lf = generate_algebra(lf_gens, 4, tol);
  CHECK(tensor_power_algebra(lf, 2).dim() == 16);
}

TEST_CASE("collective_algebra basics") {
  // scalars stay scalars
  const MatrixAlgebra scalars = generate_algebra({}, 2, tol);
  CHECK(collective_algebra(scalars, 3, tol).dim() == 1);

  // diagonal on C^2, n=2: symmetrized diagonal words span dimension 3
  const MatrixAlgebra coll_diag = collective_algebra(diag2(), 2, tol);
  CHECK(coll_diag.dim() == 3);

  // full End(C^2), n=2: the symmetrized-span rank oracle gives 10
  // (= dim Comm{P(S_2)} on C^4, by Schur-Weyl)
  const MatrixAlgebra coll_full = collective_algebra(full2(), 2, tol);
  std::vector<cmat> words;
  const MatrixAlgebra power = tensor_power_algebra(full2(), 2);
  const TensorSpace space = TensorSpace::make(2, 2);
  for (int i = 0; i < power.dim(); ++i) words.push_back(symmetrize(space, power.element(i)));
  CHECK(coll_full.dim() == oracle::span_rank(words));
  CHECK(coll_full.dim() == 10);
}

TEST_CASE("collective_algebra is contained in Comm{P(S_n)} and in the tensor power") {
  for (int n : {2, 3}) {
    const TensorSpace space = TensorSpace::make(2, n);
    const MatrixAlgebra coll = collective_algebra(diag2(), n, tol);
    const MatrixAlgebra power = tensor_power_algebra(diag2(), n);
    for (int i = 0; i < coll.dim(); ++i) {
      const cmat b = coll.element(i);
      CHECK(power.residual(b) <= tol.match_eps);
      for (const auto& s : all_permutations(n))
        CHECK((apply_perm_conj(space, s, b) - b).norm() <= tol.match_eps);
    }
  }
}

TEST_CASE("collective algebra equals the closure of the collective generators") {
  // tested assumption: degree-1 collective elements generate the whole
  // permutationally invariant subalgebra
  for (const MatrixAlgebra& site : {diag2(), full2()}) {
    const MatrixAlgebra coll = collective_algebra(site, 2, tol);
    const MatrixAlgebra via_closure = generate_algebra(coll.generators, coll.ambient_dim, tol);
    CHECK(compare_spans(coll, via_closure, tol).equal);
  }
}

TEST_CASE("collective algebra equals tensor power intersected with perm-invariants") {
  // independent route: solve Swap X Swap = X in tensor-power coordinates via
  // an SVD null space
  const TensorSpace space = TensorSpace::make(2, 2);
  for (const MatrixAlgebra& site : {diag2(), full2()}) {
    const MatrixAlgebra coll = collective_algebra(site, 2, tol);
    const MatrixAlgebra power = tensor_power_algebra(site, 2);
    const int m = power.dim();
    Eigen::MatrixXcd cons(16, m);
    for (int i = 0; i < m; ++i) {
      const cmat b = power.element(i);
      cons.col(i) = vec_of(cmat(apply_perm_conj(space, {1, 0}, b) - b));
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(cons, Eigen::ComputeFullV);
    std::vector<cmat> inter;
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    for (int i = 0; i < m; ++i) {
      const double s = i < svd.singularValues().size() ? svd.singularValues()(i) : 0.0;
      if (smax > 0 && s > 1e-9 * smax) continue;
      cmat x = cmat::Zero(4, 4);
      for (int t = 0; t < m; ++t) x += svd.matrixV()(t, i) * power.element(t);
      inter.push_back(x);
    }
    std::vector<cmat> coll_basis;
    for (int i = 0; i < coll.dim(); ++i) coll_basis.push_back(coll.element(i));
    CHECK(oracle::span_rank(inter) == coll.dim());
    CHECK(oracle::spans_match(inter, coll_basis, tol.match_eps));
  }
}

TEST_CASE("joint_algebra basics") {
  // scalars: Alg{P(S_n)}
  const MatrixAlgebra scalars = generate_algebra({}, 2, tol);
  CHECK(joint_algebra(scalars, 2, tol).dim() == 2);
  CHECK(joint_algebra(scalars, 3, tol).dim() == 5);

  // diagonal on C^2, n=2: weight sectors 1+4+1
  CHECK(joint_algebra(diag2(), 2, tol).dim() == 6);

  // full: everything
  CHECK(joint_algebra(full2(), 2, tol).dim() == 16);

  // closure oracle agreement for the diagonal case
  const TensorSpace space = TensorSpace::make(2, 2);
  std::vector<cmat> gens;
  const MatrixAlgebra power = tensor_power_algebra(diag2(), 2);
  for (int i = 0; i < power.dim(); ++i) gens.push_back(power.element(i));
  for (const auto& s : all_permutations(2)) gens.push_back(perm_op(space, s).matrix);
  CHECK(oracle::span_rank(oracle::brute_force_closure(gens, 4)) == 6);
}

TEST_CASE("project_tensor_power matches elementwise span projection") {
  Rng rng(8);
  const MatrixAlgebra site = diag2();
  const MatrixAlgebra power = tensor_power_algebra(site, 3);
  const cmat x = random_gaussian(8, rng);
  const cmat via_sites = project_tensor_power(site, 3, x);
  const cmat via_span = power.project(x);
  CHECK((via_sites - via_span).norm() <= tol.match_eps);
}

TEST_CASE("sym projectors equal the 1-d isotypic projectors") {
  const TensorSpace space = TensorSpace::make(3, 3);
  const auto projs = sn_isotypic_projectors(space, tol, 5);
  const cmat plus = sym_projector(space, +1).matrix;
  const cmat minus = sym_projector(space, -1).matrix;
  bool saw_plus = false, saw_minus = false;
  for (const auto& p : projs) {
    if (p.kind == SubspaceKind::symmetric) {
      saw_plus = true;
      CHECK((p.matrix - plus).norm() <= tol.match_eps);
    }
    if (p.kind == SubspaceKind::antisymmetric) {
      saw_minus = true;
      CHECK((p.matrix - minus).norm() <= tol.match_eps);
    }
  }
  CHECK(saw_plus);
  CHECK(saw_minus);
}
