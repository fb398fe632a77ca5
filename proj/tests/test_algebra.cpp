#include "algebra.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace swd;

namespace {
const Tolerance tol{};

MatrixAlgebra diagonal_algebra(int d) {
  std::vector<cmat> gens;
  cmat g = cmat::Zero(d, d);
  for (int i = 0; i < d; ++i) g(i, i) = i + 1;
  gens.push_back(g);
  return generate_algebra(gens, d, tol);
}

MatrixAlgebra full_algebra(int d) {
  std::vector<cmat> gens;
  for (int i = 0; i + 1 < d; ++i) {
    cmat e = cmat::Zero(d, d);
    e(i, i + 1) = 1.0;
    gens.push_back(e);
  }
  return generate_algebra(gens, d, tol);
}

MatrixAlgebra left_factor_algebra() {
  std::vector<cmat> gens;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cmat e = cmat::Zero(2, 2);
      e(i, j) = 1.0;
      gens.push_back(kron(e, cmat::Identity(2, 2)));
    }
  return generate_algebra(gens, 4, tol);
}

}  // namespace

TEST_CASE("generate_algebra basics") {
  CHECK(generate_algebra({}, 3, tol).dim() == 1);  // scalars

  const MatrixAlgebra diag = generate_algebra({oracle::pauli_z()}, 2, tol);
  CHECK(diag.dim() == 2);

  const MatrixAlgebra full = generate_algebra({oracle::pauli_x(), oracle::pauli_z()}, 2, tol);
  CHECK(full.dim() == 4);
  // brute-force closure oracle agrees
  CHECK(oracle::span_rank(oracle::brute_force_closure({oracle::pauli_x(), oracle::pauli_z()}, 2)) == 4);
}

TEST_CASE("generated algebra satisfies the vN invariants") {
  Rng rng(2024);
  const cmat g1 = random_gaussian(3, rng);
  const MatrixAlgebra alg = generate_algebra({g1}, 3, tol);
  CHECK(alg.closure_defect() <= tol.match_eps);
  alg.require_valid(tol);
  // matches brute-force closure rank
  CHECK(oracle::span_rank(oracle::brute_force_closure({g1}, 3)) == alg.dim());
}

TEST_CASE("commutant basics") {
  const MatrixAlgebra scalars = generate_algebra({}, 3, tol);
  CHECK(commutant(scalars, tol).dim() == 9);

  const MatrixAlgebra diag = generate_algebra({oracle::pauli_z()}, 2, tol);
  const MatrixAlgebra diag_comm = commutant(diag, tol);
  CHECK(diag_comm.dim() == 2);
  CHECK(compare_spans(diag, diag_comm, tol).equal);
}

TEST_CASE("commutant of collective spin-1 has dimension 3") {
  // Alg{Q(spin-1 SU(2))} on (C^3)^(x)2
  const cmat jx = oracle::spin1_jx(), jy = oracle::spin1_jy(), jz = oracle::spin1_jz();
  const cmat i3 = cmat::Identity(3, 3);
  std::vector<cmat> coll;
  for (const cmat& j : {jx, jy, jz}) coll.push_back(kron(j, i3) + kron(i3, j));
  const MatrixAlgebra alg = generate_algebra(coll, 9, tol);
  const MatrixAlgebra comm = commutant(alg, tol);
  CHECK(comm.dim() == 3);
}

TEST_CASE("commutant agrees with the stacked null-space oracle on small dims") {
  Rng rng(5150);
  for (int d : {2, 3}) {
    const cmat g = random_gaussian(d, rng);
    const MatrixAlgebra alg = generate_algebra({g}, d, tol);
    const MatrixAlgebra comm = commutant(alg, tol);
    std::vector<cmat> alg_basis;
    for (int i = 0; i < alg.dim(); ++i) alg_basis.push_back(alg.element(i));
    const auto oracle_comm = oracle::commutant_null_space(alg_basis, d);
    CHECK(static_cast<int>(oracle_comm.size()) == comm.dim());
    std::vector<cmat> lib_basis;
    for (int i = 0; i < comm.dim(); ++i) lib_basis.push_back(comm.element(i));
    CHECK(oracle::spans_match(lib_basis, oracle_comm, tol.match_eps));
  }
}

TEST_CASE("bicommutant returns the original algebra") {
  Rng rng(33);
  const cmat g = random_gaussian(4, rng);
  const MatrixAlgebra alg = generate_algebra({g}, 4, tol);
  const MatrixAlgebra twice = commutant(commutant(alg, tol), tol);
  CHECK(compare_spans(alg, twice, tol).equal);
}

TEST_CASE("commutant of a tensor product factorizes") {
  const MatrixAlgebra a1 = generate_algebra({oracle::pauli_z()}, 2, tol);
  const MatrixAlgebra a2 = full_algebra(2);
  std::vector<cmat> prod_gens;
  for (const auto& g : a1.generators) prod_gens.push_back(kron(g, cmat::Identity(2, 2)));
  for (const auto& g : a2.generators) prod_gens.push_back(kron(cmat::Identity(2, 2), g));
  const MatrixAlgebra prod = generate_algebra(prod_gens, 4, tol);
  const MatrixAlgebra lhs = commutant(prod, tol);

  const MatrixAlgebra c1 = commutant(a1, tol);
  const MatrixAlgebra c2 = commutant(a2, tol);
  std::vector<cmat> rhs_gens;
  for (int i = 0; i < c1.dim(); ++i)
    for (int j = 0; j < c2.dim(); ++j) rhs_gens.push_back(kron(c1.element(i), c2.element(j)));
  const MatrixAlgebra rhs = generate_algebra(rhs_gens, 4, tol);
  CHECK(compare_spans(lhs, rhs, tol).equal);
}

TEST_CASE("is_gauge_pair basics") {
  const GaugeReport diag = is_gauge_pair(span_algebra({oracle::pauli_z()}, 2, tol), tol);
  CHECK(diag.is_gauge);
  CHECK(diag.bicommutant_dim == 2);

  // full End(C^2) fed with a spanning generator set
  const GaugeReport full = is_gauge_pair(
      span_algebra({oracle::pauli_x(), oracle::pauli_y(), oracle::pauli_z()}, 2, tol), tol);
  CHECK(full.is_gauge);
  CHECK(full.bicommutant_dim == 4);

  // span{I, Jx, Jy, Jz}: the spin-1 Lie span is not product-closed and its
  // bicommutant is everything
  const GaugeReport spin1 = is_gauge_pair(
      span_algebra({oracle::spin1_jx(), oracle::spin1_jy(), oracle::spin1_jz()}, 3, tol), tol);
  CHECK_FALSE(spin1.is_gauge);
  CHECK(spin1.bicommutant_dim == 9);
  CHECK(spin1.input_dim == 4);
}

TEST_CASE("center basics") {
  CHECK(center(full_algebra(3), tol).dim() == 1);

  const MatrixAlgebra diag = generate_algebra({oracle::pauli_z()}, 2, tol);
  const MatrixAlgebra z = center(diag, tol);
  CHECK(z.dim() == 2);
  CHECK(compare_spans(z, diag, tol).equal);

  CHECK(center(left_factor_algebra(), tol).dim() == 1);
  // direct commutator check
  const MatrixAlgebra lf = left_factor_algebra();
  const MatrixAlgebra zc = center(lf, tol);
  for (int i = 0; i < zc.dim(); ++i)
    for (int j = 0; j < lf.dim(); ++j)
      CHECK((zc.element(i) * lf.element(j) - lf.element(j) * zc.element(i)).norm() <=
            tol.match_eps);
}

TEST_CASE("minimal_central_projectors basics") {
  const auto full = minimal_central_projectors(full_algebra(3), tol, 7);
  REQUIRE(full.size() == 1);
  CHECK((full[0] - cmat::Identity(3, 3)).norm() <= tol.match_eps);

  const MatrixAlgebra diag = generate_algebra({oracle::pauli_z()}, 2, tol);
  auto projs = minimal_central_projectors(diag, tol, 7);
  REQUIRE(projs.size() == 2);
  cmat sum = projs[0] + projs[1];
  CHECK((sum - cmat::Identity(2, 2)).norm() <= tol.match_eps);
  for (const auto& p : projs) {
    CHECK((p * p - p).norm() <= tol.match_eps);
    CHECK(std::abs(p.trace().real() - 1.0) <= tol.match_eps);
  }
  CHECK((projs[0] * projs[1]).norm() <= tol.match_eps);
}

TEST_CASE("block_decompose basics") {
  const BlockStructure full = block_decompose(full_algebra(3), tol, 3);
  REQUIRE(full.blocks.size() == 1);
  CHECK(full.blocks[0] == std::pair<int, int>{3, 1});

  const BlockStructure diag = block_decompose(generate_algebra({oracle::pauli_z()}, 2, tol), tol, 3);
  REQUIRE(diag.blocks.size() == 2);
  CHECK(diag.blocks[0] == std::pair<int, int>{1, 1});
  CHECK(diag.blocks[1] == std::pair<int, int>{1, 1});

  const BlockStructure lf = block_decompose(left_factor_algebra(), tol, 3);
  REQUIRE(lf.blocks.size() == 1);
  CHECK(lf.blocks[0] == std::pair<int, int>{2, 2});
}

TEST_CASE("block data matches commutant dimensions") {
  // dim(alg) = sum m^2, dim(comm) = sum n^2, sum m*n = ambient
  Rng rng(77);
  const cmat h = random_hermitian(4, rng);
  for (const MatrixAlgebra& alg :
       {left_factor_algebra(), diagonal_algebra(4), generate_algebra({h}, 4, tol)}) {
    const BlockStructure bs = block_decompose(alg, tol, 11);
    long sum_m2 = 0, sum_n2 = 0, sum_mn = 0;
    for (const auto& [m, n] : bs.blocks) {
      sum_m2 += static_cast<long>(m) * m;
      sum_n2 += static_cast<long>(n) * n;
      sum_mn += static_cast<long>(m) * n;
    }
    CHECK(sum_mn == alg.ambient_dim);
    CHECK(sum_m2 == alg.dim());
    CHECK(sum_n2 == commutant(alg, tol).dim());
  }
}

TEST_CASE("conditional_expectation basics") {
  Rng rng(13);
  const cmat x = random_gaussian(2, rng);

  // scalars: X -> tr(X)/d I
  const MatrixAlgebra scalars = generate_algebra({}, 2, tol);
  const cmat onto_scalars = conditional_expectation(scalars, x, tol);
  CHECK((onto_scalars - (x.trace() / 2.0) * cmat::Identity(2, 2)).norm() <= tol.match_eps);

  // diagonal algebra: X -> diag(X)
  const MatrixAlgebra diag = generate_algebra({oracle::pauli_z()}, 2, tol);
  const cmat onto_diag = conditional_expectation(diag, x, tol);
  CHECK(std::abs(onto_diag(0, 0) - x(0, 0)) <= tol.match_eps);
  CHECK(std::abs(onto_diag(1, 1) - x(1, 1)) <= tol.match_eps);
  CHECK(std::abs(onto_diag(0, 1)) <= tol.match_eps);

  // left factor: X -> (partial trace over the right factor (x) I)/2
  const MatrixAlgebra lf = left_factor_algebra();
  const cmat y = random_gaussian(4, rng);
  cmat ptr = cmat::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) ptr(i, j) += y(i * 2 + k, j * 2 + k);
  const cmat expect = kron(ptr, cmat::Identity(2, 2)) / 2.0;
  CHECK((conditional_expectation(lf, y, tol) - expect).norm() <= tol.match_eps);
}

TEST_CASE("conditional_expectation is an idempotent self-adjoint projection") {
  Rng rng(17);
  const MatrixAlgebra diag = generate_algebra({oracle::pauli_z()}, 2, tol);
  const cmat x = random_gaussian(2, rng), y = random_gaussian(2, rng);
  const cmat px = conditional_expectation(diag, x, tol);
  CHECK((conditional_expectation(diag, px, tol) - px).norm() <= tol.match_eps);
  // self-adjoint with respect to hs_inner
  const cmat py = conditional_expectation(diag, y, tol);
  CHECK(std::abs(hs_inner(px, y) - hs_inner(x, py)) <= tol.match_eps);
  // trace preserving and unital
  CHECK(std::abs(px.trace().real() - x.trace().real()) <= tol.match_eps);
  CHECK(std::abs(px.trace().imag() - x.trace().imag()) <= tol.match_eps);
  const cmat id = cmat::Identity(2, 2);
  CHECK((conditional_expectation(diag, id, tol) - id).norm() <= tol.match_eps);
  // positivity on random PSD inputs
  for (int t = 0; t < 8; ++t) {
    const cmat rho = random_density(2, rng);
    Eigen::SelfAdjointEigenSolver<cmat> es(conditional_expectation(diag, rho, tol));
    CHECK(es.eigenvalues().minCoeff() >= -tol.match_eps);
  }
}

TEST_CASE("twirl as projection matches the uniform grid average") {
  // diagonal-algebra gauge group on C^2: 100x100 phase grid, exact for the
  // low trigonometric degree of conjugation
  Rng rng(19);
  const MatrixAlgebra diag = generate_algebra({oracle::pauli_z()}, 2, tol);
  const cmat x = random_gaussian(2, rng);
  const cmat projected = conditional_expectation(diag, x, tol);
  cmat averaged = cmat::Zero(2, 2);
  const int k = 100;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      cmat u = cmat::Zero(2, 2);
      u(0, 0) = std::exp(cplx(0, 2 * M_PI * a / k));
      u(1, 1) = std::exp(cplx(0, 2 * M_PI * b / k));
      averaged += u * x * u.adjoint();
    }
  averaged /= static_cast<double>(k) * k;
  CHECK((projected - averaged).norm() <= tol.match_eps);
}

TEST_CASE("closure of a huge generator count stays sane") {
  // random 4x4 matrices generate everything
  Rng rng(99);
  const MatrixAlgebra alg = generate_algebra({random_gaussian(4, rng), random_gaussian(4, rng)}, 4, tol);
  CHECK(alg.dim() == 16);
  CHECK(alg.is_full());
}
