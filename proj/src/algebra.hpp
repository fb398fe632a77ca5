#pragma once

#include "matcore.hpp"

#include <optional>

namespace swd {

/// Finite-dimensional von Neumann algebra on C^d, carried as an
/// HS-orthonormal basis plus the generators it was built from.
struct MatrixAlgebra {
  int ambient_dim = 0;
  SpanBasis basis;
  std::vector<cmat> generators;

  MatrixAlgebra() : basis(1) {}
  MatrixAlgebra(int d, SpanBasis b, std::vector<cmat> gens)
      : ambient_dim(d), basis(std::move(b)), generators(std::move(gens)) {}

  int dim() const { return basis.size(); }
  cmat element(int i) const { return basis.element(i); }
  cmat project(const cmat& x) const { return basis.project(x); }
  double residual(const cmat& x) const { return basis.residual(x); }
  bool is_full() const { return basis.is_full(); }

  cmat identity() const { return cmat::Identity(ambient_dim, ambient_dim); }

  /// Checks the von Neumann invariants: contains I, adjoint-closed,
  /// product-closed. Returns the worst residual found.
  double closure_defect(int product_samples = 64) const;
  void require_valid(const Tolerance& tol) const;

  /// Hermitian elements spanning the algebra over R (same count as dim()).
  std::vector<cmat> hermitian_spanning_set() const;

  /// A short list of elements generating the algebra: the stored generators
  /// when present, otherwise seeded random basis combinations.
  std::vector<cmat> generating_set(uint64_t seed = 0x9e3779b9ull) const;
};

/// Unital span of the given matrices, with no product closure. This is the
/// entry point for gauge tests on raw spans.
MatrixAlgebra span_algebra(const std::vector<cmat>& gens, int d, const Tolerance& tol);

/// Smallest unital adjoint-closed algebra containing the generators.
MatrixAlgebra generate_algebra(const std::vector<cmat>& gens, int d, const Tolerance& tol);

/// Closure used internally when the seed span is large: `seed` matrices are
/// absorbed first, products are taken against `multipliers` only, and the
/// result is validated to be closed under products with the seed.
MatrixAlgebra closure_algebra(const std::vector<cmat>& seed, const std::vector<cmat>& multipliers,
                              int d, const Tolerance& tol);

MatrixAlgebra commutant(const MatrixAlgebra& alg, const Tolerance& tol);

struct GaugeReport {
  bool is_gauge = false;
  int bicommutant_dim = 0;
  int input_dim = 0;
  double max_residual = 0.0;
};
GaugeReport is_gauge_pair(const MatrixAlgebra& alg, const Tolerance& tol);

MatrixAlgebra center(const MatrixAlgebra& alg, const Tolerance& tol);

std::vector<cmat> minimal_central_projectors(const MatrixAlgebra& alg, const Tolerance& tol,
                                             uint64_t seed);

/// Wedderburn data: block sizes (m_J, n_J) plus the unitary that conjugates
/// every algebra element to block-diagonal M_{m_J} (x) I_{n_J} form.
struct BlockStructure {
  std::vector<std::pair<int, int>> blocks;  // (m_J, n_J), canonically ordered
  cmat basis_change;
};
BlockStructure block_decompose(const MatrixAlgebra& alg, const Tolerance& tol, uint64_t seed = 1);

/// HS-orthogonal projection of x onto the algebra span; realizes the uniform
/// twirl over the algebra's gauge group.
cmat conditional_expectation(const MatrixAlgebra& alg, const cmat& x, const Tolerance& tol);

struct SpanComparison {
  bool equal = false;
  double lhs_in_rhs = 0.0;  // max residual of lhs basis under rhs projection
  double rhs_in_lhs = 0.0;
};
SpanComparison compare_spans(const MatrixAlgebra& lhs, const MatrixAlgebra& rhs,
                             const Tolerance& tol);

/// Unitaries exp(i h) for h running over a Hermitian generating family,
/// scaled so eigenphases cannot wrap. Their joint fixed space under
/// conjugation is the commutant of the algebra.
std::vector<cmat> unitary_spanning_set(const MatrixAlgebra& alg, const Tolerance& tol,
                                       uint64_t seed = 0xabcdef12ull, int extra_random = 4);

}  // namespace swd
