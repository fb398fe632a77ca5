#pragma once

#include "algebra.hpp"

namespace swd {

inline constexpr long kDefaultDimCap = 4096;

/// (C^d)^{(x) n} bookkeeping.
struct TensorSpace {
  int site_dim = 0;
  int copies = 0;
  long total_dim = 0;

  static TensorSpace make(int d, int n, long cap = kDefaultDimCap);
};

using Perm = std::vector<int>;  // s[k] = image of position k, 0-based

std::vector<Perm> all_permutations(int n);
Perm compose(const Perm& s, const Perm& t);  // (s o t)(k) = s(t(k))
int perm_parity(const Perm& s);              // 0 even, 1 odd

struct PermOperator {
  Perm perm;
  cmat matrix;
};

/// Canonical representation: the tensor factor at position k moves to s(k).
PermOperator perm_op(const TensorSpace& space, const Perm& s);
std::vector<long> perm_index_map(const TensorSpace& space, const Perm& s);
cmat apply_perm_conj(const TensorSpace& space, const Perm& s, const cmat& x);  // P x P^dag

enum class SubspaceKind { symmetric, antisymmetric, isotypic };

struct SubspaceProjector {
  SubspaceKind kind = SubspaceKind::isotypic;
  std::vector<int> partition;  // S_n irrep label when known, else empty
  cmat matrix;
  double trace() const { return matrix.trace().real(); }
};

SubspaceProjector sym_projector(const TensorSpace& space, int sign);

/// (1/n!) sum_s P(s) X P(s)^dag.
cmat symmetrize(const TensorSpace& space, const cmat& x);

std::vector<SubspaceProjector> sn_isotypic_projectors(const TensorSpace& space,
                                                      const Tolerance& tol, uint64_t seed);

MatrixAlgebra tensor_power_algebra(const MatrixAlgebra& alg, int n, long cap = kDefaultDimCap);

/// Permutationally invariant subalgebra of alg^{(x) n}; equals the algebra
/// spanned by the collective action of the group spanning alg.
MatrixAlgebra collective_algebra(const MatrixAlgebra& alg, int n, const Tolerance& tol);

/// Algebra generated by alg^{(x) n} together with the permutation operators.
MatrixAlgebra joint_algebra(const MatrixAlgebra& alg, int n, const Tolerance& tol);

/// HS projection of x onto alg^{(x) n}: the per-site conditional expectation
/// applied on every factor (the n-fold twirl over the gauge group of alg).
cmat project_tensor_power(const MatrixAlgebra& site_alg, int n, const cmat& x);

// Partition utilities for S_n irrep labels.
std::vector<std::vector<int>> partitions_of(int n);
long sn_irrep_dim(const std::vector<int>& partition);          // hook length formula
long gl_irrep_dim(const std::vector<int>& partition, int d);   // hook content formula

}  // namespace swd
