#pragma once

#include "tensorrep.hpp"

namespace swd {

enum class Verdict { equal, lhs_strictly_larger, rhs_strictly_larger, incomparable };

std::string verdict_name(Verdict v);

struct DualityReport {
  int lhs_dim = 0;
  int rhs_dim = 0;
  bool mutual_containment = false;
  double max_residual = 0.0;
  Verdict verdict = Verdict::incomparable;
  double lhs_in_rhs_residual = 0.0;
  double rhs_in_lhs_residual = 0.0;
  std::string detail;
};

DualityReport compare_as_report(const MatrixAlgebra& lhs, const MatrixAlgebra& rhs,
                                const Tolerance& tol);

/// Gauge duality check: Comm{Q(G_A)} against Alg{A^{(x)n}, P(S_n)}.
DualityReport verify_duality(const MatrixAlgebra& a, int n, const Tolerance& tol);

/// Duality restricted to the symmetric (+1) or antisymmetric (-1) subspace:
/// the compressed collective algebras of A and of its commutant must be one
/// another's commutants there.
DualityReport verify_restricted_duality(const MatrixAlgebra& a, int n, int sign,
                                        const Tolerance& tol);

/// Fixed instance on the two-dimensional S_3 isotypic component of
/// (C^4)^{(x)3} where the compressed duality fails strictly.
DualityReport lambda2_counterexample(const Tolerance& tol);

/// Companion check on the symmetric component of the same instance, where the
/// duality does hold.
DualityReport lambda2_symmetric_control(const Tolerance& tol);

/// Fixed instance: collective spin-1 rotations on (C^3)^{(x)2}. The group is
/// not a gauge group and its collective commutant strictly exceeds the
/// permutation algebra.
DualityReport nongauge_counterexample(const Tolerance& tol);

/// The unital completely positive map promoting global gauge symmetry to
/// local symmetry on the +/- subspace.
struct LpmChannel {
  int sign = +1;
  int copies = 0;
  MatrixAlgebra site_algebra;
  std::vector<cmat> central_projectors;
  std::vector<double> coefficients;  // p_mu, expansion-coefficient convention
  cmat sym_proj;
  cmat support;  // sum of contributing P_mu

  cmat apply(const cmat& m) const;
  cmat choi() const;  // dim (d^n)^2; hermitian PSD within tolerance
  long total_dim() const { return sym_proj.rows(); }
};

LpmChannel build_lpm(const MatrixAlgebra& a, int n, int sign, const Tolerance& tol,
                     uint64_t seed = 2);

/// Operators invariant under collective noise whose gauge group is that of
/// `a`: density operators inside this algebra pass through the noise intact.
MatrixAlgebra noiseless_operators(const MatrixAlgebra& a, int n, const Tolerance& tol);

/// Isometry onto the range of a projector (columns span the range).
cmat range_isometry(const cmat& projector, const Tolerance& tol);

}  // namespace swd
