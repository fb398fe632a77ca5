#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace swd {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;
using Rng = std::mt19937_64;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct CapError : Error {
  using Error::Error;
};
struct InternalError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

/// Global tolerance policy. rank_eps is a relative singular-value cutoff for
/// span ranks; match_eps bounds operator-norm comparisons everywhere else.
struct Tolerance {
  double rank_eps = 1e-9;
  double match_eps = 1e-8;
  void validate() const;
};

cmat kron(const cmat& a, const cmat& b);
cplx hs_inner(const cmat& a, const cmat& b);

double fro_norm(const cmat& a);
bool all_finite(const cmat& a);
void require_square(const cmat& a, const std::string& where);
void require_finite(const cmat& a, const std::string& where);

cvec vec_of(const cmat& a);
cmat mat_of(const cvec& v, int d);

/// HS-orthonormal basis of a matrix subspace, held as columns of a d^2 x m
/// matrix of vectorized elements. Supports incremental growth (closure loops)
/// and fast projections.
class SpanBasis {
 public:
  explicit SpanBasis(int matrix_dim);
  SpanBasis(int matrix_dim, Eigen::MatrixXcd cols);

  int matrix_dim() const { return dim_; }
  int size() const { return size_; }
  Eigen::Map<const Eigen::MatrixXcd> cols() const {
    return {storage_.data(), storage_.rows(), size_};
  }
  cmat element(int i) const;

  // Gram-Schmidt with one re-orthogonalization pass; returns true if the
  // candidate enlarged the span.
  bool absorb(const cmat& m, double rel_cutoff);
  bool absorb_vec(cvec v, double rel_cutoff);

  cmat project(const cmat& x) const;
  double residual(const cmat& x) const;
  bool is_full() const { return size_ == dim_ * dim_; }

 private:
  void ensure_capacity(int want);
  int dim_;
  int size_ = 0;
  Eigen::MatrixXcd storage_;
};

std::vector<cmat> orthonormal_span(const std::vector<cmat>& mats, const Tolerance& tol);
SpanBasis span_basis_of(const std::vector<cmat>& mats, const Tolerance& tol);

struct HermEig {
  rvec eigenvalues;   // ascending
  cmat eigenvectors;  // unitary columns
};
HermEig herm_eig(const cmat& h, const Tolerance& tol);

/// exp(i*h) for Hermitian h.
cmat unitary_exp_i(const cmat& h, const Tolerance& tol);

/// Joint fixed-point space {X : B X B^dag = X for every unitary B}, returned
/// as an HS-orthonormal basis. Pairs carry (B, B^dag) and are validated.
std::vector<cmat> fixed_point_space(const std::vector<std::pair<cmat, cmat>>& maps,
                                    const Tolerance& tol);
std::vector<cmat> fixed_point_space(const std::vector<cmat>& unitaries, const Tolerance& tol);

cmat random_gaussian(int d, Rng& rng);
cmat random_hermitian(int d, Rng& rng);
cmat random_unitary(int d, Rng& rng);
cmat random_density(int d, Rng& rng);

/// Eigenvalue clustering: indices grouped so that consecutive sorted values
/// within a group differ by at most gap.
std::vector<std::vector<int>> cluster_values(const rvec& sorted_vals, double gap);

}  // namespace swd
