#pragma once

#include "duality.hpp"

#include <functional>
#include <map>
#include <string>

namespace swd {

struct PriorAtom {
  double weight = 0.0;
  cmat rho;
  std::map<std::string, double> labels;
};

/// Discrete prior ensemble over single-copy states with named real parameters.
struct Ensemble {
  std::vector<PriorAtom> atoms;
  int site_dim() const { return atoms.empty() ? 0 : static_cast<int>(atoms.front().rho.rows()); }
  void validate(const Tolerance& tol) const;
};

struct PovmElement {
  std::string label;
  cmat op;
};

struct Povm {
  std::vector<PovmElement> elements;
  int dim() const { return elements.empty() ? 0 : static_cast<int>(elements.front().op.rows()); }
  void validate(const Tolerance& tol) const;
  static Povm trivial(int dim);
};

struct QuantumChannel {
  std::vector<cmat> kraus;
  int dim() const { return kraus.empty() ? 0 : static_cast<int>(kraus.front().rows()); }
  cmat apply(const cmat& rho) const;
  cmat adjoint_apply(const cmat& m) const;
  cmat choi() const;
  void validate(const Tolerance& tol) const;
  static QuantumChannel identity(int dim);
  /// rho -> (1-r) rho + r sz rho sz on one qubit.
  static QuantumChannel dephasing(double r);
  /// Mixture of unitaries sum_k q_k U_k rho U_k^dag.
  static QuantumChannel unitary_mixture(const std::vector<double>& probs,
                                        const std::vector<cmat>& unitaries);
};

struct EstimationProblem {
  Ensemble prior;
  int copies = 1;
  QuantumChannel channel;  // on the n-copy space; empty kraus means identity
  std::vector<std::string> parameter_names;

  int site_dim() const { return prior.site_dim(); }
  long total_dim() const;
  cmat received_state(const PriorAtom& atom) const;  // E(rho^{(x)n})
  void validate(const Tolerance& tol) const;
};

struct ConditionalTable {
  std::vector<std::string> outcome_labels;
  std::vector<std::vector<double>> rows;  // rows[k][B] = q(B | atom k)
};

ConditionalTable conditionals(const EstimationProblem& problem, const Povm& m,
                              const Tolerance& tol);

using LabelPredicate = std::function<bool(const std::map<std::string, double>&)>;

std::vector<double> conditionals_given_parameter(const EstimationProblem& problem, const Povm& m,
                                                 const LabelPredicate& pred, const Tolerance& tol);

/// Distinct values of one named parameter across the prior, ascending.
std::vector<double> parameter_values(const EstimationProblem& problem, const std::string& name);

/// Conditional outcome distributions per distinct value of `name`.
std::vector<std::vector<double>> conditionals_by_parameter(const EstimationProblem& problem,
                                                           const Povm& m, const std::string& name,
                                                           const Tolerance& tol);

/// Replaces every element by its conditional expectation onto the symmetry
/// algebra (supply Comm{Q(H)} as an algebra).
Povm twirl_povm(const Povm& m, const MatrixAlgebra& symmetry_alg, const Tolerance& tol);

/// L_+ applied elementwise; output elements live in A^{(x)n}.
Povm localize_povm(const Povm& m, const MatrixAlgebra& a, int n, const Tolerance& tol,
                   uint64_t seed = 2);

struct AssumptionReport {
  double channel_noiseless_residual = 0.0;
  double distortion_noiseless_residual = 0.0;
  double distortion_covariance_residual = 0.0;
  bool ok(const Tolerance& tol) const {
    return channel_noiseless_residual <= tol.match_eps &&
           distortion_noiseless_residual <= tol.match_eps &&
           distortion_covariance_residual <= tol.match_eps;
  }
};

struct LocalizedPovm {
  Povm povm;
  AssumptionReport assumptions;
};

/// M' = L_+ o (N^dag)^{(x)n} o E^dag applied elementwise. Assumption checks
/// (channel noiseless on A^n, distortion noiseless on A and covariant) are
/// reported, not enforced.
LocalizedPovm generalized_localize(const Povm& m, const MatrixAlgebra& a, int n,
                                   const QuantumChannel& channel_e,
                                   const QuantumChannel& distortion_n, const Tolerance& tol,
                                   uint64_t seed = 2);

using CostFn = std::function<double(const std::string& outcome_label,
                                    const std::map<std::string, double>& true_labels)>;

double expected_cost(const EstimationProblem& problem, const Povm& m, const CostFn& cost,
                     const Tolerance& tol);

/// Bayes posterior mean of a named parameter for each outcome.
std::map<std::string, double> posterior_mean_estimates(const EstimationProblem& problem,
                                                       const Povm& m, const std::string& name,
                                                       const Tolerance& tol);

/// Expected squared error of the posterior-mean estimator built on m.
double posterior_mean_squared_error(const EstimationProblem& problem, const Povm& m,
                                    const std::string& name, const Tolerance& tol);

/// Mutual information (bits) between the measurement outcome and a parameter.
double mutual_information(const EstimationProblem& problem, const Povm& m,
                          const std::string& name, const Tolerance& tol);

struct HelstromResult {
  Povm povm;  // outcome labels "0" and "1"
  double error_probability = 0.0;
};
HelstromResult helstrom(const cmat& rho0, const cmat& rho1, double q0, double q1,
                        const Tolerance& tol);

using PostProcess = std::function<std::string(const std::vector<int>& eig_indices,
                                              const std::vector<double>& eigenvalues)>;

/// Product POVM of per-site spectral projectors of one observable, coarse
/// grained by the post-processing map.
Povm local_observable_strategy(const cmat& observable, int n, const PostProcess& post,
                               const Tolerance& tol);

struct WitnessReport {
  double unambiguous_probability = 0.0;  // u = 1 - sum_{b=1} w tr(Pi+ rho^n)
  double min_local_likelihood = 0.0;     // min over outcomes of min_b q(outcome|b)
  bool entangled_advantage(const Tolerance&) const {
    return unambiguous_probability > 0.0 && min_local_likelihood > 0.0;
  }
};

/// Purity witness for a binary problem: the symmetric-subspace measurement
/// detects b=1 unambiguously with probability u while every local count
/// outcome stays ambiguous. Requires a binary label "b" with the b=0 branch
/// pure.
WitnessReport symmetric_subspace_witness(const EstimationProblem& problem, const Tolerance& tol);

struct BipartiteDecomposition {
  Povm m_plus;
  Povm m_minus;
  Povm assembled;
};

/// Pair decomposition: twirl over the joint symmetry,
/// split through L+/L-, and reassemble block-diagonally.
BipartiteDecomposition bipartite_decompose(const Povm& m, const MatrixAlgebra& a,
                                           const Tolerance& tol, uint64_t seed = 2);

// ---- named example problems -------------------------------------------------

/// cos(a_b)|0> + e^{i theta} sin(a_b)|1> decision problem, theta on a K-point
/// grid, optional dephasing with strength r.
EstimationProblem qubit_decision_problem(double alpha0, double alpha1, int copies,
                                         int theta_points, double r);

struct QubitDecisionReport {
  double helstrom_error_discretized = 0.0;
  double helstrom_error_exact_twirl = 0.0;
  double local_error = 0.0;
  double pipelines_gap = 0.0;  // |discretized - exact|
  double difference = 0.0;     // |exact twirl - local|
};
QubitDecisionReport example_qubit_decision(double alpha0, double alpha1, int copies,
                                           int theta_points, double r, const Tolerance& tol);

/// Variant taking a precomputed Comm{Q(G_A)} for the exact-twirl pipeline
/// (it depends only on the copy count, so sweeps can reuse it).
QubitDecisionReport example_qubit_decision(double alpha0, double alpha1, int copies,
                                           int theta_points, double r, const Tolerance& tol,
                                           const MatrixAlgebra& collective_commutant);

struct LeftRightReport {
  double left_only_error = 0.0;
  double global_twirled_error = 0.0;
  double right_only_error = 0.0;
  double difference = 0.0;  // |left - global|
};
LeftRightReport example_leftright(int copies, const Tolerance& tol);

WitnessReport example_unambiguous(double alpha, double r, int copies, const Tolerance& tol);

/// Single-observable estimation (squared error on tr(sz rho)): the local
/// measure-each-copy strategy with posterior-mean post-processing against
/// localized versions of random competitor POVMs.
struct SingleObservableReport {
  double local_cost = 0.0;
  double max_localization_gap = 0.0;   // |cost(M) - cost(L+(M))| over competitors
  double min_competitor_cost = 0.0;
  bool local_optimal = false;          // local_cost <= every competitor cost
};
SingleObservableReport example_single_observable(int copies, int theta_points, int povm_seeds, const Tolerance& tol);

Povm random_povm(int dim, int outcomes, Rng& rng);

}  // namespace swd
