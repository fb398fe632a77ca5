#include "estimation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace swd {

namespace {

constexpr double kPi = 3.14159265358979323846;

cmat kron_power(const cmat& a, int n) {
  cmat out = a;
  for (int k = 1; k < n; ++k) out = kron(out, a);
  return out;
}

cmat pauli_z2() {
  cmat z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

}  // namespace

void Ensemble::validate(const Tolerance& tol) const {
  if (atoms.empty()) throw ValidationError("Ensemble: empty prior");
  const int d = site_dim();
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (atom.rho.rows() != d || atom.rho.cols() != d)
      throw DimensionError("Ensemble: mixed state dimensions");
    require_finite(atom.rho, "Ensemble");
    if (atom.weight < -tol.match_eps) throw ValidationError("Ensemble: negative weight");
    total += atom.weight;
    if ((atom.rho - atom.rho.adjoint()).norm() > tol.match_eps)
      throw ValidationError("Ensemble: state not Hermitian");
    Eigen::SelfAdjointEigenSolver<cmat> es(atom.rho);
    if (es.eigenvalues().minCoeff() < -tol.match_eps)
      throw ValidationError("Ensemble: state not PSD");
    if (std::abs(atom.rho.trace().real() - 1.0) > tol.match_eps)
      throw ValidationError("Ensemble: state trace differs from 1");
  }
  if (std::abs(total - 1.0) > tol.match_eps)
    throw ValidationError("Ensemble: weights sum to " + std::to_string(total));
}

void Povm::validate(const Tolerance& tol) const {
  if (elements.empty()) throw ValidationError("Povm: no outcomes");
  const int d = dim();
  cmat sum = cmat::Zero(d, d);
  for (const auto& e : elements) {
    if (e.op.rows() != d || e.op.cols() != d) throw DimensionError("Povm: mixed dimensions");
    if ((e.op - e.op.adjoint()).norm() > tol.match_eps)
      throw ValidationError("Povm: element not Hermitian");
    Eigen::SelfAdjointEigenSolver<cmat> es(e.op);
    if (es.eigenvalues().minCoeff() < -tol.match_eps)
      throw ValidationError("Povm: element not PSD, min eig " +
                            std::to_string(es.eigenvalues().minCoeff()));
    sum += e.op;
  }
  if ((sum - cmat::Identity(d, d)).norm() > tol.match_eps)
    throw ValidationError("Povm: elements do not sum to identity");
}

Povm Povm::trivial(int dim) {
  Povm m;
  m.elements.push_back({"all", cmat::Identity(dim, dim)});
  return m;
}

cmat QuantumChannel::apply(const cmat& rho) const {
  if (kraus.empty()) return rho;
  cmat out = cmat::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) out.noalias() += k * rho * k.adjoint();
  return out;
}

cmat QuantumChannel::adjoint_apply(const cmat& m) const {
  if (kraus.empty()) return m;
  cmat out = cmat::Zero(m.rows(), m.cols());
  for (const auto& k : kraus) out.noalias() += k.adjoint() * m * k;
  return out;
}

cmat QuantumChannel::choi() const {
  const int d = dim();
  cmat choi = cmat::Zero(static_cast<long>(d) * d, static_cast<long>(d) * d);
  cmat e = cmat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      e(i, j) = 1.0;
      const cmat li = apply(e);
      e(i, j) = 0.0;
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) choi(static_cast<long>(i) * d + r, static_cast<long>(j) * d + c) = li(r, c);
    }
  return choi;
}

void QuantumChannel::validate(const Tolerance& tol) const {
  if (kraus.empty()) return;
  const int d = dim();
  cmat sum = cmat::Zero(d, d);
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d) throw DimensionError("QuantumChannel: mixed dimensions");
    sum.noalias() += k.adjoint() * k;
  }
  if ((sum - cmat::Identity(d, d)).norm() > tol.match_eps)
    throw ValidationError("QuantumChannel: not trace preserving");
  Eigen::SelfAdjointEigenSolver<cmat> es(choi());
  if (es.eigenvalues().minCoeff() < -tol.match_eps)
    throw ValidationError("QuantumChannel: Choi matrix not PSD");
}

QuantumChannel QuantumChannel::identity(int dim) {
  QuantumChannel ch;
  ch.kraus.push_back(cmat::Identity(dim, dim));
  return ch;
}

QuantumChannel QuantumChannel::dephasing(double r) {
  if (r < 0.0 || r > 1.0) throw ValidationError("dephasing: r outside [0,1]");
  QuantumChannel ch;
  ch.kraus.push_back(std::sqrt(1.0 - r) * cmat::Identity(2, 2));
  ch.kraus.push_back(std::sqrt(r) * pauli_z2());
  return ch;
}

QuantumChannel QuantumChannel::unitary_mixture(const std::vector<double>& probs,
                                               const std::vector<cmat>& unitaries) {
  if (probs.size() != unitaries.size() || probs.empty())
    throw ValidationError("unitary_mixture: size mismatch");
  QuantumChannel ch;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < 0) throw ValidationError("unitary_mixture: negative probability");
    ch.kraus.push_back(std::sqrt(probs[i]) * unitaries[i]);
  }
  return ch;
}

long EstimationProblem::total_dim() const {
  long t = 1;
  for (int k = 0; k < copies; ++k) t *= site_dim();
  return t;
}

cmat EstimationProblem::received_state(const PriorAtom& atom) const {
  return channel.apply(kron_power(atom.rho, copies));
}

void EstimationProblem::validate(const Tolerance& tol) const {
  prior.validate(tol);
  if (copies < 1) throw ValidationError("EstimationProblem: copies must be >= 1");
  TensorSpace::make(site_dim(), copies);
  if (!channel.kraus.empty() && channel.dim() != total_dim())
    throw DimensionError("EstimationProblem: channel dimension differs from (site dim)^n");
}

ConditionalTable conditionals(const EstimationProblem& problem, const Povm& m,
                              const Tolerance& tol) {
  problem.validate(tol);
  m.validate(tol);
  if (m.dim() != problem.total_dim())
    throw DimensionError("conditionals: POVM dimension differs from the n-copy space");
  ConditionalTable table;
  for (const auto& e : m.elements) table.outcome_labels.push_back(e.label);
  for (const auto& atom : problem.prior.atoms) {
    const cmat state = problem.received_state(atom);
    std::vector<double> row;
    double total = 0.0;
    for (const auto& e : m.elements) {
      const double q = (e.op * state).trace().real();
      row.push_back(q);
      total += q;
    }
    if (std::abs(total - 1.0) > tol.match_eps)
      throw InternalError("conditionals: row sums to " + std::to_string(total));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<double> conditionals_given_parameter(const EstimationProblem& problem, const Povm& m,
                                                 const LabelPredicate& pred, const Tolerance& tol) {
  const ConditionalTable table = conditionals(problem, m, tol);
  std::vector<double> acc(m.elements.size(), 0.0);
  double mass = 0.0;
  for (size_t k = 0; k < problem.prior.atoms.size(); ++k) {
    const auto& atom = problem.prior.atoms[k];
    if (!pred(atom.labels)) continue;
    mass += atom.weight;
    for (size_t b = 0; b < acc.size(); ++b) acc[b] += atom.weight * table.rows[k][b];
  }
  if (mass <= tol.match_eps)
    throw ValidationError("conditionals_given_parameter: predicate selects zero prior mass");
  for (auto& v : acc) v /= mass;
  return acc;
}

std::vector<double> parameter_values(const EstimationProblem& problem, const std::string& name) {
  std::set<double> vals;
  for (const auto& atom : problem.prior.atoms) {
    auto it = atom.labels.find(name);
    if (it == atom.labels.end())
      throw ValidationError("parameter_values: label '" + name + "' missing on a prior atom");
    vals.insert(it->second);
  }
  return {vals.begin(), vals.end()};
}

std::vector<std::vector<double>> conditionals_by_parameter(const EstimationProblem& problem,
                                                           const Povm& m, const std::string& name,
                                                           const Tolerance& tol) {
  std::vector<std::vector<double>> out;
  for (double v : parameter_values(problem, name)) {
    out.push_back(conditionals_given_parameter(
        problem, m,
        [&](const std::map<std::string, double>& labels) {
          return std::abs(labels.at(name) - v) < 1e-12;
        },
        tol));
  }
  return out;
}

Povm twirl_povm(const Povm& m, const MatrixAlgebra& symmetry_alg, const Tolerance& tol) {
  m.validate(tol);
  Povm out;
  for (const auto& e : m.elements)
    out.elements.push_back({e.label, conditional_expectation(symmetry_alg, e.op, tol)});
  out.validate(tol);
  return out;
}

Povm localize_povm(const Povm& m, const MatrixAlgebra& a, int n, const Tolerance& tol,
                   uint64_t seed) {
  m.validate(tol);
  const LpmChannel lp = build_lpm(a, n, +1, tol, seed);
  Povm out;
  for (const auto& e : m.elements) out.elements.push_back({e.label, lp.apply(e.op)});
  out.validate(tol);
  return out;
}

LocalizedPovm generalized_localize(const Povm& m, const MatrixAlgebra& a, int n,
                                   const QuantumChannel& channel_e,
                                   const QuantumChannel& distortion_n, const Tolerance& tol,
                                   uint64_t seed) {
  m.validate(tol);
  AssumptionReport rep;

  // channel noiseless on A^{(x)n}: its adjoint must fix the tensor-power span
  const MatrixAlgebra power = tensor_power_algebra(a, n);
  if (!channel_e.kraus.empty()) {
    for (int i = 0; i < power.dim(); ++i) {
      const cmat b = power.element(i);
      rep.channel_noiseless_residual =
          std::max(rep.channel_noiseless_residual, (channel_e.adjoint_apply(b) - b).norm());
    }
  }

  // distortion noiseless on A and G_A covariant
  for (int i = 0; i < a.dim(); ++i) {
    const cmat b = a.element(i);
    rep.distortion_noiseless_residual =
        std::max(rep.distortion_noiseless_residual, (distortion_n.adjoint_apply(b) - b).norm());
  }
  const MatrixAlgebra gauge_span = commutant(a, tol);
  Rng rng(seed ^ 0xc0fa7ull);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    cmat h = cmat::Zero(a.ambient_dim, a.ambient_dim);
    for (int i = 0; i < gauge_span.dim(); ++i) h += cplx(g(rng), g(rng)) * gauge_span.element(i);
    h = (h + h.adjoint()) / 2.0;
    const cmat v = unitary_exp_i(h / (1.0 + h.norm()), tol);
    const cmat rho = random_density(a.ambient_dim, rng);
    const cmat lhs = distortion_n.apply(v * rho * v.adjoint());
    const cmat rhs = v * distortion_n.apply(rho) * v.adjoint();
    rep.distortion_covariance_residual =
        std::max(rep.distortion_covariance_residual, (lhs - rhs).norm());
  }

  const LpmChannel lp = build_lpm(a, n, +1, tol, seed);
  Povm out;
  for (const auto& e : m.elements) {
    cmat x = channel_e.adjoint_apply(e.op);
    // (N^dag)^{(x)n} elementwise: apply the single-site adjoint on every factor
    if (!distortion_n.kraus.empty()) {
      for (int site = 0; site < n; ++site) {
        cmat acc = cmat::Zero(x.rows(), x.cols());
        for (const auto& k : distortion_n.kraus) {
          cmat lifted = cmat::Identity(1, 1);
          for (int j = 0; j < n; ++j)
            lifted = kron(lifted, j == site ? cmat(k.adjoint()) : cmat::Identity(a.ambient_dim, a.ambient_dim));
          acc.noalias() += lifted * x * lifted.adjoint();
        }
        x = acc;
      }
    }
    out.elements.push_back({e.label, lp.apply(x)});
  }
  out.validate(tol);
  return {std::move(out), rep};
}

double expected_cost(const EstimationProblem& problem, const Povm& m, const CostFn& cost,
                     const Tolerance& tol) {
  const ConditionalTable table = conditionals(problem, m, tol);
  double total = 0.0;
  for (size_t k = 0; k < problem.prior.atoms.size(); ++k) {
    const auto& atom = problem.prior.atoms[k];
    for (size_t b = 0; b < m.elements.size(); ++b)
      total += atom.weight * table.rows[k][b] * cost(m.elements[b].label, atom.labels);
  }
  return total;
}

std::map<std::string, double> posterior_mean_estimates(const EstimationProblem& problem,
                                                       const Povm& m, const std::string& name,
                                                       const Tolerance& tol) {
  const ConditionalTable table = conditionals(problem, m, tol);
  std::map<std::string, double> est;
  for (size_t b = 0; b < m.elements.size(); ++b) {
    double mass = 0.0, mean = 0.0;
    for (size_t k = 0; k < problem.prior.atoms.size(); ++k) {
      const auto& atom = problem.prior.atoms[k];
      const double joint = atom.weight * table.rows[k][b];
      mass += joint;
      mean += joint * atom.labels.at(name);
    }
    est[m.elements[b].label] = mass > 1e-300 ? mean / mass : 0.0;
  }
  return est;
}

double posterior_mean_squared_error(const EstimationProblem& problem, const Povm& m,
                                    const std::string& name, const Tolerance& tol) {
  const auto est = posterior_mean_estimates(problem, m, name, tol);
  return expected_cost(
      problem, m,
      [&](const std::string& label, const std::map<std::string, double>& labels) {
        const double diff = est.at(label) - labels.at(name);
        return diff * diff;
      },
      tol);
}

double mutual_information(const EstimationProblem& problem, const Povm& m,
                          const std::string& name, const Tolerance& tol) {
  const ConditionalTable table = conditionals(problem, m, tol);
  const std::vector<double> values = parameter_values(problem, name);
  const size_t nb = m.elements.size();
  std::vector<std::vector<double>> joint(values.size(), std::vector<double>(nb, 0.0));
  for (size_t k = 0; k < problem.prior.atoms.size(); ++k) {
    const auto& atom = problem.prior.atoms[k];
    const double v = atom.labels.at(name);
    const size_t vi =
        std::lower_bound(values.begin(), values.end(), v - 1e-12) - values.begin();
    for (size_t b = 0; b < nb; ++b) joint[vi][b] += atom.weight * table.rows[k][b];
  }
  std::vector<double> pv(values.size(), 0.0), pb(nb, 0.0);
  for (size_t vi = 0; vi < values.size(); ++vi)
    for (size_t b = 0; b < nb; ++b) {
      pv[vi] += joint[vi][b];
      pb[b] += joint[vi][b];
    }
  double info = 0.0;
  for (size_t vi = 0; vi < values.size(); ++vi)
    for (size_t b = 0; b < nb; ++b) {
      const double j = joint[vi][b];
      if (j > 1e-300 && pv[vi] > 1e-300 && pb[b] > 1e-300)
        info += j * std::log2(j / (pv[vi] * pb[b]));
    }
  return info;
}

HelstromResult helstrom(const cmat& rho0, const cmat& rho1, double q0, double q1,
                        const Tolerance& tol) {
  if (std::abs(q0 + q1 - 1.0) > tol.match_eps) throw ValidationError("helstrom: priors must sum to 1");
  if (rho0.rows() != rho1.rows()) throw DimensionError("helstrom: dimension mismatch");
  const cmat delta = q1 * rho1 - q0 * rho0;
  HermEig e = herm_eig(delta, tol);
  const int d = static_cast<int>(rho0.rows());
  cmat m1 = cmat::Zero(d, d);
  double trace_norm = 0.0;
  for (int i = 0; i < d; ++i) {
    trace_norm += std::abs(e.eigenvalues(i));
    // zero modes land on outcome 0 for determinism
    if (e.eigenvalues(i) > tol.match_eps)
      m1 += e.eigenvectors.col(i) * e.eigenvectors.col(i).adjoint();
  }
  HelstromResult out;
  out.povm.elements.push_back({"0", cmat::Identity(d, d) - m1});
  out.povm.elements.push_back({"1", m1});
  out.error_probability = (1.0 - trace_norm) / 2.0;
  return out;
}

Povm local_observable_strategy(const cmat& observable, int n, const PostProcess& post,
                               const Tolerance& tol) {
  require_square(observable, "local_observable_strategy");
  if ((observable - observable.adjoint()).norm() > tol.match_eps * std::max(1.0, observable.norm()))
    throw ValidationError("local_observable_strategy: observable must be Hermitian");
  HermEig e = herm_eig(observable, tol);
  const int d = static_cast<int>(observable.rows());
  const double spread = std::max(1.0, e.eigenvalues(d - 1) - e.eigenvalues(0));
  const auto groups = cluster_values(e.eigenvalues, 1e-6 * spread);

  std::vector<cmat> projs;
  std::vector<double> eigvals;
  for (const auto& grp : groups) {
    cmat p = cmat::Zero(d, d);
    double v = 0.0;
    for (int idx : grp) {
      p += e.eigenvectors.col(idx) * e.eigenvectors.col(idx).adjoint();
      v = e.eigenvalues(idx);
    }
    projs.push_back(p);
    eigvals.push_back(v);
  }

  std::map<std::string, cmat> grouped;
  const int outcomes = static_cast<int>(projs.size());
  std::vector<int> tuple(n, 0);
  long total = 1;
  for (int k = 0; k < n; ++k) total *= outcomes;
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (int k = n - 1; k >= 0; --k) {
      tuple[k] = static_cast<int>(rem % outcomes);
      rem /= outcomes;
    }
    cmat op = projs[tuple[0]];
    for (int k = 1; k < n; ++k) op = kron(op, projs[tuple[k]]);
    const std::string label = post(tuple, eigvals);
    auto [it, fresh] = grouped.try_emplace(label, op);
    if (!fresh) it->second += op;
  }
  Povm out;
  for (auto& [label, op] : grouped) out.elements.push_back({label, std::move(op)});
  out.validate(tol);
  return out;
}

WitnessReport symmetric_subspace_witness(const EstimationProblem& problem, const Tolerance& tol) {
  problem.validate(tol);
  const TensorSpace space = TensorSpace::make(problem.site_dim(), problem.copies);
  const cmat plus = sym_projector(space, +1).matrix;

  WitnessReport rep;
  double mass1 = 0.0, inside = 0.0;
  for (const auto& atom : problem.prior.atoms) {
    if (std::abs(atom.labels.at("b") - 1.0) > 0.5) continue;
    mass1 += atom.weight;
    inside += atom.weight * (plus * kron_power(atom.rho, problem.copies)).trace().real();
  }
  if (mass1 <= tol.match_eps) throw ValidationError("witness: no b=1 prior mass");
  rep.unambiguous_probability = 1.0 - inside / mass1;

  // local sigma_z count statistics under both hypotheses
  const Povm counts = local_observable_strategy(
      pauli_z2(), problem.copies,
      [](const std::vector<int>& t, const std::vector<double>&) {
        int zeros = 0;
        for (int v : t) zeros += v == 1 ? 1 : 0;  // eigenvalue +1 entries
        return std::to_string(zeros);
      },
      tol);
  double min_lik = 1.0;
  for (double b : {0.0, 1.0}) {
    const auto row = conditionals_given_parameter(
        problem, counts,
        [&](const std::map<std::string, double>& labels) {
          return std::abs(labels.at("b") - b) < 0.5;
        },
        tol);
    for (double q : row) min_lik = std::min(min_lik, q);
  }
  rep.min_local_likelihood = min_lik;
  return rep;
}

BipartiteDecomposition bipartite_decompose(const Povm& m, const MatrixAlgebra& a,
                                           const Tolerance& tol, uint64_t seed) {
  m.validate(tol);
  const int d = a.ambient_dim;
  const TensorSpace space = TensorSpace::make(d, 2);
  if (m.dim() != space.total_dim)
    throw DimensionError("bipartite_decompose: POVM must live on (C^d)^(x)2");

  // joint symmetry: collective gauge action plus the swap
  const MatrixAlgebra aprime = commutant(a, tol);
  const MatrixAlgebra coll = collective_algebra(aprime, 2, tol);
  std::vector<cmat> unitaries = unitary_spanning_set(coll, tol, seed);
  Perm swap{1, 0};
  unitaries.push_back(perm_op(space, swap).matrix);
  const auto fixed = fixed_point_space(unitaries, tol);
  MatrixAlgebra sym_alg(static_cast<int>(space.total_dim),
                        span_basis_of(fixed, tol), {});

  const Povm twirled = twirl_povm(m, sym_alg, tol);

  const LpmChannel lplus = build_lpm(a, 2, +1, tol, seed);
  const LpmChannel lminus = build_lpm(a, 2, -1, tol, seed);
  const cmat pi_plus = lplus.sym_proj;
  const cmat pi_minus = lminus.sym_proj;

  BipartiteDecomposition out;
  for (const auto& e : twirled.elements) {
    const cmat mp = lplus.apply(e.op);
    const cmat mm = lminus.apply(e.op);
    out.m_plus.elements.push_back({e.label, mp});
    out.m_minus.elements.push_back({e.label, mm});
    out.assembled.elements.push_back({e.label, pi_plus * mp * pi_plus + pi_minus * mm * pi_minus});
  }
  out.m_plus.validate(tol);
  out.m_minus.validate(tol);
  out.assembled.validate(tol);
  return out;
}

// ---- named examples ---------------------------------------------------------

EstimationProblem qubit_decision_problem(double alpha0, double alpha1, int copies,
                                         int theta_points, double r) {
  if (theta_points < 1) throw ValidationError("qubit_decision_problem: theta_points >= 1");
  const QuantumChannel deph = QuantumChannel::dephasing(r);
  EstimationProblem problem;
  problem.copies = copies;
  problem.parameter_names = {"b"};
  const double alphas[2] = {alpha0, alpha1};
  for (int b = 0; b < 2; ++b) {
    for (int j = 0; j < theta_points; ++j) {
      const double theta = 2.0 * kPi * j / theta_points;
      cvec psi(2);
      psi << std::cos(alphas[b]), std::exp(cplx(0, theta)) * std::sin(alphas[b]);
      PriorAtom atom;
      atom.weight = 0.5 / theta_points;
      atom.rho = r > 0.0 ? deph.apply(psi * psi.adjoint()) : cmat(psi * psi.adjoint());
      atom.labels["b"] = b;
      atom.labels["theta"] = theta;
      problem.prior.atoms.push_back(std::move(atom));
    }
  }
  return problem;
}

QubitDecisionReport example_qubit_decision(double alpha0, double alpha1, int copies,
                                           int theta_points, double r, const Tolerance& tol) {
  const MatrixAlgebra diag = generate_algebra({pauli_z2()}, 2, tol);
  const MatrixAlgebra comm_q = commutant(collective_algebra(diag, copies, tol), tol);
  return example_qubit_decision(alpha0, alpha1, copies, theta_points, r, tol, comm_q);
}

QubitDecisionReport example_qubit_decision(double alpha0, double alpha1, int copies,
                                           int theta_points, double r, const Tolerance& tol,
                                           const MatrixAlgebra& collective_commutant) {
  const EstimationProblem problem = qubit_decision_problem(alpha0, alpha1, copies, theta_points, r);
  problem.validate(tol);

  // (a) Helstrom on the theta-averaged n-copy states, discretized prior
  const long nn = problem.total_dim();
  cmat avg0 = cmat::Zero(nn, nn), avg1 = cmat::Zero(nn, nn);
  for (const auto& atom : problem.prior.atoms) {
    const cmat state = kron_power(atom.rho, copies);
    if (atom.labels.at("b") < 0.5)
      avg0 += 2.0 * atom.weight * state;
    else
      avg1 += 2.0 * atom.weight * state;
  }
  QubitDecisionReport rep;
  rep.helstrom_error_discretized = helstrom(avg0, avg1, 0.5, 0.5, tol).error_probability;

  // exact-twirl pipeline: HS projection onto Comm{Q(G_A)} of one orbit
  // representative per branch (the Haar average over the phase group)
  const MatrixAlgebra& comm_q = collective_commutant;
  if (comm_q.ambient_dim != nn)
    throw DimensionError("example_qubit_decision: commutant dimension mismatch");
  const cmat ex0 = comm_q.project(kron_power(problem.prior.atoms.front().rho, copies));
  const cmat ex1 =
      comm_q.project(kron_power(problem.prior.atoms[static_cast<size_t>(theta_points)].rho, copies));
  rep.helstrom_error_exact_twirl = helstrom(ex0, ex1, 0.5, 0.5, tol).error_probability;

  // (b) local sigma_z counts: binomial likelihood discrimination
  const double c0 = std::cos(alpha0) * std::cos(alpha0);
  const double c1 = std::cos(alpha1) * std::cos(alpha1);
  double err = 0.0;
  for (int k = 0; k <= copies; ++k) {
    double binom = 1.0;
    for (int i = 0; i < k; ++i) binom = binom * (copies - i) / (i + 1);
    const double p0 = binom * std::pow(c0, k) * std::pow(1 - c0, copies - k);
    const double p1 = binom * std::pow(c1, k) * std::pow(1 - c1, copies - k);
    err += std::min(p0, p1);
  }
  rep.local_error = err / 2.0;

  rep.pipelines_gap = std::abs(rep.helstrom_error_discretized - rep.helstrom_error_exact_twirl);
  rep.difference = std::abs(rep.helstrom_error_exact_twirl - rep.local_error);
  return rep;
}

LeftRightReport example_leftright(int copies, const Tolerance& tol) {
  if (copies < 1 || copies > 3) throw ValidationError("example_leftright: copies in 1..3");
  TensorSpace::make(4, copies);

  cvec psi0(4), psi1(4);
  psi0 << 1, 0, 0, 0;
  psi1 << 0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0;
  const cmat rho0 = psi0 * psi0.adjoint();
  const cmat rho1 = psi1 * psi1.adjoint();

  // left-only route: reduced states per copy are |0><0| vs I/2
  cmat left0 = cmat::Zero(2, 2), left1 = cmat::Zero(2, 2);
  left0(0, 0) = 1.0;
  left1 = cmat::Identity(2, 2) / 2.0;
  const double left_err =
      helstrom(kron_power(left0, copies), kron_power(left1, copies), 0.5, 0.5, tol)
          .error_probability;

  // global route: per-site twirl of the right factor to I/2 (the exact Haar
  // average over the right unitary), then Helstrom on the joint states
  MatrixAlgebra left_alg = [&] {
    std::vector<cmat> gens;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        cmat e = cmat::Zero(2, 2);
        e(i, j) = 1.0;
        gens.push_back(kron(e, cmat::Identity(2, 2)));
      }
    return generate_algebra(gens, 4, tol);
  }();
  const cmat glob0 = project_tensor_power(left_alg, copies, kron_power(rho0, copies));
  const cmat glob1 = project_tensor_power(left_alg, copies, kron_power(rho1, copies));
  const double glob_err = helstrom(glob0, glob1, 0.5, 0.5, tol).error_probability;

  // right-only route: V|0> Haar-averaged over n copies vs (I/2)^n
  const TensorSpace right_space = TensorSpace::make(2, copies);
  const cmat plus = sym_projector(right_space, +1).matrix;
  // Haar average of (V|0><0|V^dag)^(x)n is the normalized symmetric projector
  const cmat right0 = plus / plus.trace().real();
  const cmat right1 = cmat::Identity(right_space.total_dim, right_space.total_dim) /
                      static_cast<double>(right_space.total_dim);
  const double right_err = helstrom(right0, right1, 0.5, 0.5, tol).error_probability;

  LeftRightReport rep;
  rep.left_only_error = left_err;
  rep.global_twirled_error = glob_err;
  rep.right_only_error = right_err;
  rep.difference = std::abs(left_err - glob_err);
  return rep;
}

WitnessReport example_unambiguous(double alpha, double r, int copies, const Tolerance& tol) {
  EstimationProblem problem = qubit_decision_problem(alpha, alpha, copies, 16, 0.0);
  // keep the b=0 branch pure, dephase the b=1 branch only
  const QuantumChannel deph = QuantumChannel::dephasing(r);
  for (auto& atom : problem.prior.atoms)
    if (atom.labels.at("b") > 0.5) atom.rho = deph.apply(atom.rho);
  return symmetric_subspace_witness(problem, tol);
}

Povm random_povm(int dim, int outcomes, Rng& rng) {
  std::vector<cmat> raw;
  cmat total = cmat::Zero(dim, dim);
  for (int i = 0; i < outcomes; ++i) {
    const cmat g = random_gaussian(dim, rng);
    raw.push_back(g * g.adjoint());
    total += raw.back();
  }
  Eigen::SelfAdjointEigenSolver<cmat> es(total);
  cmat inv_sqrt = cmat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    inv_sqrt += (1.0 / std::sqrt(es.eigenvalues()(i))) * es.eigenvectors().col(i) *
                es.eigenvectors().col(i).adjoint();
  Povm out;
  for (int i = 0; i < outcomes; ++i)
    out.elements.push_back({std::to_string(i), inv_sqrt * raw[i] * inv_sqrt});
  return out;
}

SingleObservableReport example_single_observable(int copies, int theta_points, int povm_seeds, const Tolerance& tol) {
  // gauge-symmetric pure prior over two latitude circles; parameter tr(sz rho)
  EstimationProblem problem;
  problem.copies = copies;
  problem.parameter_names = {"s"};
  const std::vector<double> alphas = {kPi / 6, kPi / 3, 1.2};
  for (double alpha : alphas) {
    for (int j = 0; j < theta_points; ++j) {
      const double theta = 2.0 * kPi * j / theta_points;
      cvec psi(2);
      psi << std::cos(alpha), std::exp(cplx(0, theta)) * std::sin(alpha);
      PriorAtom atom;
      atom.weight = 1.0 / (alphas.size() * theta_points);
      atom.rho = psi * psi.adjoint();
      atom.labels["s"] = std::cos(2 * alpha);
      atom.labels["alpha"] = alpha;
      problem.prior.atoms.push_back(std::move(atom));
    }
  }
  problem.validate(tol);

  const MatrixAlgebra diag = generate_algebra({pauli_z2()}, 2, tol);
  const Povm local = local_observable_strategy(
      pauli_z2(), copies,
      [](const std::vector<int>& t, const std::vector<double>&) {
        int ups = 0;
        for (int v : t) ups += v;
        return std::to_string(ups);
      },
      tol);

  SingleObservableReport rep;
  rep.local_cost = posterior_mean_squared_error(problem, local, "s", tol);
  rep.min_competitor_cost = 1e300;
  rep.local_optimal = true;
  Rng rng(0xa15ull);
  for (int t = 0; t < povm_seeds; ++t) {
    const Povm m = random_povm(static_cast<int>(problem.total_dim()), 5, rng);
    const Povm local_m = localize_povm(m, diag, copies, tol);
    const double cost_m = posterior_mean_squared_error(problem, m, "s", tol);
    const double cost_lm = posterior_mean_squared_error(problem, local_m, "s", tol);
    rep.max_localization_gap = std::max(rep.max_localization_gap, std::abs(cost_m - cost_lm));
    rep.min_competitor_cost = std::min(rep.min_competitor_cost, cost_m);
    if (rep.local_cost > cost_m + 1e-8) rep.local_optimal = false;
  }
  return rep;
}

}  // namespace swd
