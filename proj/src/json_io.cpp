#include "json_io.hpp"

namespace swd {

json matrix_to_json(const cmat& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return json{{"dim", m.rows()}, {"entries", std::move(rows)}};
}

cmat matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw ParseError("matrix: expected {\"dim\", \"entries\"}");
  const long d = j.at("dim").get<long>();
  if (d <= 0) throw ParseError("matrix: dim must be positive");
  const auto& entries = j.at("entries");
  if (!entries.is_array() || static_cast<long>(entries.size()) != d)
    throw ParseError("matrix: entries must hold dim rows");
  cmat m(d, d);
  for (long i = 0; i < d; ++i) {
    const auto& row = entries.at(i);
    if (!row.is_array() || static_cast<long>(row.size()) != d)
      throw ParseError("matrix: row " + std::to_string(i) + " must hold dim pairs");
    for (long k = 0; k < d; ++k) {
      const auto& pair = row.at(k);
      if (!pair.is_array() || pair.size() != 2)
        throw ParseError("matrix: entry must be [re, im]");
      m(i, k) = cplx(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
  }
  require_finite(m, "matrix");
  return m;
}

json algebra_to_json(const MatrixAlgebra& alg) {
  json gens = json::array();
  for (const auto& g : alg.generators) gens.push_back(matrix_to_json(g));
  return json{{"ambient_dim", alg.ambient_dim}, {"generators", std::move(gens)}, {"dim", alg.dim()}};
}

AlgebraInput algebra_input_from_json(const json& j) {
  if (!j.is_object() || !j.contains("ambient_dim") || !j.contains("generators"))
    throw ParseError("algebra: expected {\"ambient_dim\", \"generators\"}");
  AlgebraInput in;
  in.ambient_dim = j.at("ambient_dim").get<int>();
  if (in.ambient_dim <= 0) throw ParseError("algebra: ambient_dim must be positive");
  for (const auto& g : j.at("generators")) {
    cmat m = matrix_from_json(g);
    if (m.rows() != in.ambient_dim) throw ParseError("algebra: generator dimension mismatch");
    in.generators.push_back(std::move(m));
  }
  return in;
}

json gauge_report_to_json(const GaugeReport& rep) {
  return json{{"is_gauge", rep.is_gauge},
              {"bicommutant_dim", rep.bicommutant_dim},
              {"input_dim", rep.input_dim},
              {"max_residual", rep.max_residual}};
}

json duality_report_to_json(const DualityReport& rep) {
  return json{{"lhs_dim", rep.lhs_dim},
              {"rhs_dim", rep.rhs_dim},
              {"mutual_containment", rep.mutual_containment},
              {"max_residual", rep.max_residual},
              {"verdict", verdict_name(rep.verdict)},
              {"details",
               {{"lhs_in_rhs_residual", rep.lhs_in_rhs_residual},
                {"rhs_in_lhs_residual", rep.rhs_in_lhs_residual},
                {"note", rep.detail}}}};
}

json block_structure_to_json(const BlockStructure& bs) {
  json blocks = json::array();
  for (const auto& [m, n] : bs.blocks) blocks.push_back({{"m", m}, {"n", n}});
  return json{{"blocks", std::move(blocks)}, {"basis_change", matrix_to_json(bs.basis_change)}};
}

json lpm_summary_to_json(const LpmChannel& ch, double choi_min_eig, bool with_choi_check) {
  json coeffs = json::array();
  for (size_t i = 0; i < ch.coefficients.size(); ++i)
    coeffs.push_back({{"p", ch.coefficients[i]},
                      {"projector_trace", ch.central_projectors[i].trace().real()}});
  const long nn = ch.total_dim();
  const cmat id = cmat::Identity(nn, nn);
  json out{{"sign", ch.sign},
           {"copies", ch.copies},
           {"site_dim", ch.site_algebra.ambient_dim},
           {"total_dim", nn},
           {"coefficients", std::move(coeffs)},
           {"unital_residual", (ch.apply(id) - id).norm()}};
  if (with_choi_check) out["choi_min_eigenvalue"] = choi_min_eig;
  return out;
}

json povm_to_json(const Povm& m) {
  json arr = json::array();
  for (const auto& e : m.elements) arr.push_back({{"label", e.label}, {"op", matrix_to_json(e.op)}});
  return json{{"outcomes", std::move(arr)}};
}

Povm povm_from_json(const json& j) {
  const json& arr = j.is_array() ? j : j.at("outcomes");
  Povm m;
  for (const auto& e : arr) m.elements.push_back({e.at("label").get<std::string>(), matrix_from_json(e.at("op"))});
  return m;
}

json problem_to_json(const EstimationProblem& p) {
  json prior = json::array();
  for (const auto& atom : p.prior.atoms) {
    json labels = json::object();
    for (const auto& [k, v] : atom.labels) labels[k] = v;
    prior.push_back(
        {{"weight", atom.weight}, {"rho", matrix_to_json(atom.rho)}, {"labels", std::move(labels)}});
  }
  json kraus = json::array();
  for (const auto& k : p.channel.kraus) kraus.push_back(matrix_to_json(k));
  return json{{"site_dim", p.site_dim()},
              {"copies", p.copies},
              {"prior", std::move(prior)},
              {"channel", {{"kraus", std::move(kraus)}}}};
}

EstimationProblem problem_from_json(const json& j) {
  EstimationProblem p;
  p.copies = j.at("copies").get<int>();
  const int site_dim = j.at("site_dim").get<int>();
  for (const auto& a : j.at("prior")) {
    PriorAtom atom;
    atom.weight = a.at("weight").get<double>();
    atom.rho = matrix_from_json(a.at("rho"));
    if (atom.rho.rows() != site_dim) throw ParseError("problem: prior state dimension mismatch");
    if (a.contains("labels"))
      for (auto it = a.at("labels").begin(); it != a.at("labels").end(); ++it)
        atom.labels[it.key()] = it.value().get<double>();
    p.prior.atoms.push_back(std::move(atom));
  }
  if (j.contains("channel") && j.at("channel").contains("kraus"))
    for (const auto& k : j.at("channel").at("kraus"))
      p.channel.kraus.push_back(matrix_from_json(k));
  for (const auto& atom : p.prior.atoms)
    for (const auto& [k, v] : atom.labels) {
      if (std::find(p.parameter_names.begin(), p.parameter_names.end(), k) ==
          p.parameter_names.end())
        p.parameter_names.push_back(k);
      (void)v;
    }
  return p;
}

json conditional_table_to_json(const ConditionalTable& t) {
  return json{{"outcomes", t.outcome_labels}, {"rows", t.rows}};
}

json qubit_decision_report_to_json(const QubitDecisionReport& r) {
  return json{{"helstrom_error_discretized", r.helstrom_error_discretized},
              {"helstrom_error_exact_twirl", r.helstrom_error_exact_twirl},
              {"local_error", r.local_error},
              {"pipelines_gap", r.pipelines_gap},
              {"difference", r.difference}};
}

json leftright_report_to_json(const LeftRightReport& r) {
  return json{{"left_only_error", r.left_only_error},
              {"global_twirled_error", r.global_twirled_error},
              {"right_only_error", r.right_only_error},
              {"difference", r.difference}};
}

json witness_report_to_json(const WitnessReport& r, const Tolerance& tol) {
  return json{{"unambiguous_probability", r.unambiguous_probability},
              {"min_local_likelihood", r.min_local_likelihood},
              {"entangled_advantage", r.entangled_advantage(tol)}};
}

json single_observable_report_to_json(const SingleObservableReport& r) {
  return json{{"local_cost", r.local_cost},
              {"max_localization_gap", r.max_localization_gap},
              {"min_competitor_cost", r.min_competitor_cost},
              {"local_optimal", r.local_optimal}};
}

std::string dump_deterministic(const json& j) { return j.dump(2); }

}  // namespace swd
