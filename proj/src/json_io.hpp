#pragma once

#include "estimation.hpp"

#include <json.hpp>

namespace swd {

using json = nlohmann::json;

// Matrix encoding used repo-wide:
// {"dim": n, "entries": [[[re,im],...],...]} row-major.
json matrix_to_json(const cmat& m);
cmat matrix_from_json(const json& j);

// {"ambient_dim": d, "generators": [matrix...]}
json algebra_to_json(const MatrixAlgebra& alg);
struct AlgebraInput {
  int ambient_dim = 0;
  std::vector<cmat> generators;
};
AlgebraInput algebra_input_from_json(const json& j);

json gauge_report_to_json(const GaugeReport& rep);
json duality_report_to_json(const DualityReport& rep);
json block_structure_to_json(const BlockStructure& bs);
json lpm_summary_to_json(const LpmChannel& ch, double choi_min_eig, bool with_choi_check);

json povm_to_json(const Povm& m);
Povm povm_from_json(const json& j);

// {"site_dim", "copies", "prior": [{"weight","rho","labels"}...],
//  "channel": {"kraus":[matrix...]}}
json problem_to_json(const EstimationProblem& p);
EstimationProblem problem_from_json(const json& j);

json conditional_table_to_json(const ConditionalTable& t);

json qubit_decision_report_to_json(const QubitDecisionReport& r);
json leftright_report_to_json(const LeftRightReport& r);
json witness_report_to_json(const WitnessReport& r, const Tolerance& tol);
json single_observable_report_to_json(const SingleObservableReport& r);

std::string dump_deterministic(const json& j);

}  // namespace swd
