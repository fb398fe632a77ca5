#include "swd/swd.h"

#include "duality.hpp"
#include "estimation.hpp"
#include "json_io.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

using namespace swd;

struct swd_ctx {
  Tolerance tol;
  uint64_t seed = 0;
  std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int fail(swd_ctx* ctx, int code, const std::string& msg) {
  if (ctx) ctx->last_error = msg;
  return code;
}

template <typename Fn>
int guarded(swd_ctx* ctx, char** out_json, Fn&& fn) {
  if (!ctx || !out_json) return SWD_ERR_ARGUMENT;
  *out_json = nullptr;
  ctx->last_error.clear();
  try {
    const json result = fn();
    *out_json = dup_string(dump_deterministic(result));
    return *out_json ? SWD_OK : SWD_ERR_INTERNAL;
  } catch (const ParseError& e) {
    return fail(ctx, SWD_ERR_PARSE, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(ctx, SWD_ERR_PARSE, e.what());
  } catch (const DimensionError& e) {
    return fail(ctx, SWD_ERR_DIMENSION, e.what());
  } catch (const CapError& e) {
    return fail(ctx, SWD_ERR_CAP, e.what());
  } catch (const ValidationError& e) {
    return fail(ctx, SWD_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(ctx, SWD_ERR_INTERNAL, e.what());
  }
}

MatrixAlgebra parse_generated_algebra(const swd_ctx* ctx, const char* algebra_json) {
  if (!algebra_json) throw ParseError("null algebra JSON");
  const AlgebraInput in = algebra_input_from_json(json::parse(algebra_json));
  return generate_algebra(in.generators, in.ambient_dim, ctx->tol);
}

json commutant_payload(const MatrixAlgebra& comm) {
  json gens = json::array();
  for (int i = 0; i < comm.dim(); ++i) gens.push_back(matrix_to_json(comm.element(i)));
  return json{{"ambient_dim", comm.ambient_dim}, {"dim", comm.dim()}, {"basis", std::move(gens)}, {"ok", true}};
}

}  // namespace

extern "C" {

const char* swd_version(void) { return "1.0.0"; }

swd_ctx* swd_ctx_new(void) { return new (std::nothrow) swd_ctx; }

void swd_ctx_free(swd_ctx* ctx) { delete ctx; }

int swd_ctx_set_tolerance(swd_ctx* ctx, double rank_eps, double match_eps) {
  if (!ctx) return SWD_ERR_ARGUMENT;
  Tolerance t{rank_eps, match_eps};
  try {
    t.validate();
  } catch (const std::exception& e) {
    return fail(ctx, SWD_ERR_INVALID, e.what());
  }
  ctx->tol = t;
  return SWD_OK;
}

int swd_ctx_set_seed(swd_ctx* ctx, uint64_t seed) {
  if (!ctx) return SWD_ERR_ARGUMENT;
  ctx->seed = seed;
  return SWD_OK;
}

const char* swd_last_error(const swd_ctx* ctx) {
  return ctx ? ctx->last_error.c_str() : "null context";
}

void swd_string_free(char* s) { std::free(s); }

int swd_commutant(swd_ctx* ctx, const char* algebra_json, char** out_json) {
  return guarded(ctx, out_json, [&] {
    const MatrixAlgebra alg = parse_generated_algebra(ctx, algebra_json);
    return commutant_payload(commutant(alg, ctx->tol));
  });
}

int swd_gauge_check(swd_ctx* ctx, const char* algebra_json, char** out_json) {
  return guarded(ctx, out_json, [&] {
    if (!algebra_json) throw ParseError("null algebra JSON");
    const AlgebraInput in = algebra_input_from_json(json::parse(algebra_json));
    const MatrixAlgebra span = span_algebra(in.generators, in.ambient_dim, ctx->tol);
    json out = gauge_report_to_json(is_gauge_pair(span, ctx->tol));
    out["ok"] = true;
    return out;
  });
}

int swd_decompose(swd_ctx* ctx, const char* algebra_json, char** out_json) {
  return guarded(ctx, out_json, [&] {
    const MatrixAlgebra alg = parse_generated_algebra(ctx, algebra_json);
    json out = block_structure_to_json(block_decompose(alg, ctx->tol, ctx->seed + 1));
    out["algebra_dim"] = alg.dim();
    out["ok"] = true;
    return out;
  });
}

int swd_duality(swd_ctx* ctx, const char* algebra_json, int copies, int sign, char** out_json) {
  return guarded(ctx, out_json, [&] {
    const MatrixAlgebra alg = parse_generated_algebra(ctx, algebra_json);
    const DualityReport rep = sign == 0
                                  ? verify_duality(alg, copies, ctx->tol)
                                  : verify_restricted_duality(alg, copies, sign, ctx->tol);
    json out = duality_report_to_json(rep);
    out["ok"] = rep.verdict == Verdict::equal;
    return out;
  });
}

int swd_counterexample(swd_ctx* ctx, const char* which, char** out_json) {
  return guarded(ctx, out_json, [&]() -> json {
    if (!which) throw ParseError("null counterexample name");
    const std::string name(which);
    if (name == "nongauge") {
      const DualityReport rep = nongauge_counterexample(ctx->tol);
      json out = duality_report_to_json(rep);
      out["ok"] = rep.verdict == Verdict::lhs_strictly_larger && rep.lhs_dim == 3 && rep.rhs_dim == 2;
      return out;
    }
    if (name == "lambda2") {
      const DualityReport rep = lambda2_counterexample(ctx->tol);
      const DualityReport control = lambda2_symmetric_control(ctx->tol);
      json out{{"lambda2", duality_report_to_json(rep)},
               {"symmetric_control", duality_report_to_json(control)}};
      out["ok"] = rep.verdict == Verdict::rhs_strictly_larger && rep.lhs_dim < rep.rhs_dim &&
                  control.verdict == Verdict::equal;
      return out;
    }
    throw ParseError("unknown counterexample '" + name + "' (expected nongauge|lambda2)");
  });
}

int swd_lpm(swd_ctx* ctx, const char* algebra_json, int copies, int sign, int check_choi,
            char** out_json) {
  return guarded(ctx, out_json, [&] {
    const MatrixAlgebra alg = parse_generated_algebra(ctx, algebra_json);
    const LpmChannel ch = build_lpm(alg, copies, sign >= 0 ? +1 : -1, ctx->tol, ctx->seed + 2);
    double choi_min = 0.0;
    if (check_choi) {
      Eigen::SelfAdjointEigenSolver<cmat> es(ch.choi(), Eigen::EigenvaluesOnly);
      choi_min = es.eigenvalues().minCoeff();
    }
    json out = lpm_summary_to_json(ch, choi_min, check_choi != 0);
    out["ok"] = !check_choi || choi_min >= -1e-8;
    return out;
  });
}

int swd_estimate(swd_ctx* ctx, const char* request_json, char** out_json) {
  return guarded(ctx, out_json, [&]() -> json {
    if (!request_json) throw ParseError("null request");
    const json req = json::parse(request_json);
    const Tolerance tol = ctx->tol;

    if (req.contains("example")) {
      const std::string name = req.at("example").get<std::string>();
      const int copies = req.value("copies", 2);
      if (name == "qubit-decision") {
        const QubitDecisionReport rep = example_qubit_decision(
            req.value("alpha0", 0.5235987755982988), req.value("alpha1", 1.0471975511965976),
            copies, req.value("theta_points", 64), req.value("r", 0.0), tol);
        json out = qubit_decision_report_to_json(rep);
        out["ok"] = rep.difference <= 1e-8 && rep.pipelines_gap <= 1e-6;
        return out;
      }
      if (name == "leftright") {
        const LeftRightReport rep = example_leftright(copies, tol);
        json out = leftright_report_to_json(rep);
        out["ok"] = rep.difference <= 1e-8 && rep.right_only_error >= rep.left_only_error - 1e-8;
        return out;
      }
      if (name == "unambiguous") {
        const WitnessReport rep = example_unambiguous(req.value("alpha", 0.7853981633974483),
                                                      req.value("r", 0.25), copies, tol);
        json out = witness_report_to_json(rep, tol);
        out["ok"] = rep.unambiguous_probability > 0.0 && rep.min_local_likelihood > 0.0;
        return out;
      }
      if (name == "single-observable") {
        const SingleObservableReport rep =
            example_single_observable(copies, req.value("theta_points", 64), req.value("povm_seeds", 5), tol);
        json out = single_observable_report_to_json(rep);
        out["ok"] = rep.local_optimal && rep.max_localization_gap <= 1e-8;
        return out;
      }
      throw ParseError("unknown example '" + name + "'");
    }

    if (!req.contains("problem") || !req.contains("strategy"))
      throw ParseError("request needs either \"example\" or \"problem\"+\"strategy\"");
    EstimationProblem problem = problem_from_json(req.at("problem"));
    Povm povm = povm_from_json(req.at("strategy").at("povm"));

    json out;
    if (req.contains("twirl_algebra")) {
      const AlgebraInput in = algebra_input_from_json(req.at("twirl_algebra"));
      const MatrixAlgebra sym = generate_algebra(in.generators, in.ambient_dim, tol);
      povm = twirl_povm(povm, sym, tol);
      out["twirled"] = true;
    }
    if (req.contains("localize")) {
      const json& loc = req.at("localize");
      const AlgebraInput in = algebra_input_from_json(loc.at("algebra"));
      const MatrixAlgebra site = generate_algebra(in.generators, in.ambient_dim, tol);
      if (loc.contains("distortion") || !problem.channel.kraus.empty()) {
        QuantumChannel distortion = QuantumChannel::identity(site.ambient_dim);
        if (loc.contains("distortion")) {
          distortion.kraus.clear();
          for (const auto& k : loc.at("distortion").at("kraus"))
            distortion.kraus.push_back(matrix_from_json(k));
        }
        QuantumChannel chan = problem.channel.kraus.empty()
                                  ? QuantumChannel::identity(static_cast<int>(problem.total_dim()))
                                  : problem.channel;
        LocalizedPovm lp =
            generalized_localize(povm, site, problem.copies, chan, distortion, tol, ctx->seed + 2);
        povm = std::move(lp.povm);
        out["assumptions"] = {
            {"channel_noiseless_residual", lp.assumptions.channel_noiseless_residual},
            {"distortion_noiseless_residual", lp.assumptions.distortion_noiseless_residual},
            {"distortion_covariance_residual", lp.assumptions.distortion_covariance_residual},
            {"ok", lp.assumptions.ok(tol)}};
      } else {
        povm = localize_povm(povm, site, problem.copies, tol, ctx->seed + 2);
      }
      out["localized"] = true;
    }
    out["conditionals"] = conditional_table_to_json(conditionals(problem, povm, tol));
    if (req.contains("mutual_information_of"))
      out["mutual_information_bits"] =
          mutual_information(problem, povm, req.at("mutual_information_of").get<std::string>(), tol);
    out["ok"] = true;
    return out;
  });
}

}  // extern "C"
