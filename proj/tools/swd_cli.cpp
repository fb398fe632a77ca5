// Command-line front end over the swd C API. Subcommands mirror the library
// surface: commutant | gauge-check | decompose | duality | lpm | estimate |
// counterexample. All output is JSON (or CSV where a table makes sense) and
// deterministic for fixed (input, seed, tolerance, version).

#include "swd/swd.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

struct Options {
  std::string input_path;
  std::string output_path;
  std::string format = "json";
  double rank_eps = 1e-9;
  double match_eps = 1e-8;
  uint64_t seed = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Atomic write: temp file in the target directory, then rename.
void write_output(const Options& opt, const std::string& text) {
  if (opt.output_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(opt.output_path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + tmp.string());
    out << text << "\n";
  }
  fs::rename(tmp, target);
}

std::string to_csv(const json& j) {
  // Flat key,value rows; conditional tables get one row per prior atom.
  std::ostringstream os;
  if (j.contains("conditionals")) {
    const auto& table = j.at("conditionals");
    os << "atom";
    for (const auto& label : table.at("outcomes")) os << "," << label.get<std::string>();
    os << "\n";
    int k = 0;
    for (const auto& row : table.at("rows")) {
      os << k++;
      for (const auto& v : row) os << "," << v.get<double>();
      os << "\n";
    }
    return os.str();
  }
  os << "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!it.value().is_structured()) os << it.key() << "," << it.value().dump() << "\n";
  return os.str();
}

class Ctx {
 public:
  explicit Ctx(const Options& opt) : ctx_(swd_ctx_new()) {
    if (!ctx_) throw std::runtime_error("context allocation failed");
    if (swd_ctx_set_tolerance(ctx_, opt.rank_eps, opt.match_eps) != SWD_OK)
      throw std::runtime_error(swd_last_error(ctx_));
    swd_ctx_set_seed(ctx_, opt.seed);
  }
  ~Ctx() { swd_ctx_free(ctx_); }
  Ctx(const Ctx&) = delete;
  Ctx& operator=(const Ctx&) = delete;
  swd_ctx* get() const { return ctx_; }

 private:
  swd_ctx* ctx_;
};

int emit(const Options& opt, swd_ctx* ctx, int status, char* payload) {
  if (status != SWD_OK || !payload) {
    json err{{"ok", false},
             {"failures", json::array({{{"code", status}, {"message", swd_last_error(ctx)}}})}};
    write_output(opt, err.dump(2));
    if (payload) swd_string_free(payload);
    return status != SWD_OK ? status : SWD_ERR_INTERNAL;
  }
  const std::string text(payload);
  swd_string_free(payload);
  const json parsed = json::parse(text);
  write_output(opt, opt.format == "csv" ? to_csv(parsed) : text);
  return parsed.value("ok", true) ? 0 : 10;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schur-Weyl duality toolkit"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--tolerance", opt.match_eps, "operator-norm comparison cutoff (match_eps)");
  app.add_option("--rank-eps", opt.rank_eps, "relative singular-value cutoff");
  app.add_option("--seed", opt.seed, "seed for the randomized routines");
  app.add_option("--output", opt.output_path, "write the report to this file (atomic)");
  app.add_option("--format", opt.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  // commutant
  auto* cmd_comm = app.add_subcommand("commutant", "commutant of the generated algebra");
  cmd_comm->add_option("--input", opt.input_path, "algebra JSON file")->required();

  // gauge-check
  auto* cmd_gauge = app.add_subcommand("gauge-check", "bicommutant test on the generator span");
  cmd_gauge->add_option("--input", opt.input_path, "algebra JSON file")->required();

  // decompose
  auto* cmd_dec = app.add_subcommand("decompose", "Wedderburn block decomposition");
  cmd_dec->add_option("--input", opt.input_path, "algebra JSON file")->required();

  // duality
  int copies = 2;
  std::string restricted;
  std::string counter;
  auto* cmd_dual = app.add_subcommand("duality", "duality verification report");
  cmd_dual->add_option("--input", opt.input_path, "algebra JSON file");
  cmd_dual->add_option("--copies", copies, "number of tensor copies");
  cmd_dual->add_option("--restricted", restricted, "+|- restricts to the (anti)symmetric subspace");
  cmd_dual->add_option("--counterexample", counter, "nongauge|lambda2 (ignores --input)");

  // lpm
  std::string sign_str = "+";
  bool skip_choi = false;
  auto* cmd_lpm = app.add_subcommand("lpm", "build the L+/L- channel and validate it");
  cmd_lpm->add_option("--input", opt.input_path, "algebra JSON file")->required();
  cmd_lpm->add_option("--copies", copies, "number of tensor copies");
  cmd_lpm->add_option("--sign", sign_str, "+|-");
  cmd_lpm->add_flag("--skip-choi", skip_choi, "skip the Choi eigenvalue check");

  // counterexample
  std::string which;
  auto* cmd_counter = app.add_subcommand("counterexample", "built-in strictness counterexamples");
  cmd_counter->add_option("which", which, "nongauge|lambda2")->required();

  // estimate
  std::string example, strategy_path;
  double alpha0 = 0.5235987755982988, alpha1 = 1.0471975511965976, alpha = 0.7853981633974483;
  double r = 0.0;
  int theta_points = 64, n_copies = 2;
  std::string mi_of;
  auto* cmd_est = app.add_subcommand("estimate", "estimation experiments");
  cmd_est->add_option("--example", example,
                      "qubit-decision|leftright|unambiguous|single-observable");
  cmd_est->add_option("--input", opt.input_path, "problem JSON file");
  cmd_est->add_option("--strategy", strategy_path, "strategy JSON file ({\"povm\": ...})");
  cmd_est->add_option("--alpha0", alpha0, "first branch angle");
  cmd_est->add_option("--alpha1", alpha1, "second branch angle");
  cmd_est->add_option("--alpha", alpha, "witness angle");
  cmd_est->add_option("--r", r, "dephasing strength");
  cmd_est->add_option("--theta-points", theta_points, "phase grid size");
  cmd_est->add_option("--copies,--n", n_copies, "number of copies");
  cmd_est->add_option("--mutual-information-of", mi_of, "report I(outcome : parameter)");

  CLI11_PARSE(app, argc, argv);

  try {
    Ctx ctx(opt);
    char* out = nullptr;

    if (cmd_comm->parsed()) {
      const int rc = swd_commutant(ctx.get(), read_file(opt.input_path).c_str(), &out);
      return emit(opt, ctx.get(), rc, out);
    }
    if (cmd_gauge->parsed()) {
      const int rc = swd_gauge_check(ctx.get(), read_file(opt.input_path).c_str(), &out);
      return emit(opt, ctx.get(), rc, out);
    }
    if (cmd_dec->parsed()) {
      const int rc = swd_decompose(ctx.get(), read_file(opt.input_path).c_str(), &out);
      return emit(opt, ctx.get(), rc, out);
    }

    if (cmd_dual->parsed()) {
      if (!counter.empty()) {
        const int rc = swd_counterexample(ctx.get(), counter.c_str(), &out);
        return emit(opt, ctx.get(), rc, out);
      }
      if (opt.input_path.empty()) {
        std::cerr << "duality: --input or --counterexample required\n";
        return 2;
      }
      int sign = 0;
      if (restricted == "+")
        sign = +1;
      else if (restricted == "-")
        sign = -1;
      else if (!restricted.empty()) {
        std::cerr << "duality: --restricted takes + or -\n";
        return 2;
      }
      const int rc = swd_duality(ctx.get(), read_file(opt.input_path).c_str(), copies, sign, &out);
      return emit(opt, ctx.get(), rc, out);
    }

    if (cmd_lpm->parsed()) {
      const int sign = sign_str == "-" ? -1 : +1;
      const int rc = swd_lpm(ctx.get(), read_file(opt.input_path).c_str(), copies, sign,
                             skip_choi ? 0 : 1, &out);
      return emit(opt, ctx.get(), rc, out);
    }

    if (cmd_counter->parsed()) {
      const int rc = swd_counterexample(ctx.get(), which.c_str(), &out);
      return emit(opt, ctx.get(), rc, out);
    }

    if (cmd_est->parsed()) {
      json req;
      if (!example.empty()) {
        req["example"] = example;
        req["alpha0"] = alpha0;
        req["alpha1"] = alpha1;
        req["alpha"] = alpha;
        req["r"] = r;
        req["theta_points"] = theta_points;
        req["copies"] = n_copies;
      } else {
        if (opt.input_path.empty() || strategy_path.empty()) {
          std::cerr << "estimate: need --example or both --input and --strategy\n";
          return 2;
        }
        req["problem"] = json::parse(read_file(opt.input_path));
        req["strategy"] = json::parse(read_file(strategy_path));
        if (!mi_of.empty()) req["mutual_information_of"] = mi_of;
      }
      const int rc = swd_estimate(ctx.get(), req.dump().c_str(), &out);
      return emit(opt, ctx.get(), rc, out);
    }
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
