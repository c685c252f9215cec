// Command-line driver for the Tucker-variety optimization toolkit.  Builds a
// JSON configuration from flags and runs it through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "ttv.h"

namespace {

using nlohmann::json;

struct Flags {
  std::vector<long long> shape = {60, 60, 60};
  std::vector<long long> true_rank = {4, 4, 4};
  std::vector<long long> rank = {4, 4, 4};
  std::vector<long long> init_rank;
  double sampling_rate = 0.3;
  unsigned long long seed = 0;
  double alpha = 0.3;
  double omega = 0.1;
  std::string solver = "grap";
  std::string basis = "leading";
  std::string variant = "paper";
  long long max_iters = 500;
  double train_tol = 1e-12;
  double rel_change_tol = 1e-8;
  double time_budget_s = -1.0;
  double eps_r0 = 0.1;
  double delta = 0.01;
  double eps1 = 0.01;
  double eps2 = 0.5;
  long long inner_max_iters = 5;
  std::string step_init = "exact";
  double s_const = 1.0;
  std::string samples_in;
  std::string test_in;
  std::string samples_out;
  std::string trace_out;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--rank", f.rank, "rank bound r (one entry per mode)");
  cmd->add_option("--init-rank", f.init_rank, "initial iterate rank (default: --rank)");
  cmd->add_option("--solver", f.solver, "grap | rfgrap | rgd | tram")
      ->check(CLI::IsMember({"grap", "rfgrap", "rgd", "tram"}));
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--omega", f.omega, "angle-condition constant");
  cmd->add_option("--basis", f.basis, "cone basis: leading | random")
      ->check(CLI::IsMember({"leading", "random"}));
  cmd->add_option("--variant", f.variant, "tram variant: paper | practical")
      ->check(CLI::IsMember({"paper", "practical"}));
  cmd->add_option("--max-iters", f.max_iters, "iteration budget");
  cmd->add_option("--train-tol", f.train_tol, "stop when the training error falls below");
  cmd->add_option("--rel-change-tol", f.rel_change_tol, "stop on relative stagnation (0 = off)");
  cmd->add_option("--time-budget", f.time_budget_s, "wall-clock budget in seconds");
  cmd->add_option("--eps-r0", f.eps_r0, "initial Riemannian stationarity target (rgd/tram)");
  cmd->add_option("--delta", f.delta, "rank-deficiency threshold (rgd/tram)");
  cmd->add_option("--eps1", f.eps1, "rank-increase significance (tram)");
  cmd->add_option("--eps2", f.eps2, "ambient/Riemannian gradient ratio (tram)");
  cmd->add_option("--inner-max-iters", f.inner_max_iters, "fixed-rank iterations per outer step");
  cmd->add_option("--step-init", f.step_init, "initial stepsize policy: exact|constant|previous")
      ->check(CLI::IsMember({"exact", "constant", "previous"}));
  cmd->add_option("--step-const", f.s_const, "constant initial stepsize");
  cmd->add_option("--trace-out", f.trace_out, "write a per-iteration trace file");
}

json to_config(const Flags& f, const std::string& task) {
  json j;
  j["task"] = task;
  j["solver"] = f.solver;
  j["shape"] = f.shape;
  j["true_rank"] = f.true_rank;
  j["rank"] = f.rank;
  if (!f.init_rank.empty()) j["init_rank"] = f.init_rank;
  j["sampling_rate"] = f.sampling_rate;
  j["seed"] = f.seed;
  j["alpha"] = f.alpha;
  j["omega"] = f.omega;
  j["basis"] = f.basis;
  j["variant"] = f.variant;
  j["tram"] = {{"eps_r0", f.eps_r0},
               {"delta", f.delta},
               {"eps1", f.eps1},
               {"eps2", f.eps2},
               {"inner_max_iters", f.inner_max_iters}};
  j["ls"] = {{"init", f.step_init}, {"s_const", f.s_const}};
  json stop = {{"max_iters", f.max_iters},
               {"train_tol", f.train_tol},
               {"rel_change_tol", f.rel_change_tol}};
  if (f.time_budget_s > 0.0) stop["time_budget_s"] = f.time_budget_s;
  j["stop"] = stop;
  if (!f.samples_in.empty()) j["samples_in"] = f.samples_in;
  if (!f.test_in.empty()) j["test_in"] = f.test_in;
  if (!f.samples_out.empty()) j["samples_out"] = f.samples_out;
  if (!f.trace_out.empty()) j["trace_out"] = f.trace_out;
  return j;
}

int run_config(const json& cfg) {
  ttv_experiment* e = ttv_experiment_create(cfg.dump().c_str());
  if (e == nullptr) {
    std::cerr << "error: " << ttv_last_error() << '\n';
    return 2;
  }
  if (ttv_experiment_run(e) != TTV_OK) {
    std::cerr << "error: " << ttv_last_error() << '\n';
    ttv_experiment_destroy(e);
    return 2;
  }
  std::cout << ttv_experiment_summary(e) << '\n';
  const std::string reason = ttv_experiment_stop_reason(e);
  ttv_experiment_destroy(e);
  // Budget exhaustion and line-search stalls are reported as nonzero.
  if (reason == "time_budget" || reason == "step_floor") return 3;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimization over Tucker tensor varieties"};
  app.require_subcommand(1);

  Flags fs;
  CLI::App* synthetic = app.add_subcommand(
      "synthetic", "generate a random low-rank tensor, sample it, and complete it");
  synthetic->add_option("--shape", fs.shape, "tensor dimensions");
  synthetic->add_option("--true-rank", fs.true_rank, "ground-truth Tucker rank");
  synthetic->add_option("--sampling-rate", fs.sampling_rate, "fraction of observed entries");
  synthetic->add_option("--samples-out", fs.samples_out,
                        "write the generated samples (train; '<path>.test' for the test set)");
  add_common(synthetic, fs);

  Flags fc;
  CLI::App* complete =
      app.add_subcommand("complete", "complete a tensor from a sample file");
  complete->add_option("--samples-in", fc.samples_in, "training samples file")->required();
  complete->add_option("--test-in", fc.test_in, "held-out samples file");
  add_common(complete, fc);

  Flags fa;
  CLI::App* apocalypse = app.add_subcommand(
      "apocalypse", "run the constant-stepsize regression with a non-stationary limit");
  apocalypse->add_option("--shape", fa.shape, "tensor dimensions (each >= 3)");
  apocalypse->add_option("--alpha", fa.alpha, "constant stepsize in (0, 1)");
  fa.rank = {2, 2, 2};
  add_common(apocalypse, fa);

  std::string trace_path;
  CLI::App* report = app.add_subcommand("report", "summarize a trace file");
  report->add_option("trace", trace_path, "trace file path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synthetic->parsed()) return run_config(to_config(fs, "synthetic"));
    if (complete->parsed()) return run_config(to_config(fc, "complete"));
    if (apocalypse->parsed()) return run_config(to_config(fa, "apocalypse"));
    if (report->parsed()) {
      char* text = nullptr;
      if (ttv_trace_report(trace_path.c_str(), &text) != TTV_OK) {
        std::cerr << "error: " << ttv_last_error() << '\n';
        return 2;
      }
      std::cout << text;
      ttv_free(text);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
