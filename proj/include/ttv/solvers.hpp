// First-order solvers over Tucker varieties: Armijo backtracking, projected
// gradient descent with HOSVD retraction (full variety, approximate cone
// projection), its retraction-free variant, fixed-rank Riemannian gradient
// descent, rank decrease/increase moves, and the rank-adaptive outer loop.

#pragma once

#include <chrono>
#include <limits>

#include "ttv/geometry.hpp"
#include "ttv/objectives.hpp"

namespace ttv {

enum class StepInitPolicy { ExactQuadratic, Constant, PreviousStep };

struct LineSearchConfig {
  double rho = 0.5;      // backtracking factor
  double a = 1e-4;       // sufficient-decrease constant
  double s_min = 1e-10;  // stepsize floor
  StepInitPolicy init = StepInitPolicy::ExactQuadratic;
  double s_const = 1.0;  // initial step for Constant (and fallback)
};

struct StoppingRules {
  Eigen::Index max_iters = 500;
  double train_tol = 1e-12;       // on the training error, when defined
  double rel_change_tol = 1e-8;   // on consecutive ordinary iterations
  double time_budget_s = std::numeric_limits<double>::infinity();
};

enum class TraceEvent { None, Restart, RankDecrease, RankIncrease, TightenEpsR,
                        DeficiencyDetected };

const char* trace_event_name(TraceEvent e);

struct IterationRecord {
  Eigen::Index iter = 0;
  double f = 0.0;
  double train_err = std::numeric_limits<double>::quiet_NaN();
  double test_err = std::numeric_limits<double>::quiet_NaN();
  TuckerRank rank;
  double stepsize = 0.0;
  Eigen::Index backtracks = 0;
  double wall_s = 0.0;
  TraceEvent event = TraceEvent::None;
};

struct SolverTrace {
  std::vector<IterationRecord> records;
  std::string stop_reason;
  Eigen::Index retraction_count = 0;  // value-truncating HOSVD applications
  Eigen::Index restart_count = 0;
  double wall_s = 0.0;
};

struct SolveResult {
  TuckerTensor x;
  SolverTrace trace;
};

struct StationaritySnapshot {
  double riem_grad_norm = std::numeric_limits<double>::quiet_NaN();
  double ambient_grad_norm = 0.0;
  double approx_cone_norm = 0.0;
};

struct SolverOptions {
  LineSearchConfig ls;
  StoppingRules stop;
  double omega = 0.1;  // angle-condition constant in (0, 1]
  ConeBasisChoice basis;
  const SampleSet* test_set = nullptr;  // optional held-out metrics
};

struct ArmijoResult {
  double s = 0.0;
  Eigen::Index backtracks = 0;
  bool accepted = false;
  double f_new = 0.0;
  TuckerTensor x_new;
};

/// Backtracking line search: the first s = rho^l * s0 > s_min with
/// f(x) - f(candidate(s)) >= s * a * slope is accepted; hitting the floor
/// returns accepted = false and the unchanged point.
ArmijoResult armijo_backtrack(const Objective& f, const TuckerTensor& x, double f_x,
                              double slope, double s0, const LineSearchConfig& cfg,
                              const std::function<TuckerTensor(double)>& candidate);

/// Projected gradient descent on the bounded-rank variety: approximate cone
/// projection of the antigradient, angle-condition restart with the dense
/// antigradient, HOSVD retraction.
SolveResult grap_solve(const Objective& f, const TuckerTensor& x0, const TuckerRank& r,
                       const SolverOptions& opt);

/// Retraction-free variant: steps along the largest partial projection;
/// accepted non-restart steps stay in the variety exactly.
SolveResult rfgrap_solve(const Objective& f, const TuckerTensor& x0, const TuckerRank& r,
                         const SolverOptions& opt);

enum class RgdStatus { Deficient, Stationary, Budget };

struct RgdOutcome {
  TuckerTensor x;
  RgdStatus status = RgdStatus::Budget;
  double f = 0.0;
  double riem_grad_norm = std::numeric_limits<double>::quiet_NaN();
  bool stop_requested = false;  // a global stopping rule fired
};

/// Fixed-rank Riemannian gradient descent.  Checks rank deficiency
/// (min_k sigma_min/sigma_max of the core unfoldings <= delta) before
/// stationarity (|grad| <= eps_r) on every iteration.
SolveResult rgd_fixed_rank(const Objective& f, const TuckerTensor& x0, double eps_r,
                           double delta, Eigen::Index max_inner, const SolverOptions& opt);

struct TramConfig {
  enum class Variant { Paper, PracticalFlowchart };
  Variant variant = Variant::Paper;
  double eps_r0 = 0.1;   // initial stationarity target
  double rho_r = 0.5;    // tightening factor for eps_r
  double delta = 0.01;   // rank-deficiency threshold
  double rho1 = 0.5;     // shrink factor inside rank decrease
  std::vector<Eigen::Index> ell;  // per-mode rank increments (default all 1)
  double eps1 = 0.01;    // normal-direction significance
  double eps2 = 0.3;     // near-stationarity: rank moves only when ||T|| <= eps2 ||grad f||
  Eigen::Index inner_max_iters = 5;
};

struct RankDecreaseResult {
  TuckerTensor x;
  TuckerRank rank;
  bool changed = false;
  double delta_used = 0.0;
};

/// Truncate to the ranks supported by the core spectrum: keep
/// #{ sigma_i >= delta * sigma_1 } per mode (at least 1), shrinking delta by
/// rho1 until the objective does not increase.
RankDecreaseResult rank_decrease(const Objective& f, const TuckerTensor& x, double delta,
                                 double rho1);

/// One rank-increase move along N = (-grad f) restricted to ell_k fresh
/// directions per mode, with Armijo on the merged representation.  Errors
/// when N = 0 (the increase cannot help).
SolveResult rank_increase(const Objective& f, const TuckerTensor& x,
                          const std::vector<Eigen::Index>& ell, const SolverOptions& opt);

/// Rank-adaptive outer loop around rgd_fixed_rank.
SolveResult tram_solve(const Objective& f, const TuckerTensor& x0, const TuckerRank& r,
                       const TramConfig& cfg, const SolverOptions& opt);

/// Stationarity certificates at X: Riemannian gradient norm (NaN at
/// rank-deficient cores), ambient gradient norm, approximate cone measure.
StationaritySnapshot stationarity_snapshot(const Objective& f, const TuckerTensor& x,
                                           const TuckerRank& r, const ConeBasisChoice& basis);

}  // namespace ttv
