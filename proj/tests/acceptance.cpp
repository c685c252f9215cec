// Acceptance suite: end-to-end checks with pinned tolerances, one PASS/FAIL
// line per criterion.  Exit code 0 iff every criterion passes.

#include <ttv/experiment.hpp>
#include <ttv/rng.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace ttv;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s: criterion %d (%s) — %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double now_s() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

DenseTensor random_tensor(const Shape& shape, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  DenseTensor x(shape);
  for (auto& v : x.storage()) v = rng.normal();
  return x;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  CounterRng rng(seed, 3);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

TuckerTensor random_tucker(const Shape& shape, const TuckerRank& r, std::uint64_t seed) {
  DenseTensor core = random_tensor(Shape(r), seed);
  std::vector<Matrix> factors;
  for (Eigen::Index k = 0; k < shape.order(); ++k)
    factors.push_back(orthonormalize(
        random_matrix(shape.dim(k), r[static_cast<std::size_t>(k)],
                      seed * 131 + static_cast<std::uint64_t>(k) + 1)));
  return TuckerTensor(std::move(core), std::move(factors));
}

double dense_diff(const DenseTensor& a, const DenseTensor& b) {
  DenseTensor d = a;
  add_scaled(d, b, -1.0);
  return fro_norm(d);
}

// Traces collected by criteria 1-5 for the audits in criterion 7.
struct CollectedTrace {
  std::string label;
  TuckerRank bound;
  SolverTrace trace;
};
std::vector<CollectedTrace> g_traces;

// ---------------------------------------------------------------------------
// Criterion 1: the apocalypse instance follows the closed-form trajectory.

void criterion1() {
  const double t_start = now_s();
  const double alpha = 0.3;
  const Shape shape{{10, 10, 10}};
  const TuckerRank r = {2, 2, 2};

  // Canonical data: A = e1^3 + e3^3, X0 = e1^3 + e2^3.
  auto basis_vec = [&](Eigen::Index i) {
    std::vector<Vector> e;
    for (int k = 0; k < 3; ++k) {
      Vector v = Vector::Zero(10);
      v(i) = 1.0;
      e.push_back(v);
    }
    return e;
  };
  DenseTensor a = outer_rank1(basis_vec(0));
  add_scaled(a, outer_rank1(basis_vec(2)), 1.0);
  DenseLsqObjective f(a);
  DenseTensor x0d = outer_rank1(basis_vec(0));
  add_scaled(x0d, outer_rank1(basis_vec(1)), 1.0);
  TuckerTensor x0 = hosvd(x0d, r);

  bool iterates_ok = true;
  double worst_dev = 0.0;
  TuckerTensor x_final = x0;
  SolverTrace final_trace;
  for (int t = 1; t <= 30; ++t) {
    SolverOptions opt;
    opt.ls.init = StepInitPolicy::Constant;
    opt.ls.s_const = alpha / 2.0;  // f carries a factor 2 in its gradient
    opt.stop.max_iters = t;
    opt.stop.train_tol = 0.0;
    opt.stop.rel_change_tol = 0.0;
    SolveResult res = grap_solve(f, x0, r, opt);
    DenseTensor expect = outer_rank1(basis_vec(0));
    add_scaled(expect, outer_rank1(basis_vec(1)), std::pow(1.0 - alpha, t));
    double dev = dense_diff(to_dense(res.x), expect);
    worst_dev = std::max(worst_dev, dev);
    if (dev > 1e-10) iterates_ok = false;
    if (t == 30) {
      x_final = res.x;
      final_trace = res.trace;
    }
  }
  g_traces.push_back({"apocalypse", r, final_trace});

  ConeBasisChoice basis;
  StationaritySnapshot snap = stationarity_snapshot(f, x_final, r, basis);
  const double elapsed = now_s() - t_start;
  const bool pass = iterates_ok && snap.approx_cone_norm <= 1e-4 &&
                    snap.ambient_grad_norm >= 1.0 && elapsed < 5.0;
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "max iterate deviation %.2e (tol 1e-10), cone measure %.2e (<= 1e-4), "
                "ambient grad %.3f (>= 1), %.2fs (< 5s)",
                worst_dev, snap.approx_cone_norm, snap.ambient_grad_norm, elapsed);
  report(1, "apocalypse trajectory", pass, detail);
}

// ---------------------------------------------------------------------------
// Criteria 2-5 share the synthetic completion family: 60^3, rank (4,4,4),
// sampling rate 0.3, seeds 0..9.

ExperimentConfig completion_config(uint64_t seed) {
  ExperimentConfig cfg;
  cfg.task = "synthetic";
  cfg.shape = {60, 60, 60};
  cfg.true_rank = {4, 4, 4};
  cfg.sampling_rate = 0.3;
  cfg.seed = seed;
  cfg.stop.rel_change_tol = 0.0;
  return cfg;
}

// First record index whose training error is at or below tol; -1 if never.
Eigen::Index iters_to_train(const SolverTrace& t, double tol) {
  for (const IterationRecord& r : t.records)
    if (!std::isnan(r.train_err) && r.train_err <= tol) return r.iter;
  return -1;
}

std::vector<Eigen::Index> g_grap_iters_to_1e8(10, -1);

void criterion2() {
  int successes = 0;
  double max_wall = 0.0, worst_test = 0.0;
  bool time_ok = true;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    ExperimentConfig cfg = completion_config(seed);
    cfg.solver = "grap";
    cfg.rank = {4, 4, 4};
    cfg.stop.max_iters = 500;
    cfg.stop.train_tol = 1e-10;
    ExperimentResult res = run_experiment(cfg);
    g_traces.push_back({"grap seed " + std::to_string(seed), cfg.rank, res.trace});
    g_grap_iters_to_1e8[seed] = iters_to_train(res.trace, 1e-8);
    max_wall = std::max(max_wall, res.wall_s);
    if (res.wall_s >= 60.0) time_ok = false;
    const bool converged = res.final_train_err <= 1e-10 && res.final_test_err <= 1e-6;
    if (converged) ++successes;
    worst_test = std::max(worst_test, res.final_test_err);
  }
  const bool pass = successes >= 9 && time_ok;
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "%d/10 seeds reached train 1e-10 and test 1e-6 within 500 iterations "
                "(need >= 9), worst test %.2e, max wall %.1fs (< 60s)",
                successes, worst_test, max_wall);
  report(2, "projected gradient on synthetic completion", pass, detail);
}

void criterion3() {
  int successes = 0;
  double max_wall = 0.0;
  bool time_ok = true;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    ExperimentConfig cfg = completion_config(seed);
    cfg.solver = "tram";
    cfg.rank = {6, 6, 6};
    cfg.stop.max_iters = 1500;
    cfg.stop.train_tol = 1e-10;
    ExperimentResult res = run_experiment(cfg);
    g_traces.push_back({"tram-over seed " + std::to_string(seed), cfg.rank, res.trace});
    max_wall = std::max(max_wall, res.wall_s);
    if (res.wall_s >= 120.0) time_ok = false;
    if (res.final_rank == TuckerRank{4, 4, 4} && res.final_test_err <= 1e-6) ++successes;
  }
  const bool pass = successes >= 8 && time_ok;
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "%d/10 seeds ended at rank (4,4,4) with test 1e-6 (need >= 8), "
                "max wall %.1fs (< 120s)",
                successes, max_wall);
  report(3, "rank-adaptive descent from an over-parametrized bound", pass, detail);
}

void criterion4() {
  int successes = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    ExperimentConfig cfg = completion_config(seed);
    cfg.solver = "tram";
    cfg.rank = {4, 4, 4};
    cfg.init_rank = {1, 1, 1};
    cfg.stop.max_iters = 1500;
    cfg.stop.train_tol = 1e-10;
    ExperimentResult res = run_experiment(cfg);
    g_traces.push_back({"tram-under seed " + std::to_string(seed), cfg.rank, res.trace});
    bool monotone_rank = true;
    TuckerRank prev = {1, 1, 1};
    for (const IterationRecord& r : res.trace.records) {
      if (!rank_le(prev, r.rank)) monotone_rank = false;
      prev = r.rank;
    }
    if (monotone_rank && res.final_test_err <= 1e-6) ++successes;
  }
  const bool pass = successes >= 8;
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "%d/10 seeds grew the rank monotonically to test 1e-6 (need >= 8)",
                successes);
  report(4, "rank-adaptive growth from rank (1,1,1)", pass, detail);
}

void criterion5() {
  int converged = 0, never_retracting = 0, slower_than_grap = 0, comparable = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    ExperimentConfig cfg = completion_config(seed);
    cfg.solver = "rfgrap";
    cfg.rank = {4, 4, 4};
    cfg.stop.max_iters = 5000;
    cfg.stop.train_tol = 1e-8;
    ExperimentResult res = run_experiment(cfg);
    g_traces.push_back({"rfgrap seed " + std::to_string(seed), cfg.rank, res.trace});
    if (res.final_train_err <= 1e-8) ++converged;
    // Every truncating retraction must belong to a restart step.
    if (res.trace.retraction_count == res.trace.restart_count) ++never_retracting;
    Eigen::Index rf = iters_to_train(res.trace, 1e-8);
    Eigen::Index gd = g_grap_iters_to_1e8[seed];
    if (rf >= 0 && gd >= 0) {
      ++comparable;
      if (rf >= gd) ++slower_than_grap;
    }
  }
  const bool pass = converged == 10 && never_retracting == 10 && slower_than_grap >= 7;
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "%d/10 reached train 1e-8, %d/10 retraction-free outside restarts, "
                "%d/%d seeds needed at least as many iterations as the retraction-based "
                "solver (need >= 7)",
                converged, never_retracting, slower_than_grap, comparable);
  report(5, "retraction-free variant", pass, detail);
}

// ---------------------------------------------------------------------------
// Criterion 6: geometry property suite.

void criterion6() {
  const double t_start = now_s();
  ConeBasisChoice leading;
  bool pass = true;
  std::string why;

  // (a) Descent identity of the approximate cone projection, 200 instances.
  double worst_identity = 0.0;
  for (uint64_t trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(trial % 3);  // orders 2, 3, 4
    std::vector<Eigen::Index> dims, rbar, r;
    CounterRng rng(9000 + trial, 5);
    for (int k = 0; k < d; ++k) {
      Eigen::Index n = 4 + static_cast<Eigen::Index>(rng.uniform_below(3));  // 4..6
      Eigen::Index rb = 1 + static_cast<Eigen::Index>(rng.uniform_below(2));  // 1..2
      dims.push_back(n);
      rbar.push_back(rb);
      r.push_back(std::min<Eigen::Index>(n, rb + static_cast<Eigen::Index>(rng.uniform_below(3))));
    }
    // Clamp the point rank to a feasible multilinear rank: each mode rank
    // must not exceed the product of the others, or no such point exists.
    for (bool changed = true; changed;) {
      changed = false;
      for (int k = 0; k < d; ++k) {
        Eigen::Index prod_others = 1;
        for (int j = 0; j < d; ++j)
          if (j != k) prod_others *= rbar[static_cast<size_t>(j)];
        if (rbar[static_cast<size_t>(k)] > prod_others) {
          rbar[static_cast<size_t>(k)] = prod_others;
          changed = true;
        }
      }
    }
    TuckerTensor x = random_tucker(Shape(dims), rbar, 10000 + trial);
    DenseTensor a = random_tensor(Shape(dims), 20000 + trial);
    const double an = fro_norm(a);
    for (auto& v : a.storage()) v /= an;  // unit-norm ambient input
    ConeBasisChoice choice = (trial % 2 == 0)
                                 ? leading
                                 : ConeBasisChoice{ConeBasisStrategy::RandomComplement, trial};
    TangentConeElement p = approx_proj_cone(x, DenseAmbient(a), r, choice);
    DenseTensor pd = cone_to_dense(x, p);
    worst_identity = std::max(worst_identity, std::abs(inner(a, pd) - inner(pd, pd)));
  }
  if (worst_identity > 1e-10) {
    pass = false;
    why += "identity violated; ";
  }

  // (b) HOSVD retraction distance bound, 100 order-3 triples, constant 2.5.
  double worst_ratio = 0.0;
  for (uint64_t trial = 0; trial < 100; ++trial) {
    TuckerTensor x = random_tucker(Shape{{5, 6, 5}}, {2, 2, 2}, 30000 + trial);
    TuckerRank r = {3, 3, 2};
    DenseTensor a = random_tensor(x.shape(), 40000 + trial);
    TangentConeElement v = approx_proj_cone(x, DenseAmbient(a), r, leading);
    const double s = 0.05 + 0.1 * static_cast<double>(trial % 10);
    TuckerTensor stepped = retract_cone_step(x, v, s, r);
    const double vnorm = s * cone_norm(x, v);
    if (vnorm <= 0) continue;
    worst_ratio = std::max(worst_ratio, dense_diff(to_dense(stepped), to_dense(x)) / vnorm);
  }
  if (worst_ratio > 2.5 * (1 + 1e-12)) {
    pass = false;
    why += "retraction bound violated; ";
  }

  // (c) Feasibility of the d+1 single-block moves without truncation.
  bool feasible = true;
  for (uint64_t trial = 0; trial < 20; ++trial) {
    TuckerTensor x = random_tucker(Shape{{6, 6, 6}}, {2, 2, 2}, 50000 + trial);
    TuckerRank r = {3, 4, 3};
    DenseTensor a = random_tensor(x.shape(), 60000 + trial);
    for (Eigen::Index k = 0; k <= 3; ++k) {
      TangentConeElement p = partial_proj(x, DenseAmbient(a), r, k, leading);
      TuckerTensor moved = block_step(x, p, 0.5, k);
      if (!rank_le(exact_tucker_rank(moved, 1e-10), r)) feasible = false;
      DenseTensor expect = to_dense(x);
      add_scaled(expect, cone_to_dense(x, p), 0.5);
      if (dense_diff(to_dense(moved), expect) > 1e-9 * fro_norm(expect)) feasible = false;
    }
  }
  if (!feasible) {
    pass = false;
    why += "block feasibility violated; ";
  }

  // (d) Order-2 parity with the matrix closed form.
  double worst_parity = 0.0;
  for (uint64_t trial = 0; trial < 25; ++trial) {
    TuckerTensor x = random_tucker(Shape{{8, 7}}, {2, 2}, 70000 + trial);
    TuckerRank r = {4, 4};
    DenseTensor a = random_tensor(x.shape(), 80000 + trial);
    const double an = fro_norm(a);
    for (auto& v : a.storage()) v /= an;
    TangentConeElement p = approx_proj_cone(x, DenseAmbient(a), r, leading);
    ThinSVD s = thin_svd(unfold(to_dense(x), 0));
    Matrix expect = proj_matrix_tangent_cone(unfold(a, 0), s.u.leftCols(s.numerical_rank),
                                             s.v.leftCols(s.numerical_rank), 4);
    worst_parity =
        std::max(worst_parity, (unfold(cone_to_dense(x, p), 0) - expect).norm());
  }
  if (worst_parity > 1e-10) {
    pass = false;
    why += "order-2 parity violated; ";
  }

  // (e) Finite-difference gradient checks for both objectives.
  double worst_fd = 0.0;
  {
    DenseTensor ref = random_tensor(Shape{{5, 5, 5}}, 90001);
    std::vector<int64_t> idx;
    std::vector<double> vals;
    int count = 0;
    for (Eigen::Index i3 = 0; i3 < 5; ++i3)
      for (Eigen::Index i2 = 0; i2 < 5; ++i2)
        for (Eigen::Index i1 = 0; i1 < 5; ++i1)
          if (count++ % 2 == 0) {
            idx.insert(idx.end(), {i1, i2, i3});
            vals.push_back(ref.at({i1, i2, i3}));
          }
    CompletionObjective fc(SampleSet(ref.shape(), idx, vals));
    DenseLsqObjective fl(ref);
    for (uint64_t trial = 0; trial < 10; ++trial) {
      TuckerTensor x = random_tucker(ref.shape(), {2, 2, 2}, 91000 + trial);
      DenseTensor v = random_tensor(ref.shape(), 92000 + trial);
      const double h = 1e-6;
      for (const Objective* obj : {static_cast<const Objective*>(&fc),
                                   static_cast<const Objective*>(&fl)}) {
        DenseTensor g(ref.shape());
        g.setZero();
        obj->euclid_grad(x)->add_scaled_into(g, 1.0);
        auto value_at = [&](double t) {
          DenseTensor y = to_dense(x);
          add_scaled(y, v, t);
          return obj->eval(hosvd(y, {5, 5, 5}));
        };
        const double fd = (value_at(h) - value_at(-h)) / (2 * h);
        const double dir = inner(g, v);
        worst_fd = std::max(worst_fd, std::abs(fd - dir) / std::max(1.0, std::abs(dir)));
      }
    }
  }
  if (worst_fd > 1e-6) {
    pass = false;
    why += "gradient check failed; ";
  }

  const double elapsed = now_s() - t_start;
  if (elapsed >= 120.0) {
    pass = false;
    why += "too slow; ";
  }
  char detail[320];
  std::snprintf(detail, sizeof(detail),
                "identity residual %.2e (<= 1e-10, 200 runs), retraction ratio %.3f "
                "(<= 2.5, 100 runs), blocks feasible %s, order-2 parity %.2e (<= 1e-10), "
                "gradient FD error %.2e (<= 1e-6), %.1fs (< 120s)%s%s",
                worst_identity, worst_ratio, feasible ? "yes" : "no", worst_parity, worst_fd,
                elapsed, why.empty() ? "" : " — ", why.c_str());
  report(6, "geometry property suite", pass, detail);
}

// ---------------------------------------------------------------------------
// Criterion 7: audits over every trace produced above.

void criterion7() {
  bool pass = true;
  std::string first_bad;
  int audited = 0;
  for (const CollectedTrace& ct : g_traces) {
    ++audited;
    for (std::size_t i = 0; i < ct.trace.records.size(); ++i) {
      const IterationRecord& r = ct.trace.records[i];
      if (i > 0 && r.f > ct.trace.records[i - 1].f) {
        pass = false;
        if (first_bad.empty())
          first_bad = "objective increased in " + ct.label + " at iteration " +
                      std::to_string(r.iter);
      }
      if (!rank_le(r.rank, ct.bound)) {
        pass = false;
        if (first_bad.empty())
          first_bad = "rank bound violated in " + ct.label + " at iteration " +
                      std::to_string(r.iter);
      }
    }
  }
  char detail[320];
  std::snprintf(detail, sizeof(detail),
                "%d traces audited: objective exactly nonincreasing and rank within the "
                "bound at every record%s%s",
                audited, first_bad.empty() ? "" : " — first violation: ", first_bad.c_str());
  report(7, "trace audits", pass, detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  if (g_failures == 0) {
    std::printf("acceptance: all 7 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
