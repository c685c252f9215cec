#include "ttv/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace ttv {

namespace {

using Clock = std::chrono::steady_clock;

constexpr Eigen::Index kDenseGuard = 50'000'000;  // restart densification cap

void negate(TangentConeElement& v) {
  Eigen::Map<Vector>(v.c.data(), v.c.size()) *= -1.0;
  for (Matrix& y : v.y) y *= -1.0;
}

void negate(TangentVector& v) {
  Eigen::Map<Vector>(v.gdot.data(), v.gdot.size()) *= -1.0;
  for (Matrix& m : v.vdot) m *= -1.0;
}

std::vector<double> sample_cone(const TuckerTensor& x, const TangentConeElement& v,
                                const SampleSet& pts) {
  std::vector<Matrix> s(static_cast<size_t>(x.order()));
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    const size_t uk = static_cast<size_t>(k);
    const Matrix& u1 = v.u1[uk];
    if (u1.cols() == 0) {
      s[uk] = x.factor(k);
    } else {
      Matrix m(x.factor(k).rows(), x.factor(k).cols() + u1.cols());
      m << x.factor(k), u1;
      s[uk] = m;
    }
  }
  std::vector<double> out = sample_multilinear(v.c, s, pts);
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    const size_t uk = static_cast<size_t>(k);
    if (v.y[uk].size() == 0 || v.y[uk].isZero(0.0)) continue;
    std::vector<Matrix> w = x.factors();
    w[uk] = v.y[uk];
    std::vector<double> t = sample_multilinear(x.core(), w, pts);
    for (size_t i = 0; i < out.size(); ++i) out[i] += t[i];
  }
  return out;
}

std::vector<double> sample_tangent(const TuckerTensor& x, const TangentVector& v,
                                   const SampleSet& pts) {
  std::vector<double> out = sample_multilinear(v.gdot, x.factors(), pts);
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    const size_t uk = static_cast<size_t>(k);
    if (v.vdot[uk].size() == 0 || v.vdot[uk].isZero(0.0)) continue;
    std::vector<Matrix> w = x.factors();
    w[uk] = v.vdot[uk];
    std::vector<double> t = sample_multilinear(x.core(), w, pts);
    for (size_t i = 0; i < out.size(); ++i) out[i] += t[i];
  }
  return out;
}

// Entries of the (sorted) sparse data at the (sorted) query positions;
// zero where the query misses the support.
std::vector<double> sample_sparse(const SampleSet& data, const SampleSet& pts) {
  const Eigen::Index d = data.order();
  std::vector<double> out(static_cast<size_t>(pts.size()), 0.0);
  Eigen::Index i = 0;
  auto cmp = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index k = 0; k < d; ++k) {
      if (data.index(a, k) != pts.index(b, k)) {
        return data.index(a, k) < pts.index(b, k) ? -1 : 1;
      }
    }
    return 0;
  };
  for (Eigen::Index q = 0; q < pts.size(); ++q) {
    while (i < data.size() && cmp(i, q) < 0) ++i;
    if (i < data.size() && cmp(i, q) == 0) out[static_cast<size_t>(q)] = data.value(i);
  }
  return out;
}

// Direction oracle for the negated ambient gradient.
DirectionOracle antigradient_oracle(const AmbientTensor& grad) {
  DirectionOracle dir;
  if (const auto* sp = dynamic_cast<const SparseAmbient*>(&grad)) {
    dir.sample = [sp](const SampleSet& pts) {
      std::vector<double> v = sample_sparse(sp->entries(), pts);
      for (double& e : v) e = -e;
      return v;
    };
  }
  dir.dense = [&grad]() {
    DenseTensor out(grad.shape());
    grad.add_scaled_into(out, -1.0);
    return out;
  };
  return dir;
}

double initial_step(const Objective& f, const TuckerTensor& x, const LineSearchConfig& cfg,
                    double prev, const DirectionOracle& dir) {
  switch (cfg.init) {
    case StepInitPolicy::Constant:
      return cfg.s_const;
    case StepInitPolicy::PreviousStep:
      return prev > 0.0 ? prev : cfg.s_const;
    case StepInitPolicy::ExactQuadratic: {
      std::optional<double> s = f.exact_initial_step(x, dir);
      return (s && *s > 0.0) ? *s : cfg.s_const;
    }
  }
  return cfg.s_const;
}

class Recorder {
 public:
  Recorder(const Objective& f, const SolverOptions& opt)
      : f_(f), opt_(opt), start_(Clock::now()) {}

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

  void record(const TuckerTensor& x, double fval, double step, Eigen::Index backtracks,
              TraceEvent ev) {
    IterationRecord r;
    r.iter = iter_++;
    r.f = fval;
    if (std::optional<double> te = f_.train_error(x)) r.train_err = *te;
    if (opt_.test_set != nullptr) r.test_err = sampled_rel_error(x, *opt_.test_set);
    r.rank = x.rank();
    r.stepsize = step;
    r.backtracks = backtracks;
    r.wall_s = elapsed();
    r.event = ev;
    if (ev == TraceEvent::None && r.iter > 0) {
      const double cur = std::isnan(r.train_err) ? r.f : r.train_err;
      if (have_prev_ordinary_) {
        rel_change_hit_ =
            std::abs(cur - prev_ordinary_) <= opt_.stop.rel_change_tol * std::abs(prev_ordinary_);
      }
      prev_ordinary_ = cur;
      have_prev_ordinary_ = true;
    }
    last_train_err_ = r.train_err;
    trace_.records.push_back(std::move(r));
  }

  /// iter index the next ordinary record would get.
  Eigen::Index iterations() const { return iter_ - 1; }

  bool should_stop(std::string* reason) const {
    if (elapsed() > opt_.stop.time_budget_s) {
      *reason = "time_budget";
      return true;
    }
    if (iterations() >= opt_.stop.max_iters) {
      *reason = "max_iters";
      return true;
    }
    if (!std::isnan(last_train_err_) && last_train_err_ <= opt_.stop.train_tol) {
      *reason = "train_tol";
      return true;
    }
    if (rel_change_hit_ && opt_.stop.rel_change_tol > 0.0) {
      *reason = "rel_change";
      return true;
    }
    return false;
  }

  SolverTrace take(std::string reason) {
    trace_.stop_reason = std::move(reason);
    trace_.wall_s = elapsed();
    return std::move(trace_);
  }

  SolverTrace& trace() { return trace_; }

 private:
  const Objective& f_;
  const SolverOptions& opt_;
  Clock::time_point start_;
  SolverTrace trace_;
  Eigen::Index iter_ = 0;
  double last_train_err_ = std::numeric_limits<double>::quiet_NaN();
  double prev_ordinary_ = 0.0;
  bool have_prev_ordinary_ = false;
  bool rel_change_hit_ = false;
};

// Dense antigradient step with HOSVD retraction (restart move).  Desk scale.
ArmijoResult dense_restart_step(const Objective& f, const TuckerTensor& x, double fx,
                                const AmbientTensor& grad, const TuckerRank& r,
                                const LineSearchConfig& ls, double prev) {
  if (x.shape().num_entries() > kDenseGuard) {
    throw TtvError("restart step: problem too large to densify");
  }
  const double gnorm = grad.norm();
  DenseTensor base = to_dense(x);
  DirectionOracle dir = antigradient_oracle(grad);
  const double s0 = initial_step(f, x, ls, prev, dir);
  return armijo_backtrack(f, x, fx, gnorm * gnorm, s0, ls, [&](double s) {
    DenseTensor z = base;
    grad.add_scaled_into(z, -s);
    return hosvd(z, r);
  });
}

bool rank_equal(const TuckerRank& a, const TuckerRank& b) { return a == b; }

}  // namespace

const char* trace_event_name(TraceEvent e) {
  switch (e) {
    case TraceEvent::None: return "none";
    case TraceEvent::Restart: return "restart";
    case TraceEvent::RankDecrease: return "rank_decrease";
    case TraceEvent::RankIncrease: return "rank_increase";
    case TraceEvent::TightenEpsR: return "tighten_eps_r";
    case TraceEvent::DeficiencyDetected: return "deficiency_detected";
  }
  return "unknown";
}

ArmijoResult armijo_backtrack(const Objective& f, const TuckerTensor& x, double f_x,
                              double slope, double s0, const LineSearchConfig& cfg,
                              const std::function<TuckerTensor(double)>& candidate) {
  ArmijoResult out;
  double s = s0;
  while (s > cfg.s_min) {
    TuckerTensor z = candidate(s);
    const double fz = f.eval(z);
    if (f_x - fz >= cfg.a * s * slope) {
      out.s = s;
      out.accepted = true;
      out.f_new = fz;
      out.x_new = std::move(z);
      return out;
    }
    s *= cfg.rho;
    ++out.backtracks;
  }
  out.s = 0.0;
  out.accepted = false;
  out.f_new = f_x;
  out.x_new = x;
  return out;
}

SolveResult grap_solve(const Objective& f, const TuckerTensor& x0, const TuckerRank& r,
                       const SolverOptions& opt) {
  if (!rank_le(x0.rank(), r)) throw TtvError("grap_solve: initial rank exceeds the bound");
  TuckerTensor x = recompress(x0);
  Recorder rec(f, opt);
  double fx = f.eval(x);
  rec.record(x, fx, 0.0, 0, TraceEvent::None);
  double prev = opt.ls.s_const;
  std::string reason;
  while (!rec.should_stop(&reason)) {
    std::unique_ptr<AmbientTensor> grad = f.euclid_grad(x);
    TangentConeElement g = approx_proj_cone(x, *grad, r, opt.basis);
    negate(g);
    const double gnorm = cone_norm(x, g);
    const bool full = rank_equal(x.rank(), r);
    const bool restart = !full && gnorm < opt.omega * grad->norm();
    TraceEvent event = TraceEvent::None;
    ArmijoResult step;
    if (restart) {
      step = dense_restart_step(f, x, fx, *grad, r, opt.ls, prev);
      event = TraceEvent::Restart;
      ++rec.trace().restart_count;
    } else {
      if (gnorm == 0.0) {
        reason = "stationary";
        break;
      }
      DirectionOracle dir;
      dir.sample = [&](const SampleSet& pts) { return sample_cone(x, g, pts); };
      dir.dense = [&]() { return cone_to_dense(x, g); };
      const double s0 = initial_step(f, x, opt.ls, prev, dir);
      step = armijo_backtrack(f, x, fx, gnorm * gnorm, s0, opt.ls,
                              [&](double s) { return retract_cone_step(x, g, s, r); });
    }
    if (!step.accepted) {
      reason = "step_floor";
      break;
    }
    ++rec.trace().retraction_count;
    x = std::move(step.x_new);
    fx = step.f_new;
    prev = step.s;
    rec.record(x, fx, step.s, step.backtracks, event);
  }
  SolveResult out;
  out.trace = rec.take(reason);
  out.x = std::move(x);
  return out;
}

SolveResult rfgrap_solve(const Objective& f, const TuckerTensor& x0, const TuckerRank& r,
                         const SolverOptions& opt) {
  if (!rank_le(x0.rank(), r)) throw TtvError("rfgrap_solve: initial rank exceeds the bound");
  TuckerTensor x = recompress(x0);
  Recorder rec(f, opt);
  double fx = f.eval(x);
  rec.record(x, fx, 0.0, 0, TraceEvent::None);
  double prev = opt.ls.s_const;
  std::string reason;
  while (!rec.should_stop(&reason)) {
    std::unique_ptr<AmbientTensor> grad = f.euclid_grad(x);
    HatProj hp = hat_proj(x, *grad, r, opt.basis);
    negate(hp.element);
    double measure_sq = 0.0;
    for (double b : hp.block_norms) measure_sq += b * b;
    const bool full = rank_equal(x.rank(), r);
    const double measure = full ? std::sqrt(measure_sq) : grad->norm();
    const bool restart = hp.norm < opt.omega * measure;
    TraceEvent event = TraceEvent::None;
    ArmijoResult step;
    if (restart) {
      if (hp.norm == 0.0 && measure == 0.0) {
        reason = "stationary";
        break;
      }
      step = dense_restart_step(f, x, fx, *grad, r, opt.ls, prev);
      event = TraceEvent::Restart;
      ++rec.trace().restart_count;
      ++rec.trace().retraction_count;
    } else {
      if (hp.norm == 0.0) {
        reason = "stationary";
        break;
      }
      DirectionOracle dir;
      dir.sample = [&](const SampleSet& pts) { return sample_cone(x, hp.element, pts); };
      dir.dense = [&]() { return cone_to_dense(x, hp.element); };
      const double s0 = initial_step(f, x, opt.ls, prev, dir);
      // The update is exact; the recompression only renames the
      // representation at the exact numerical rank.
      step = armijo_backtrack(f, x, fx, hp.norm * hp.norm, s0, opt.ls, [&](double s) {
        return recompress(block_step(x, hp.element, s, hp.block));
      });
    }
    if (!step.accepted) {
      reason = "step_floor";
      break;
    }
    x = std::move(step.x_new);
    fx = step.f_new;
    prev = step.s;
    rec.record(x, fx, step.s, step.backtracks, event);
  }
  SolveResult out;
  out.trace = rec.take(reason);
  out.x = std::move(x);
  return out;
}

namespace {

RgdOutcome rgd_inner(const Objective& f, TuckerTensor x, double fx, double eps_r, double delta,
                     Eigen::Index max_inner, const SolverOptions& opt, Recorder& rec,
                     double& prev, std::string* reason) {
  RgdOutcome out;
  out.f = fx;
  for (Eigen::Index i = 0; i < max_inner; ++i) {
    if (min_core_sigma_ratio(x) <= delta) {
      out.status = RgdStatus::Deficient;
      rec.record(x, out.f, 0.0, 0, TraceEvent::DeficiencyDetected);
      break;
    }
    std::unique_ptr<AmbientTensor> grad = f.euclid_grad(x);
    TangentVector t = proj_tangent_space(x, *grad);
    negate(t);  // descent direction -grad f
    const double tnorm = tangent_norm(x, t);
    out.riem_grad_norm = tnorm;
    if (tnorm <= eps_r) {
      out.status = RgdStatus::Stationary;
      break;
    }
    if (rec.should_stop(reason)) {
      out.stop_requested = true;
      break;
    }
    DirectionOracle dir;
    dir.sample = [&](const SampleSet& pts) { return sample_tangent(x, t, pts); };
    dir.dense = [&]() { return tangent_to_dense(x, t); };
    const double s0 = initial_step(f, x, opt.ls, prev, dir);
    const TuckerRank rbar = x.rank();
    ArmijoResult step =
        armijo_backtrack(f, x, out.f, tnorm * tnorm, s0, opt.ls,
                         [&](double s) { return retract_tangent_step(x, t, s, rbar); });
    if (!step.accepted) {
      *reason = "step_floor";
      out.stop_requested = true;
      break;
    }
    ++rec.trace().retraction_count;
    x = std::move(step.x_new);
    out.f = step.f_new;
    prev = step.s;
    rec.record(x, out.f, step.s, step.backtracks, TraceEvent::None);
  }
  out.x = std::move(x);
  return out;
}

}  // namespace

SolveResult rgd_fixed_rank(const Objective& f, const TuckerTensor& x0, double eps_r,
                           double delta, Eigen::Index max_inner, const SolverOptions& opt) {
  TuckerTensor x = recompress(x0);
  Recorder rec(f, opt);
  const double fx = f.eval(x);
  rec.record(x, fx, 0.0, 0, TraceEvent::None);
  double prev = opt.ls.s_const;
  std::string reason;
  RgdOutcome o = rgd_inner(f, x, fx, eps_r, delta, max_inner, opt, rec, prev, &reason);
  if (!o.stop_requested) {
    switch (o.status) {
      case RgdStatus::Deficient: reason = "deficient"; break;
      case RgdStatus::Stationary: reason = "stationary"; break;
      case RgdStatus::Budget: reason = "budget"; break;
    }
  }
  SolveResult out;
  out.trace = rec.take(reason);
  out.x = std::move(o.x);
  return out;
}

RankDecreaseResult rank_decrease(const Objective& f, const TuckerTensor& x, double delta,
                                 double rho1) {
  const std::vector<Vector> sigma = core_singular_values(x);
  const double fx = f.eval(x);
  RankDecreaseResult out;
  double d = delta;
  for (int round = 0; round < 200; ++round) {
    TuckerRank rhat(static_cast<size_t>(x.order()));
    for (Eigen::Index k = 0; k < x.order(); ++k) {
      const Vector& s = sigma[static_cast<size_t>(k)];
      Eigen::Index cnt = 0;
      for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) >= d * s(0)) ++cnt;
      }
      rhat[static_cast<size_t>(k)] = std::max<Eigen::Index>(cnt, 1);
    }
    if (rank_equal(rhat, x.rank())) {
      out.x = x;
      out.rank = rhat;
      out.changed = false;
      out.delta_used = d;
      return out;
    }
    TuckerTensor xhat = hosvd(x, rhat);
    if (f.eval(xhat) <= fx) {
      out.rank = xhat.rank();
      out.changed = !rank_equal(out.rank, x.rank());
      out.x = std::move(xhat);
      out.delta_used = d;
      return out;
    }
    d *= rho1;
  }
  throw TtvError("rank_decrease: no acceptable truncation found");
}

namespace {

// N = -grad f restricted to ell_k fresh directions per mode (negated core;
// the basis is sign-invariant).
TuckerTensor normal_direction(const TuckerTensor& x, const AmbientTensor& grad,
                              const std::vector<Eigen::Index>& ell, const ConeBasisChoice& b) {
  TuckerTensor n = normal_increase_direction(x, grad, ell, b);
  DenseTensor ghat = n.core();
  Eigen::Map<Vector>(ghat.data(), ghat.size()) *= -1.0;
  return TuckerTensor(std::move(ghat), n.factors());
}

ArmijoResult increase_line_search(const Objective& f, const TuckerTensor& x, double fx,
                                  const TuckerTensor& nd, const SolverOptions& opt,
                                  double prev) {
  DirectionOracle dir;
  dir.sample = [&](const SampleSet& pts) { return sample_tucker(nd, pts); };
  dir.dense = [&]() { return to_dense(nd); };
  const double s0 = initial_step(f, x, opt.ls, prev, dir);
  const double n_norm = nd.norm();
  return armijo_backtrack(f, x, fx, n_norm * n_norm, s0, opt.ls,
                          [&](double s) { return increase_step(x, nd, s); });
}

std::vector<Eigen::Index> clamp_ell(const std::vector<Eigen::Index>& ell, const TuckerRank& rbar,
                                    const TuckerRank& r) {
  std::vector<Eigen::Index> e(rbar.size());
  for (size_t k = 0; k < rbar.size(); ++k) {
    const Eigen::Index want = ell.empty() ? 1 : ell[k];
    e[k] = std::min<Eigen::Index>(want, r[k] - rbar[k]);
    e[k] = std::max<Eigen::Index>(e[k], 0);
  }
  return e;
}

}  // namespace

SolveResult rank_increase(const Objective& f, const TuckerTensor& x,
                          const std::vector<Eigen::Index>& ell, const SolverOptions& opt) {
  Recorder rec(f, opt);
  const double fx = f.eval(x);
  rec.record(x, fx, 0.0, 0, TraceEvent::None);
  std::unique_ptr<AmbientTensor> grad = f.euclid_grad(x);
  TuckerTensor nd = normal_direction(x, *grad, ell, opt.basis);
  if (nd.norm() == 0.0) {
    throw TtvError("rank_increase: normal direction is zero (ineffective)");
  }
  ArmijoResult step = increase_line_search(f, x, fx, nd, opt, opt.ls.s_const);
  SolveResult out;
  if (step.accepted) {
    out.x = std::move(step.x_new);
    rec.record(out.x, step.f_new, step.s, step.backtracks, TraceEvent::RankIncrease);
    out.trace = rec.take("rank_increase");
  } else {
    out.x = x;
    out.trace = rec.take("step_floor");
  }
  return out;
}

SolveResult tram_solve(const Objective& f, const TuckerTensor& x0, const TuckerRank& r,
                       const TramConfig& cfg, const SolverOptions& opt) {
  if (!rank_le(x0.rank(), r)) throw TtvError("tram_solve: initial rank exceeds the bound");
  TuckerTensor x = recompress(x0);
  Recorder rec(f, opt);
  double fx = f.eval(x);
  rec.record(x, fx, 0.0, 0, TraceEvent::None);
  double eps_r = cfg.eps_r0;
  double delta = cfg.delta;
  double prev = opt.ls.s_const;
  std::string reason;
  while (!rec.should_stop(&reason)) {
    RgdOutcome o = rgd_inner(f, x, fx, eps_r, delta, cfg.inner_max_iters, opt, rec, prev,
                             &reason);
    x = std::move(o.x);
    fx = o.f;
    if (o.stop_requested) break;
    if (o.status == RgdStatus::Deficient) {
      RankDecreaseResult rd = rank_decrease(f, x, delta, cfg.rho1);
      if (!rd.changed) {
        // No truncation at or below the current threshold is affordable yet.
        // Adapt the working threshold below the present spectrum gap and keep
        // optimizing; the weak directions either recover or decay until the
        // truncation becomes free.
        delta = std::min(delta, min_core_sigma_ratio(x)) * cfg.rho1;
        if (delta < 1e-16) {
          reason = "rank_decrease_no_change";
          break;
        }
        continue;
      }
      x = std::move(rd.x);
      fx = f.eval(x);
      rec.record(x, fx, 0.0, 0, TraceEvent::RankDecrease);
      continue;
    }
    if (o.status == RgdStatus::Budget) continue;
    // Stationary at the current target.
    if (rank_equal(x.rank(), r)) {
      eps_r *= cfg.rho_r;
      rec.record(x, fx, 0.0, 0, TraceEvent::TightenEpsR);
      if (eps_r < 1e-13) {
        reason = "eps_r_floor";
        break;
      }
      continue;
    }
    std::unique_ptr<AmbientTensor> grad = f.euclid_grad(x);
    const double gnorm = grad->norm();
    const double tnorm = o.riem_grad_norm;
    const std::vector<Eigen::Index> ell = clamp_ell(cfg.ell, x.rank(), r);
    bool did_move = false;
    bool want_restart = false;
    // A mode already at its bound admits no fresh directions, and the
    // block-diagonal merge needs at least one per mode: N = 0 then.
    const bool can_increase =
        std::all_of(ell.begin(), ell.end(), [](Eigen::Index e) { return e > 0; });
    TuckerTensor nd;
    double n_norm = 0.0;
    if (can_increase) {
      nd = normal_direction(x, *grad, ell, opt.basis);
      n_norm = nd.norm();
    }
    // The rank should only be touched once fixed-rank descent is exhausted:
    // the tangent part of the gradient has become a small fraction of the
    // whole gradient.  While descent within the manifold still dominates
    // (tnorm > eps2 * gnorm), neither growing the rank nor restarting helps;
    // we tighten eps_r and keep optimizing at the current rank instead.
    const bool near_stationary = cfg.eps2 * gnorm >= tnorm;
    if (near_stationary && n_norm >= cfg.eps1 * tnorm && n_norm > 0.0) {
      ArmijoResult step = increase_line_search(f, x, fx, nd, opt, prev);
      if (step.accepted) {
        x = std::move(step.x_new);
        fx = step.f_new;
        prev = step.s;
        rec.record(x, fx, step.s, step.backtracks, TraceEvent::RankIncrease);
        did_move = true;
      }
    } else if (near_stationary) {
      want_restart = true;
    }
    if (did_move) continue;
    if (want_restart && cfg.variant == TramConfig::Variant::Paper) {
      ArmijoResult step = dense_restart_step(f, x, fx, *grad, r, opt.ls, prev);
      if (step.accepted) {
        ++rec.trace().restart_count;
        ++rec.trace().retraction_count;
        x = std::move(step.x_new);
        fx = step.f_new;
        prev = step.s;
        rec.record(x, fx, step.s, step.backtracks, TraceEvent::Restart);
        continue;
      }
    }
    eps_r *= cfg.rho_r;
    rec.record(x, fx, 0.0, 0, TraceEvent::TightenEpsR);
    if (eps_r < 1e-13) {
      reason = "eps_r_floor";
      break;
    }
  }
  SolveResult out;
  out.trace = rec.take(reason);
  out.x = std::move(x);
  return out;
}

StationaritySnapshot stationarity_snapshot(const Objective& f, const TuckerTensor& x,
                                           const TuckerRank& r, const ConeBasisChoice& basis) {
  StationaritySnapshot s;
  std::unique_ptr<AmbientTensor> grad = f.euclid_grad(x);
  s.ambient_grad_norm = grad->norm();
  try {
    s.riem_grad_norm = tangent_norm(x, proj_tangent_space(x, *grad));
  } catch (const TtvError&) {
    // rank-deficient core: the tangent space is not defined there
  }
  // The cone projection needs a full-rank core; re-express at the exact rank
  // (the tensor value is unchanged).
  const TuckerTensor xr = recompress(x);
  s.approx_cone_norm = cone_norm(xr, approx_proj_cone(xr, *grad, r, basis));
  return s;
}

}  // namespace ttv
