#include "ttv/experiment.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "ttv/rng.hpp"

namespace ttv {

using nlohmann::json;

namespace {

// Stable float formatting: 17 significant digits round-trip doubles.
std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<Eigen::Index> to_index_vec(const json& j) {
  std::vector<Eigen::Index> v;
  for (const auto& e : j) v.push_back(e.get<Eigen::Index>());
  return v;
}

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, CounterRng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

}  // namespace

TuckerTensor gen_synthetic(const Shape& shape, const TuckerRank& rank, uint64_t seed) {
  if (static_cast<Eigen::Index>(rank.size()) != shape.order()) {
    throw TtvError("gen_synthetic: rank order mismatch");
  }
  CounterRng core_rng(seed, /*stream=*/1);
  DenseTensor core((Shape(rank)));
  for (Eigen::Index i = 0; i < core.size(); ++i) core[i] = core_rng.normal();
  std::vector<Matrix> factors(static_cast<size_t>(shape.order()));
  for (Eigen::Index k = 0; k < shape.order(); ++k) {
    if (rank[static_cast<size_t>(k)] > shape.dim(k)) {
      throw TtvError("gen_synthetic: rank exceeds dimension");
    }
    CounterRng rng(seed, /*stream=*/10 + static_cast<uint64_t>(k));
    factors[static_cast<size_t>(k)] =
        orthonormalize(gaussian_matrix(shape.dim(k), rank[static_cast<size_t>(k)], rng));
  }
  return TuckerTensor(std::move(core), std::move(factors));
}

SamplePair gen_samples(const TuckerTensor& a, double p, uint64_t seed) {
  if (2.0 * p > 1.0) {
    throw TtvError("gen_samples: 2p > 1, disjoint train/test sets of size p*N do not fit");
  }
  if (p <= 0.0) throw TtvError("gen_samples: sampling rate must be positive");
  const Shape shape = a.shape();
  const Eigen::Index n = shape.num_entries();
  const Eigen::Index m = static_cast<Eigen::Index>(std::llround(p * static_cast<double>(n)));
  if (m < 1) throw TtvError("gen_samples: empty sample set");
  // Partial Fisher-Yates for the first 2m entries of a random permutation.
  std::vector<int64_t> pool(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) pool[static_cast<size_t>(i)] = i;
  CounterRng rng(seed, /*stream=*/2);
  for (Eigen::Index i = 0; i < 2 * m; ++i) {
    const Eigen::Index j =
        i + static_cast<Eigen::Index>(rng.uniform_below(static_cast<uint64_t>(n - i)));
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
  }
  const Eigen::Index d = shape.order();
  auto make_set = [&](Eigen::Index begin, Eigen::Index count) {
    std::vector<int64_t> idx(static_cast<size_t>(count * d));
    for (Eigen::Index s = 0; s < count; ++s) {
      int64_t lin = pool[static_cast<size_t>(begin + s)];
      for (Eigen::Index k = 0; k < d; ++k) {
        idx[static_cast<size_t>(s * d + k)] = lin % shape.dim(k);
        lin /= shape.dim(k);
      }
    }
    SampleSet set(shape, std::move(idx), std::vector<double>(static_cast<size_t>(count), 0.0));
    return set.with_values(sample_tucker(a, set));
  };
  SamplePair out{make_set(0, m), make_set(m, m)};
  return out;
}

void save_samples(std::ostream& out, const SampleSet& s) {
  out << "# shape";
  for (Eigen::Index k = 0; k < s.order(); ++k) out << ' ' << s.shape().dim(k);
  out << '\n';
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    for (Eigen::Index k = 0; k < s.order(); ++k) out << s.index(i, k) + 1 << ' ';
    out << fmt17(s.value(i)) << '\n';
  }
}

void save_samples_file(const std::string& path, const SampleSet& s) {
  std::ofstream out(path);
  if (!out) throw TtvError("save_samples: cannot open " + path);
  save_samples(out, s);
}

SampleSet load_samples(std::istream& in, const std::string& name) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) -> TtvError {
    return TtvError(name + ":" + std::to_string(lineno) + ": " + what);
  };
  if (!std::getline(in, line)) throw TtvError(name + ": empty file");
  ++lineno;
  std::istringstream hs(line);
  std::string hash, word;
  hs >> hash >> word;
  if (hash != "#" || word != "shape") throw fail("expected header '# shape n1 ... nd'");
  std::vector<Eigen::Index> dims;
  Eigen::Index n;
  while (hs >> n) dims.push_back(n);
  if (dims.empty()) throw fail("header lists no dimensions");
  Shape shape(dims);
  const Eigen::Index d = shape.order();
  std::vector<int64_t> idx;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    for (Eigen::Index k = 0; k < d; ++k) {
      int64_t i;
      if (!(ls >> i)) throw fail("expected " + std::to_string(d) + " indices and a value");
      if (i < 1 || i > shape.dim(k)) throw fail("index out of range for mode " +
                                                std::to_string(k + 1));
      idx.push_back(i - 1);
    }
    double v;
    if (!(ls >> v)) throw fail("missing value");
    std::string rest;
    if (ls >> rest) throw fail("trailing data");
    values.push_back(v);
  }
  try {
    return SampleSet(shape, std::move(idx), std::move(values));
  } catch (const TtvError& e) {
    throw TtvError(name + ": " + e.what());
  }
}

SampleSet load_samples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TtvError("load_samples: cannot open " + path);
  return load_samples(in, path);
}

namespace {

StepInitPolicy policy_from_string(const std::string& s) {
  if (s == "exact") return StepInitPolicy::ExactQuadratic;
  if (s == "constant") return StepInitPolicy::Constant;
  if (s == "previous") return StepInitPolicy::PreviousStep;
  throw TtvError("unknown stepsize policy: " + s);
}

std::string policy_to_string(StepInitPolicy p) {
  switch (p) {
    case StepInitPolicy::ExactQuadratic: return "exact";
    case StepInitPolicy::Constant: return "constant";
    case StepInitPolicy::PreviousStep: return "previous";
  }
  return "exact";
}

}  // namespace

ExperimentConfig config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw TtvError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  if (j.contains("task")) c.task = j["task"].get<std::string>();
  if (j.contains("solver")) c.solver = j["solver"].get<std::string>();
  if (j.contains("shape")) c.shape = to_index_vec(j["shape"]);
  if (j.contains("true_rank")) c.true_rank = to_index_vec(j["true_rank"]);
  if (j.contains("rank")) c.rank = to_index_vec(j["rank"]);
  if (j.contains("init_rank")) c.init_rank = to_index_vec(j["init_rank"]);
  if (j.contains("sampling_rate")) c.sampling_rate = j["sampling_rate"].get<double>();
  if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
  if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
  if (j.contains("omega")) c.omega = j["omega"].get<double>();
  if (j.contains("basis")) c.basis = j["basis"].get<std::string>();
  if (j.contains("variant")) c.variant = j["variant"].get<std::string>();
  if (j.contains("tram")) {
    const json& t = j["tram"];
    if (t.contains("eps_r0")) c.tram.eps_r0 = t["eps_r0"].get<double>();
    if (t.contains("rho_r")) c.tram.rho_r = t["rho_r"].get<double>();
    if (t.contains("delta")) c.tram.delta = t["delta"].get<double>();
    if (t.contains("rho1")) c.tram.rho1 = t["rho1"].get<double>();
    if (t.contains("ell")) c.tram.ell = to_index_vec(t["ell"]);
    if (t.contains("eps1")) c.tram.eps1 = t["eps1"].get<double>();
    if (t.contains("eps2")) c.tram.eps2 = t["eps2"].get<double>();
    if (t.contains("inner_max_iters")) {
      c.tram.inner_max_iters = t["inner_max_iters"].get<Eigen::Index>();
    }
  }
  if (j.contains("ls")) {
    const json& t = j["ls"];
    if (t.contains("rho")) c.ls.rho = t["rho"].get<double>();
    if (t.contains("a")) c.ls.a = t["a"].get<double>();
    if (t.contains("s_min")) c.ls.s_min = t["s_min"].get<double>();
    if (t.contains("init")) c.ls.init = policy_from_string(t["init"].get<std::string>());
    if (t.contains("s_const")) c.ls.s_const = t["s_const"].get<double>();
  }
  if (j.contains("stop")) {
    const json& t = j["stop"];
    if (t.contains("max_iters")) c.stop.max_iters = t["max_iters"].get<Eigen::Index>();
    if (t.contains("train_tol")) c.stop.train_tol = t["train_tol"].get<double>();
    if (t.contains("rel_change_tol")) c.stop.rel_change_tol = t["rel_change_tol"].get<double>();
    if (t.contains("time_budget_s") && !t["time_budget_s"].is_null()) {
      c.stop.time_budget_s = t["time_budget_s"].get<double>();
    }
  }
  if (j.contains("samples_in")) c.samples_in = j["samples_in"].get<std::string>();
  if (j.contains("test_in")) c.test_in = j["test_in"].get<std::string>();
  if (j.contains("samples_out")) c.samples_out = j["samples_out"].get<std::string>();
  if (j.contains("trace_out")) c.trace_out = j["trace_out"].get<std::string>();
  if (c.solver != "grap" && c.solver != "rfgrap" && c.solver != "rgd" && c.solver != "tram") {
    throw TtvError("config: unknown solver: " + c.solver);
  }
  if (c.task != "synthetic" && c.task != "complete" && c.task != "apocalypse") {
    throw TtvError("config: unknown task: " + c.task);
  }
  if (c.basis != "leading" && c.basis != "random") {
    throw TtvError("config: unknown basis: " + c.basis);
  }
  if (c.variant != "paper" && c.variant != "practical") {
    throw TtvError("config: unknown variant: " + c.variant);
  }
  return c;
}

namespace {

json config_json(const ExperimentConfig& c) {
  json j;
  j["task"] = c.task;
  j["solver"] = c.solver;
  j["shape"] = c.shape;
  j["true_rank"] = c.true_rank;
  j["rank"] = c.rank;
  j["init_rank"] = c.init_rank;
  j["sampling_rate"] = c.sampling_rate;
  j["seed"] = c.seed;
  j["alpha"] = c.alpha;
  j["omega"] = c.omega;
  j["basis"] = c.basis;
  j["variant"] = c.variant;
  j["tram"] = {{"eps_r0", c.tram.eps_r0}, {"rho_r", c.tram.rho_r}, {"delta", c.tram.delta},
               {"rho1", c.tram.rho1},     {"ell", c.tram.ell},     {"eps1", c.tram.eps1},
               {"eps2", c.tram.eps2},     {"inner_max_iters", c.tram.inner_max_iters}};
  j["ls"] = {{"rho", c.ls.rho},
             {"a", c.ls.a},
             {"s_min", c.ls.s_min},
             {"init", policy_to_string(c.ls.init)},
             {"s_const", c.ls.s_const}};
  j["stop"] = {{"max_iters", c.stop.max_iters},
               {"train_tol", c.stop.train_tol},
               {"rel_change_tol", c.stop.rel_change_tol},
               {"time_budget_s", std::isfinite(c.stop.time_budget_s)
                                     ? json(c.stop.time_budget_s)
                                     : json(nullptr)}};
  j["samples_in"] = c.samples_in;
  j["test_in"] = c.test_in;
  j["samples_out"] = c.samples_out;
  j["trace_out"] = c.trace_out;
  return j;
}

json record_json(const IterationRecord& r) {
  json j;
  j["iter"] = r.iter;
  j["f"] = r.f;
  j["train_err"] = std::isnan(r.train_err) ? json(nullptr) : json(r.train_err);
  j["test_err"] = std::isnan(r.test_err) ? json(nullptr) : json(r.test_err);
  j["rank"] = r.rank;
  j["step"] = r.stepsize;
  j["backtracks"] = r.backtracks;
  j["wall_s"] = r.wall_s;
  j["event"] = trace_event_name(r.event);
  return j;
}

TraceEvent event_from_name(const std::string& s) {
  for (TraceEvent e : {TraceEvent::None, TraceEvent::Restart, TraceEvent::RankDecrease,
                       TraceEvent::RankIncrease, TraceEvent::TightenEpsR,
                       TraceEvent::DeficiencyDetected}) {
    if (s == trace_event_name(e)) return e;
  }
  throw TtvError("unknown trace event: " + s);
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(); }

void save_trace(std::ostream& out, const ExperimentConfig& cfg, const SolverTrace& trace) {
  json header;
  header["format"] = kTraceFormatVersion;
  header["rng"] = kRngVersion;
  header["config"] = config_json(cfg);
  header["stop_reason"] = trace.stop_reason;
  header["retractions"] = trace.retraction_count;
  header["restarts"] = trace.restart_count;
  out << header.dump() << '\n';
  for (const IterationRecord& r : trace.records) out << record_json(r).dump() << '\n';
}

void save_trace_file(const std::string& path, const ExperimentConfig& cfg,
                     const SolverTrace& trace) {
  std::ofstream out(path);
  if (!out) throw TtvError("save_trace: cannot open " + path);
  save_trace(out, cfg, trace);
}

TraceFile load_trace(std::istream& in, const std::string& name) {
  TraceFile t;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) -> TtvError {
    return TtvError(name + ":" + std::to_string(lineno) + ": " + what);
  };
  if (!std::getline(in, line)) throw TtvError(name + ": empty trace");
  ++lineno;
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw fail(std::string("invalid header JSON: ") + e.what());
  }
  if (!header.contains("format") || header["format"].get<std::string>() != kTraceFormatVersion) {
    throw fail("unsupported trace format");
  }
  t.header_json = line;
  if (header.contains("stop_reason")) t.stop_reason = header["stop_reason"].get<std::string>();
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw fail(std::string("invalid record JSON: ") + e.what());
    }
    try {
      IterationRecord r;
      r.iter = j.at("iter").get<Eigen::Index>();
      r.f = j.at("f").get<double>();
      r.train_err = j.at("train_err").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                : j.at("train_err").get<double>();
      r.test_err = j.at("test_err").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                              : j.at("test_err").get<double>();
      r.rank = to_index_vec(j.at("rank"));
      r.stepsize = j.at("step").get<double>();
      r.backtracks = j.at("backtracks").get<Eigen::Index>();
      r.wall_s = j.at("wall_s").get<double>();
      r.event = event_from_name(j.at("event").get<std::string>());
      t.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw fail(std::string("bad record: ") + e.what());
    }
  }
  return t;
}

TraceFile load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TtvError("load_trace: cannot open " + path);
  return load_trace(in, path);
}

std::string summarize_trace(const TraceFile& t) {
  std::ostringstream os;
  os << "records: " << t.records.size() << '\n';
  if (!t.records.empty()) {
    const IterationRecord& last = t.records.back();
    os << "final iter: " << last.iter << '\n';
    os << "final f: " << fmt17(last.f) << '\n';
    if (!std::isnan(last.train_err)) os << "final train error: " << fmt17(last.train_err) << '\n';
    if (!std::isnan(last.test_err)) os << "final test error: " << fmt17(last.test_err) << '\n';
    os << "final rank: " << rank_to_string(last.rank) << '\n';
  }
  std::map<std::string, int> events;
  bool monotone = true;
  for (size_t i = 0; i < t.records.size(); ++i) {
    if (t.records[i].event != TraceEvent::None) ++events[trace_event_name(t.records[i].event)];
    if (i > 0 && t.records[i].f > t.records[i - 1].f) monotone = false;
  }
  for (const auto& [name, count] : events) os << "event " << name << ": " << count << '\n';
  os << "objective monotone: " << (monotone ? "yes" : "no") << '\n';
  if (!t.stop_reason.empty()) os << "stop reason: " << t.stop_reason << '\n';
  return os.str();
}

namespace {

TuckerRank default_init_rank(const ExperimentConfig& cfg) {
  return cfg.init_rank.empty() ? cfg.rank : cfg.init_rank;
}

SolverOptions build_options(const ExperimentConfig& cfg, const SampleSet* test) {
  SolverOptions opt;
  opt.ls = cfg.ls;
  opt.stop = cfg.stop;
  opt.omega = cfg.omega;
  opt.basis.seed = cfg.seed;
  if (cfg.basis == "leading") {
    opt.basis.strategy = ConeBasisStrategy::LeadingSingular;
  } else if (cfg.basis == "random") {
    opt.basis.strategy = ConeBasisStrategy::RandomComplement;
  } else {
    throw TtvError("unknown basis strategy: " + cfg.basis);
  }
  opt.test_set = test;
  return opt;
}

SolveResult dispatch_solver(const ExperimentConfig& cfg, const Objective& f,
                            const TuckerTensor& x0, const SolverOptions& opt) {
  if (cfg.solver == "grap") return grap_solve(f, x0, cfg.rank, opt);
  if (cfg.solver == "rfgrap") return rfgrap_solve(f, x0, cfg.rank, opt);
  if (cfg.solver == "rgd") {
    return rgd_fixed_rank(f, x0, cfg.tram.eps_r0, cfg.tram.delta, cfg.stop.max_iters, opt);
  }
  if (cfg.solver == "tram") {
    TramConfig tc = cfg.tram;
    if (cfg.variant == "paper") {
      tc.variant = TramConfig::Variant::Paper;
    } else if (cfg.variant == "practical") {
      tc.variant = TramConfig::Variant::PracticalFlowchart;
    } else {
      throw TtvError("unknown tram variant: " + cfg.variant);
    }
    return tram_solve(f, x0, cfg.rank, tc, opt);
  }
  throw TtvError("unknown solver: " + cfg.solver);
}

ExperimentResult finish(const ExperimentConfig& cfg, const Objective& f, SolveResult&& solved,
                        const SampleSet* test) {
  ExperimentResult res;
  res.final_rank = exact_tucker_rank(solved.x);
  res.final_f = f.eval(solved.x);
  if (std::optional<double> te = f.train_error(solved.x)) res.final_train_err = *te;
  if (test != nullptr) res.final_test_err = sampled_rel_error(solved.x, *test);
  SolverOptions opt = build_options(cfg, nullptr);
  res.snapshot = stationarity_snapshot(f, recompress(solved.x), cfg.rank, opt.basis);
  res.stop_reason = solved.trace.stop_reason;
  res.wall_s = solved.trace.wall_s;
  res.trace = std::move(solved.trace);
  if (!cfg.trace_out.empty()) save_trace_file(cfg.trace_out, cfg, res.trace);
  return res;
}

ExperimentResult run_completion(const ExperimentConfig& cfg, SampleSet train,
                                std::optional<SampleSet> test) {
  CompletionObjective f(std::move(train));
  SolverOptions opt = build_options(cfg, test ? &*test : nullptr);
  const TuckerTensor x0 = gen_synthetic(f.shape(), default_init_rank(cfg), cfg.seed ^ 0x1717ULL);
  SolveResult solved = dispatch_solver(cfg, f, x0, opt);
  return finish(cfg, f, std::move(solved), test ? &*test : nullptr);
}

// Regression instance with a non-stationary limit: A = e1^3 + e3^3, start at
// e1^3 + e2^3, constant stepsize.  With f = ||X - A||^2 the antigradient is
// 2(A - X); the canonical sequence (1 - alpha)^t follows the residual A - X,
// so the applied constant step is alpha / 2.
ExperimentResult run_apocalypse(const ExperimentConfig& cfg) {
  Shape shape(cfg.shape);
  const Eigen::Index d = shape.order();
  for (Eigen::Index k = 0; k < d; ++k) {
    if (shape.dim(k) < 3) throw TtvError("apocalypse: each dimension must be >= 3");
  }
  auto basis_vec = [&](Eigen::Index k, Eigen::Index i) {
    Vector e = Vector::Zero(shape.dim(k));
    e(i) = 1.0;
    return e;
  };
  std::vector<Vector> e1s, e2s, e3s;
  for (Eigen::Index k = 0; k < d; ++k) {
    e1s.push_back(basis_vec(k, 0));
    e2s.push_back(basis_vec(k, 1));
    e3s.push_back(basis_vec(k, 2));
  }
  DenseTensor a = outer_rank1(e1s);
  add_scaled(a, outer_rank1(e3s), 1.0);
  DenseLsqObjective f(std::move(a));

  DenseTensor x0d = outer_rank1(e1s);
  add_scaled(x0d, outer_rank1(e2s), 1.0);
  TuckerRank r2(static_cast<size_t>(d), 2);
  TuckerTensor x0 = hosvd(x0d, r2);

  ExperimentConfig run = cfg;
  run.solver = "grap";
  run.ls.init = StepInitPolicy::Constant;
  run.ls.s_const = cfg.alpha / 2.0;
  run.stop.rel_change_tol = 0.0;
  run.stop.train_tol = 0.0;
  SolverOptions opt = build_options(run, nullptr);
  SolveResult solved = grap_solve(f, x0, cfg.rank, opt);
  return finish(run, f, std::move(solved), nullptr);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.task == "apocalypse") return run_apocalypse(cfg);
  if (cfg.task == "synthetic") {
    const TuckerTensor gt = gen_synthetic(Shape(cfg.shape), cfg.true_rank, cfg.seed);
    SamplePair samples = gen_samples(gt, cfg.sampling_rate, cfg.seed ^ 0x5a5aULL);
    if (!cfg.samples_out.empty()) {
      save_samples_file(cfg.samples_out, samples.train);
      save_samples_file(cfg.samples_out + ".test", samples.test);
    }
    return run_completion(cfg, std::move(samples.train), std::move(samples.test));
  }
  if (cfg.task == "complete") {
    if (cfg.samples_in.empty()) throw TtvError("complete: samples_in is required");
    SampleSet train = load_samples_file(cfg.samples_in);
    std::optional<SampleSet> test;
    if (!cfg.test_in.empty()) test = load_samples_file(cfg.test_in);
    return run_completion(cfg, std::move(train), std::move(test));
  }
  throw TtvError("unknown task: " + cfg.task);
}

std::string result_to_json(const ExperimentConfig& cfg, const ExperimentResult& res) {
  json j;
  j["config"] = config_json(cfg);
  j["stop_reason"] = res.stop_reason;
  j["iterations"] = res.trace.records.empty() ? 0 : res.trace.records.back().iter;
  j["final_rank"] = res.final_rank;
  j["final_f"] = res.final_f;
  j["final_train_err"] =
      std::isnan(res.final_train_err) ? json(nullptr) : json(res.final_train_err);
  j["final_test_err"] =
      std::isnan(res.final_test_err) ? json(nullptr) : json(res.final_test_err);
  j["riem_grad_norm"] = std::isnan(res.snapshot.riem_grad_norm)
                            ? json(nullptr)
                            : json(res.snapshot.riem_grad_norm);
  j["ambient_grad_norm"] = res.snapshot.ambient_grad_norm;
  j["approx_cone_norm"] = res.snapshot.approx_cone_norm;
  j["retractions"] = res.trace.retraction_count;
  j["restarts"] = res.trace.restart_count;
  j["wall_s"] = res.wall_s;
  return j.dump(2);
}

}  // namespace ttv
