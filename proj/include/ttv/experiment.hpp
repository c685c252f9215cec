// Experiment layer: reproducible problem generation, sample-set and trace
// files, and a one-call experiment runner the CLI and the C API share.
//
// Sample file format (text, 1-based indices):
//   # shape n1 n2 ... nd
//   i1 i2 ... id value
// with values written with 17 significant digits.
//
// Trace file format: one JSON object per line; the first line is a header
// with the configuration, format version and RNG version.  Identical runs
// produce identical files except for the wall-time fields.

#pragma once

#include <iosfwd>

#include "ttv/solvers.hpp"

namespace ttv {

inline constexpr const char* kTraceFormatVersion = "ttv-trace-v1";

/// Ground-truth Tucker tensor with seeded Gaussian core and factors
/// (factors orthonormalized by QR).
TuckerTensor gen_synthetic(const Shape& shape, const TuckerRank& rank, uint64_t seed);

struct SamplePair {
  SampleSet train;  // Omega
  SampleSet test;   // Gamma, disjoint from Omega, same size
};

/// |Omega| = |Gamma| = round(p * prod n_k) positions drawn uniformly without
/// replacement (disjoint), filled with the entries of a.  Errors when
/// 2 * p > 1.
SamplePair gen_samples(const TuckerTensor& a, double p, uint64_t seed);

SampleSet load_samples(std::istream& in, const std::string& name = "<stream>");
SampleSet load_samples_file(const std::string& path);
void save_samples(std::ostream& out, const SampleSet& s);
void save_samples_file(const std::string& path, const SampleSet& s);

struct ExperimentConfig {
  std::string task = "synthetic";  // synthetic | complete | apocalypse
  std::string solver = "grap";     // grap | rfgrap | rgd | tram
  std::vector<Eigen::Index> shape = {60, 60, 60};
  std::vector<Eigen::Index> true_rank = {4, 4, 4};  // synthetic ground truth
  std::vector<Eigen::Index> rank = {4, 4, 4};       // bound r
  std::vector<Eigen::Index> init_rank;              // default: rank
  double sampling_rate = 0.3;
  uint64_t seed = 0;
  double alpha = 0.3;  // apocalypse constant stepsize
  double omega = 0.1;
  std::string basis = "leading";  // leading | random
  std::string variant = "paper";  // tram: paper | practical
  TramConfig tram;
  LineSearchConfig ls;
  StoppingRules stop;
  std::string samples_in;   // complete: train samples file
  std::string test_in;      // complete: optional test samples file
  std::string samples_out;  // synthetic: dump generated samples
  std::string trace_out;    // trace file path
};

ExperimentConfig config_from_json(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);

struct ExperimentResult {
  SolverTrace trace;
  TuckerRank final_rank;
  double final_f = 0.0;
  double final_train_err = std::numeric_limits<double>::quiet_NaN();
  double final_test_err = std::numeric_limits<double>::quiet_NaN();
  StationaritySnapshot snapshot;
  std::string stop_reason;
  double wall_s = 0.0;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string result_to_json(const ExperimentConfig& cfg, const ExperimentResult& res);

void save_trace(std::ostream& out, const ExperimentConfig& cfg, const SolverTrace& trace);
void save_trace_file(const std::string& path, const ExperimentConfig& cfg,
                     const SolverTrace& trace);

struct TraceFile {
  std::string header_json;
  std::vector<IterationRecord> records;
  std::string stop_reason;
};

TraceFile load_trace(std::istream& in, const std::string& name = "<stream>");
TraceFile load_trace_file(const std::string& path);

/// Human-readable summary of a trace file (the `report` subcommand).
std::string summarize_trace(const TraceFile& t);

}  // namespace ttv
