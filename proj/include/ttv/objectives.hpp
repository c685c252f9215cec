// Objectives over Tucker tensors: sampled-entry storage, the tensor
// completion objective (sparse gradient, never densified), the dense
// least-squares objective, exact initial stepsizes and error metrics.

#pragma once

#include <functional>
#include <optional>

#include "ttv/tucker.hpp"

namespace ttv {

/// Immutable set of sampled entries of a tensor: 1-based indices externally,
/// stored 0-based, sorted lexicographically on (i_1, ..., i_d), no
/// duplicates.  Values ride along with the indices.
class SampleSet {
 public:
  SampleSet() = default;
  /// idx is row-major per sample (sample s occupies idx[s*d .. s*d+d)),
  /// 0-based.  Sorts and rejects duplicates.
  SampleSet(Shape shape, std::vector<int64_t> idx, std::vector<double> values);

  const Shape& shape() const { return shape_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(values_.size()); }
  Eigen::Index order() const { return shape_.order(); }

  int64_t index(Eigen::Index sample, Eigen::Index mode) const {
    return idx_[static_cast<size_t>(sample * order() + mode)];
  }
  double value(Eigen::Index sample) const { return values_[static_cast<size_t>(sample)]; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<int64_t>& indices() const { return idx_; }

  /// Same pattern, different values.
  SampleSet with_values(std::vector<double> values) const;

  double values_norm() const;

 private:
  Shape shape_;
  std::vector<int64_t> idx_;
  std::vector<double> values_;
};

/// Entries of G x_1 W_1 ... x_d W_d at the sample positions; W_k need not be
/// orthonormal.  Cost O(|samples| * prod r_k) via sequential contraction.
std::vector<double> sample_multilinear(const DenseTensor& core, const std::vector<Matrix>& w,
                                       const SampleSet& pts);

std::vector<double> sample_tucker(const TuckerTensor& x, const SampleSet& pts);

/// AmbientTensor view over sampled entries (a sparse tensor).
class SparseAmbient : public AmbientTensor {
 public:
  explicit SparseAmbient(SampleSet entries) : entries_(std::move(entries)) {}

  const Shape& shape() const override { return entries_.shape(); }
  Matrix contract_except(Eigen::Index k, const std::vector<Matrix>& w) const override;
  double norm() const override { return entries_.values_norm(); }
  void add_scaled_into(DenseTensor& out, double s) const override;

  const SampleSet& entries() const { return entries_; }

 private:
  SampleSet entries_;
};

/// Callbacks a search direction exposes so objectives can compute exact
/// initial stepsizes without knowing the direction's parametrization.
struct DirectionOracle {
  /// Entries of the direction at given positions.
  std::function<std::vector<double>(const SampleSet&)> sample;
  /// Dense value; may be empty when densifying is not sensible.
  std::function<DenseTensor()> dense;
};

class Objective {
 public:
  virtual ~Objective() = default;
  virtual const Shape& shape() const = 0;
  virtual double eval(const TuckerTensor& x) const = 0;
  virtual std::unique_ptr<AmbientTensor> euclid_grad(const TuckerTensor& x) const = 0;
  /// Exact minimizer of s -> f(X + s*V) when f is quadratic along V,
  /// clamped below at 0; nullopt when unavailable.
  virtual std::optional<double> exact_initial_step(const TuckerTensor& x,
                                                   const DirectionOracle& dir) const {
    (void)x;
    (void)dir;
    return std::nullopt;
  }
  /// Training error if the objective defines one (completion does).
  virtual std::optional<double> train_error(const TuckerTensor& x) const {
    (void)x;
    return std::nullopt;
  }
};

/// f(X) = 1/2 || P_Omega(X) - P_Omega(A) ||^2; the Euclidean gradient is the
/// sparse residual on Omega.
class CompletionObjective : public Objective {
 public:
  explicit CompletionObjective(SampleSet train);

  const Shape& shape() const override { return train_.shape(); }
  double eval(const TuckerTensor& x) const override;
  std::unique_ptr<AmbientTensor> euclid_grad(const TuckerTensor& x) const override;
  std::optional<double> exact_initial_step(const TuckerTensor& x,
                                           const DirectionOracle& dir) const override;
  std::optional<double> train_error(const TuckerTensor& x) const override;

  const SampleSet& train_set() const { return train_; }
  std::vector<double> residual(const TuckerTensor& x) const;

 private:
  SampleSet train_;
  double rhs_norm_ = 0.0;
};

/// f(X) = || X - A ||^2 (no 1/2; gradient 2(X - A)).  Desk scale only.
class DenseLsqObjective : public Objective {
 public:
  explicit DenseLsqObjective(DenseTensor a) : a_(std::move(a)) {}

  const Shape& shape() const override { return a_.shape(); }
  double eval(const TuckerTensor& x) const override;
  std::unique_ptr<AmbientTensor> euclid_grad(const TuckerTensor& x) const override;
  std::optional<double> exact_initial_step(const TuckerTensor& x,
                                           const DirectionOracle& dir) const override;

  const DenseTensor& target() const { return a_; }

 private:
  DenseTensor a_;
};

/// argmin_s 1/2 || resid + s*dir ||^2 clamped below at 0; +0 when dir = 0.
double exact_initial_stepsize(const std::vector<double>& dir,
                              const std::vector<double>& resid);

/// || P(X) - values || / || values ||; +inf when the reference is zero.
double sampled_rel_error(const TuckerTensor& x, const SampleSet& reference);

/// || X - A || / || A ||; +inf when A = 0.
double dense_rel_error(const TuckerTensor& x, const DenseTensor& a);

/// 10 log10( N * max(A) / ||X - A||^2 ), N the number of entries; +inf on an
/// exact match.
double psnr(const TuckerTensor& x, const DenseTensor& a);

}  // namespace ttv
