// Tucker representation X = G x_1 U_1 ... x_d U_d with orthonormal factors,
// the truncated higher-order SVD, and the HOSVD retraction.
//
// The stored rank is the core's shape; the exact Tucker rank may be lower.
// Operations that require a full-rank core say so and error otherwise.

#pragma once

#include "ttv/matkernels.hpp"
#include "ttv/tensor.hpp"

namespace ttv {

using TuckerRank = std::vector<Eigen::Index>;

std::string rank_to_string(const TuckerRank& r);

/// Elementwise comparison helpers for Tucker ranks of equal order.
bool rank_le(const TuckerRank& a, const TuckerRank& b);

class TuckerTensor {
 public:
  TuckerTensor() = default;
  /// Factors must have orthonormal columns; factor k is n_k x r_k and the
  /// core is r_1 x ... x r_d.  Checked up to 1e-12.
  TuckerTensor(DenseTensor core, std::vector<Matrix> factors);

  const DenseTensor& core() const { return core_; }
  const std::vector<Matrix>& factors() const { return factors_; }
  const Matrix& factor(Eigen::Index k) const { return factors_[static_cast<size_t>(k)]; }

  Eigen::Index order() const { return core_.order(); }
  /// Ambient shape (n_1, ..., n_d).
  Shape shape() const;
  /// Stored rank (core shape).
  TuckerRank rank() const;

  double norm() const { return fro_norm(core_); }

 private:
  DenseTensor core_;
  std::vector<Matrix> factors_;
};

/// Truncated higher-order SVD of a dense tensor: per-mode best rank-r_k
/// truncation applied sequentially in ascending mode order.  Quasi-optimal
/// within sqrt(d) of the best rank-r approximation.
TuckerTensor hosvd(const DenseTensor& x, const TuckerRank& r);

/// Structured HOSVD of a Tucker tensor: works on the small core only and
/// composes factors, so the cost is independent of the ambient dimensions.
TuckerTensor hosvd(const TuckerTensor& x, const TuckerRank& r);

/// Exact dense reconstruction.
DenseTensor to_dense(const TuckerTensor& x);

/// hosvd at stored rank r = shape-capped values; convenience for building a
/// representation from dense data without truncation error when r is the
/// exact rank.
TuckerTensor from_dense(const DenseTensor& x, const TuckerRank& r);

/// Singular values of each mode-k unfolding of the core.  For orthonormal
/// factors these equal the singular values of the full tensor's unfoldings.
std::vector<Vector> core_singular_values(const TuckerTensor& x);

/// Exact (numerical) Tucker rank at the relative tolerance tol * sigma_1.
TuckerRank exact_tucker_rank(const TuckerTensor& x, double tol = kRankTol);

/// Re-express X at its exact numerical rank; the value changes by at most
/// the discarded singular values (below tol * sigma_1 per mode).
TuckerTensor recompress(const TuckerTensor& x, double tol = kRankTol);

/// Smallest over modes of sigma_min / sigma_max of the core unfoldings.
double min_core_sigma_ratio(const TuckerTensor& x);

}  // namespace ttv
