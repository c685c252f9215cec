// Matrix kernels: thin SVD, truncation, orthonormalization, complements,
// pseudo-inverses of full-row-rank unfoldings, and the closed-form metric
// projection onto the tangent cone of a bounded-rank matrix variety.

#pragma once

#include "ttv/tensor.hpp"

namespace ttv {

/// Relative singular-value cutoff used for numerical rank decisions.
inline constexpr double kRankTol = 1e-12;

struct ThinSVD {
  Matrix u;        // m x q, orthonormal columns
  Vector sigma;    // q descending, nonnegative
  Matrix v;        // n x q, orthonormal columns
  Eigen::Index numerical_rank = 0;  // #{ sigma_i >= rank_tol * sigma_1 }
};

/// Thin SVD with numerical rank relative to rank_tol * sigma_1.
ThinSVD thin_svd(const Matrix& a, double rank_tol = kRankTol);

/// Best rank-<=r approximation (Eckart-Young).  r may exceed the numerical
/// rank, in which case the returned factors are narrower.
ThinSVD truncate_rank(const Matrix& a, Eigen::Index r, double rank_tol = kRankTol);

/// QR-based orthonormal basis with the sign convention diag(R) >= 0.
/// Errors if the input is numerically column-rank-deficient.
Matrix orthonormalize(const Matrix& a, double rank_tol = kRankTol);

/// m orthonormal columns orthogonal to span(U); U must have orthonormal
/// columns.  Deterministic given the seed.
Matrix complement_basis(const Matrix& u, Eigen::Index m, uint64_t seed = 0);

/// Right pseudo-inverse G^T (G G^T)^{-1} of a full-row-rank matrix, computed
/// through the SVD.  Errors (with a condition estimate in the message) when
/// the rows are numerically dependent.
Matrix pinv_rows(const Matrix& g, double rank_tol = kRankTol);

/// Metric projection of A onto the tangent cone of { rank <= r } at X, where
/// X = U diag(s) V^T has exact rank rbar = cols(U) <= r:
///   P(A) = P_U A + A P_V - P_U A P_V + best rank-(r - rbar) part of
///          (I - P_U) A (I - P_V).
Matrix proj_matrix_tangent_cone(const Matrix& a, const Matrix& u, const Matrix& v,
                                Eigen::Index r);

}  // namespace ttv
