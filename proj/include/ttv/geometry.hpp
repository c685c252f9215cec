// Geometry of Tucker tensor varieties: tangent spaces of the fixed-rank
// manifold, tangent cones of the bounded-rank variety, their (approximate)
// metric projections, partial projections, and step assembly.
//
// Ambient tensors enter through the AmbientTensor accessor so that sparse
// gradients are never densified; every operation below touches the ambient
// data only through small contractions.

#pragma once

#include "ttv/tucker.hpp"

namespace ttv {

enum class ConeBasisStrategy { RandomComplement, LeadingSingular };

struct ConeBasisChoice {
  ConeBasisStrategy strategy = ConeBasisStrategy::LeadingSingular;
  uint64_t seed = 0;  // used by RandomComplement and for padding
};

/// Tangent vector at X in the fixed-rank manifold, parametrized
///   V = Gdot x_k U_k + sum_k G x_k Vdot_k x_{j != k} U_j
/// with the gauge condition U_k^T Vdot_k = 0.
struct TangentVector {
  DenseTensor gdot;          // core-shaped
  std::vector<Matrix> vdot;  // n_k x rbar_k, orthogonal to U_k
};

/// Element of the tangent cone of the bounded-rank variety at X (rank rbar,
/// bound r), parametrized
///   V = C x_k [U_k U1_k] + sum_k G x_k Y_k x_{j != k} U_j
/// where U1_k is orthonormal with r_k - rbar_k columns orthogonal to U_k and
/// Y_k is orthogonal to span([U_k U1_k]).  X + V0 and X + V_k stay in the
/// variety, and the d+1 summands are pairwise orthogonal.
struct TangentConeElement {
  TuckerRank bound;        // r
  DenseTensor c;           // r_1 x ... x r_d
  std::vector<Matrix> u1;  // n_k x (r_k - rbar_k)
  std::vector<Matrix> y;   // n_k x rbar_k
};

double tangent_norm(const TuckerTensor& x, const TangentVector& v);
double cone_norm(const TuckerTensor& x, const TangentConeElement& v);

DenseTensor tangent_to_dense(const TuckerTensor& x, const TangentVector& v);
DenseTensor cone_to_dense(const TuckerTensor& x, const TangentConeElement& v);

/// Orthogonal projection of A onto the tangent space at X (fixed-rank
/// manifold).  Errors when the core is numerically row-rank-deficient in
/// some unfolding; callers are expected to decrease the rank first.
TangentVector proj_tangent_space(const TuckerTensor& x, const AmbientTensor& a);

/// Per-mode bases U1_k (r_k - rbar_k orthonormal columns orthogonal to U_k)
/// spanning the rank-increasing directions of the cone element.
/// LeadingSingular takes the leading left singular vectors of
/// P_{U_k}^perp (A x_{j != k} U_j^T)_(k); for order-2 dense inputs it uses
/// the corner P_U^perp A P_V^perp, which is the closed-form optimum.
std::vector<Matrix> select_cone_basis(const TuckerTensor& x, const AmbientTensor& a,
                                      const TuckerRank& r, const ConeBasisChoice& choice);

/// Approximate metric projection of A onto the tangent cone at X.  Satisfies
/// <A, P(A)> = ||P(A)||^2 exactly; at full rank (rbar = r) it is the exact
/// tangent-space projection.
TangentConeElement approx_proj_cone(const TuckerTensor& x, const AmbientTensor& a,
                                    const TuckerRank& r, const ConeBasisChoice& choice);

/// Partial projection block k = 0..d (0 is the C-block; k >= 1 uses the full
/// complement of U_k).  Each block alone satisfies the descent identity and
/// keeps X + P_k(A) inside the variety.
TangentConeElement partial_proj(const TuckerTensor& x, const AmbientTensor& a,
                                const TuckerRank& r, Eigen::Index k,
                                const ConeBasisChoice& choice);

struct HatProj {
  TangentConeElement element;
  Eigen::Index block = 0;  // argmax block (ties resolved to the smallest)
  double norm = 0.0;
  std::vector<double> block_norms;  // d+1 entries
};

/// Largest partial projection by Frobenius norm.
HatProj hat_proj(const TuckerTensor& x, const AmbientTensor& a, const TuckerRank& r,
                 const ConeBasisChoice& choice);

/// Rank-increase direction N = (A x_k U1_k^T) x_k U1_k with ell_k fresh
/// orthonormal directions per mode; <N, A> = ||N||^2.  Returned as a Tucker
/// tensor with factors U1_k.
TuckerTensor normal_increase_direction(const TuckerTensor& x, const AmbientTensor& a,
                                       const std::vector<Eigen::Index>& ell,
                                       const ConeBasisChoice& choice);

/// Stationarity surrogate at rank-deficient points: the ambient norm ||A||.
double grad_surrogate_norm(const AmbientTensor& a);

/// HOSVD retraction of X + s*V to rank <= r, assembled in the joint factor
/// basis so only a core of size at most prod (r_k + rbar_k) is truncated.
TuckerTensor retract_cone_step(const TuckerTensor& x, const TangentConeElement& v, double s,
                               const TuckerRank& r);
TuckerTensor retract_tangent_step(const TuckerTensor& x, const TangentVector& v, double s,
                                  const TuckerRank& r);

/// Exact (retraction-free) update X + s*V for a single-block cone element;
/// the result is inside the variety by construction, no truncation happens.
TuckerTensor block_step(const TuckerTensor& x, const TangentConeElement& v, double s,
                        Eigen::Index block);

/// Merged representation of X + s*N for a rank-increase direction: factors
/// [U_k U1_k], block-diagonal core diag(G, s*Ghat).  Exact.
TuckerTensor increase_step(const TuckerTensor& x, const TuckerTensor& n, double s);

}  // namespace ttv
