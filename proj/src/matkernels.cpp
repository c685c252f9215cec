#include "ttv/matkernels.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <sstream>

#include "ttv/rng.hpp"

namespace ttv {

ThinSVD thin_svd(const Matrix& a, double rank_tol) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ThinSVD out;
  out.u = svd.matrixU();
  out.sigma = svd.singularValues();
  out.v = svd.matrixV();
  const double cutoff = out.sigma.size() > 0 ? rank_tol * out.sigma(0) : 0.0;
  out.numerical_rank = 0;
  for (Eigen::Index i = 0; i < out.sigma.size(); ++i) {
    if (out.sigma(i) >= cutoff && out.sigma(i) > 0.0) ++out.numerical_rank;
  }
  return out;
}

ThinSVD truncate_rank(const Matrix& a, Eigen::Index r, double rank_tol) {
  if (r < 0) throw TtvError("truncate_rank: negative rank");
  ThinSVD svd = thin_svd(a, rank_tol);
  const Eigen::Index q = std::min(r, svd.numerical_rank);
  svd.u = svd.u.leftCols(q).eval();
  svd.sigma = svd.sigma.head(q).eval();
  svd.v = svd.v.leftCols(q).eval();
  svd.numerical_rank = q;
  return svd;
}

Matrix orthonormalize(const Matrix& a, double rank_tol) {
  if (a.cols() == 0) return a;
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  Matrix r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  double rmax = r.diagonal().cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (std::abs(r(j, j)) <= rank_tol * rmax) {
      throw TtvError("orthonormalize: input is numerically column-rank-deficient");
    }
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);  // sign convention: diag(R) >= 0
  }
  return q;
}

Matrix complement_basis(const Matrix& u, Eigen::Index m, uint64_t seed) {
  const Eigen::Index n = u.rows();
  if (u.cols() + m > n) throw TtvError("complement_basis: not enough room in the ambient space");
  if (m == 0) return Matrix(n, 0);
  CounterRng rng(seed, /*stream=*/0x636f6d70ULL);
  // Draw Gaussian columns, project out span(U), then orthonormalize; retry
  // on the (measure-zero) chance of a near-dependency.
  for (int attempt = 0; attempt < 16; ++attempt) {
    Matrix g(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.normal();
    }
    if (u.cols() > 0) g -= u * (u.transpose() * g);
    try {
      return orthonormalize(g, 1e-10);
    } catch (const TtvError&) {
      continue;
    }
  }
  throw TtvError("complement_basis: failed to draw an independent complement");
}

Matrix pinv_rows(const Matrix& g, double rank_tol) {
  ThinSVD svd = thin_svd(g, rank_tol);
  if (svd.numerical_rank < g.rows()) {
    std::ostringstream os;
    const double smax = svd.sigma.size() > 0 ? svd.sigma(0) : 0.0;
    const double smin = svd.sigma.size() > 0 ? svd.sigma(svd.sigma.size() - 1) : 0.0;
    os << "pinv_rows: matrix is numerically row-rank-deficient"
       << " (sigma_max=" << smax << ", sigma_min=" << smin
       << ", cond~" << (smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity())
       << ")";
    throw TtvError(os.str());
  }
  return svd.v.leftCols(g.rows()) *
         svd.sigma.head(g.rows()).cwiseInverse().asDiagonal() *
         svd.u.transpose();
}

Matrix proj_matrix_tangent_cone(const Matrix& a, const Matrix& u, const Matrix& v,
                                Eigen::Index r) {
  const Eigen::Index rbar = u.cols();
  if (v.cols() != rbar) throw TtvError("proj_matrix_tangent_cone: U/V width mismatch");
  if (rbar > r) throw TtvError("proj_matrix_tangent_cone: point rank exceeds the bound");
  const Matrix au = u.transpose() * a;       // rbar x n
  const Matrix av = a * v;                   // m x rbar
  Matrix p = u * au + av * v.transpose() - u * (au * v) * v.transpose();
  if (r > rbar) {
    Matrix corner = a - u * au - (av - u * (au * v)) * v.transpose();
    ThinSVD trunc = truncate_rank(corner, r - rbar);
    if (trunc.sigma.size() > 0) {
      p += trunc.u * trunc.sigma.asDiagonal() * trunc.v.transpose();
    }
  }
  return p;
}

}  // namespace ttv
