#include "ttv/tucker.hpp"

#include <sstream>

namespace ttv {

std::string rank_to_string(const TuckerRank& r) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
  os << ")";
  return os.str();
}

bool rank_le(const TuckerRank& a, const TuckerRank& b) {
  if (a.size() != b.size()) throw TtvError("rank_le: order mismatch");
  for (size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
  }
  return true;
}

TuckerTensor::TuckerTensor(DenseTensor core, std::vector<Matrix> factors)
    : core_(std::move(core)), factors_(std::move(factors)) {
  if (static_cast<Eigen::Index>(factors_.size()) != core_.order()) {
    throw TtvError("TuckerTensor: one factor per mode required");
  }
  for (Eigen::Index k = 0; k < core_.order(); ++k) {
    const Matrix& u = factors_[static_cast<size_t>(k)];
    if (u.cols() != core_.shape().dim(k)) {
      throw TtvError("TuckerTensor: factor width does not match core");
    }
    if (u.rows() < u.cols()) throw TtvError("TuckerTensor: factor is wider than tall");
    if (u.cols() > 0) {
      const double dev =
          (u.transpose() * u - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
      if (dev > 1e-10) throw TtvError("TuckerTensor: factor columns are not orthonormal");
    }
  }
}

Shape TuckerTensor::shape() const {
  std::vector<Eigen::Index> dims;
  dims.reserve(factors_.size());
  for (const Matrix& u : factors_) dims.push_back(u.rows());
  return Shape(dims);
}

TuckerRank TuckerTensor::rank() const { return core_.shape().dims(); }

namespace {

void check_rank_arg(const Shape& s, const TuckerRank& r) {
  if (static_cast<Eigen::Index>(r.size()) != s.order()) {
    throw TtvError("hosvd: rank order mismatch");
  }
  for (size_t k = 0; k < r.size(); ++k) {
    if (r[k] < 1) throw TtvError("hosvd: rank entries must be positive");
  }
}

}  // namespace

TuckerTensor hosvd(const DenseTensor& x, const TuckerRank& r) {
  check_rank_arg(x.shape(), r);
  const Eigen::Index d = x.order();
  DenseTensor work = x;
  std::vector<Matrix> factors(static_cast<size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::Index cap =
        std::min<Eigen::Index>(r[static_cast<size_t>(k)],
                               std::min(work.shape().dim(k), work.shape().codim(k)));
    ThinSVD svd = thin_svd(unfold(work, k));
    // A degenerate spectrum can leave fewer directions than requested; the
    // stored rank then honestly reflects the data.
    const Eigen::Index q = std::min(cap, std::max<Eigen::Index>(svd.numerical_rank, 1));
    Matrix u = svd.u.leftCols(q);
    factors[static_cast<size_t>(k)] = u;
    work = mode_product(work, u.transpose(), k);
  }
  return TuckerTensor(std::move(work), std::move(factors));
}

TuckerTensor hosvd(const TuckerTensor& x, const TuckerRank& r) {
  check_rank_arg(x.core().shape(), r);
  TuckerRank rc = r;
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    rc[static_cast<size_t>(k)] =
        std::min<Eigen::Index>(rc[static_cast<size_t>(k)], x.core().shape().dim(k));
  }
  TuckerTensor small = hosvd(x.core(), rc);
  std::vector<Matrix> factors(static_cast<size_t>(x.order()));
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    factors[static_cast<size_t>(k)] = x.factor(k) * small.factor(k);
  }
  return TuckerTensor(small.core(), std::move(factors));
}

DenseTensor to_dense(const TuckerTensor& x) {
  return multi_mode_product(x.core(), x.factors());
}

TuckerTensor from_dense(const DenseTensor& x, const TuckerRank& r) { return hosvd(x, r); }

std::vector<Vector> core_singular_values(const TuckerTensor& x) {
  std::vector<Vector> out;
  out.reserve(static_cast<size_t>(x.order()));
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    out.push_back(thin_svd(unfold(x.core(), k)).sigma);
  }
  return out;
}

TuckerRank exact_tucker_rank(const TuckerTensor& x, double tol) {
  TuckerRank r(static_cast<size_t>(x.order()));
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    ThinSVD svd = thin_svd(unfold(x.core(), k), tol);
    r[static_cast<size_t>(k)] = std::max<Eigen::Index>(svd.numerical_rank, 1);
  }
  return r;
}

TuckerTensor recompress(const TuckerTensor& x, double tol) {
  TuckerRank r = exact_tucker_rank(x, tol);
  if (r == x.rank()) return x;
  return hosvd(x, r);
}

double min_core_sigma_ratio(const TuckerTensor& x) {
  double ratio = 1.0;
  for (const Vector& sigma : core_singular_values(x)) {
    if (sigma.size() == 0 || sigma(0) <= 0.0) return 0.0;
    ratio = std::min(ratio, sigma(sigma.size() - 1) / sigma(0));
  }
  return ratio;
}

}  // namespace ttv
