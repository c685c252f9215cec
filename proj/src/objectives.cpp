#include "ttv/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ttv {

SampleSet::SampleSet(Shape shape, std::vector<int64_t> idx, std::vector<double> values)
    : shape_(std::move(shape)), idx_(std::move(idx)), values_(std::move(values)) {
  const size_t d = static_cast<size_t>(shape_.order());
  if (idx_.size() != values_.size() * d) {
    throw TtvError("SampleSet: index/value size mismatch");
  }
  const Eigen::Index n = size();
  for (Eigen::Index s = 0; s < n; ++s) {
    for (Eigen::Index k = 0; k < shape_.order(); ++k) {
      const int64_t i = index(s, k);
      if (i < 0 || i >= shape_.dim(k)) throw TtvError("SampleSet: index out of range");
    }
  }
  // Sort lexicographically on (i_1, ..., i_d).
  std::vector<Eigen::Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  auto lex_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index k = 0; k < shape_.order(); ++k) {
      if (index(a, k) != index(b, k)) return index(a, k) < index(b, k);
    }
    return false;
  };
  std::sort(perm.begin(), perm.end(), lex_less);
  std::vector<int64_t> sidx(idx_.size());
  std::vector<double> svals(values_.size());
  for (Eigen::Index s = 0; s < n; ++s) {
    const Eigen::Index p = perm[static_cast<size_t>(s)];
    svals[static_cast<size_t>(s)] = values_[static_cast<size_t>(p)];
    for (size_t k = 0; k < d; ++k) {
      sidx[static_cast<size_t>(s) * d + k] = idx_[static_cast<size_t>(p) * d + k];
    }
  }
  for (Eigen::Index s = 1; s < n; ++s) {
    bool same = true;
    for (size_t k = 0; k < d; ++k) {
      if (sidx[static_cast<size_t>(s) * d + k] != sidx[static_cast<size_t>(s - 1) * d + k]) {
        same = false;
        break;
      }
    }
    if (same) throw TtvError("SampleSet: duplicate sample index");
  }
  idx_ = std::move(sidx);
  values_ = std::move(svals);
}

SampleSet SampleSet::with_values(std::vector<double> values) const {
  if (values.size() != values_.size()) throw TtvError("with_values: size mismatch");
  SampleSet out;
  out.shape_ = shape_;
  out.idx_ = idx_;
  out.values_ = std::move(values);
  return out;
}

double SampleSet::values_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

std::vector<double> sample_multilinear(const DenseTensor& core, const std::vector<Matrix>& w,
                                       const SampleSet& pts) {
  const Eigen::Index d = core.order();
  if (static_cast<Eigen::Index>(w.size()) != d || pts.order() != d) {
    throw TtvError("sample_multilinear: order mismatch");
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    if (w[static_cast<size_t>(k)].cols() != core.shape().dim(k) ||
        w[static_cast<size_t>(k)].rows() != pts.shape().dim(k)) {
      throw TtvError("sample_multilinear: factor shape mismatch");
    }
  }
  std::vector<double> out(static_cast<size_t>(pts.size()));
  std::vector<double> buf_a(static_cast<size_t>(core.size()));
  std::vector<double> buf_b(static_cast<size_t>(core.size()));
  for (Eigen::Index s = 0; s < pts.size(); ++s) {
    // Contract the last mode first: slices over the trailing mode are
    // contiguous blocks in column-major storage.
    const double* cur = core.data();
    Eigen::Index len = core.size();
    double* dst = buf_a.data();
    for (Eigen::Index k = d - 1; k >= 0; --k) {
      const Matrix& wk = w[static_cast<size_t>(k)];
      const Eigen::Index rk = core.shape().dim(k);
      const Eigen::Index stride = len / rk;
      const Eigen::Index row = static_cast<Eigen::Index>(pts.index(s, k));
      for (Eigen::Index p = 0; p < stride; ++p) dst[p] = 0.0;
      for (Eigen::Index j = 0; j < rk; ++j) {
        const double c = wk(row, j);
        if (c == 0.0) continue;
        const double* block = cur + j * stride;
        for (Eigen::Index p = 0; p < stride; ++p) dst[p] += c * block[p];
      }
      cur = dst;
      len = stride;
      dst = (dst == buf_a.data()) ? buf_b.data() : buf_a.data();
    }
    out[static_cast<size_t>(s)] = cur[0];
  }
  return out;
}

std::vector<double> sample_tucker(const TuckerTensor& x, const SampleSet& pts) {
  return sample_multilinear(x.core(), x.factors(), pts);
}

Matrix SparseAmbient::contract_except(Eigen::Index k, const std::vector<Matrix>& w) const {
  const Eigen::Index d = shape().order();
  if (k < 0 || k >= d) throw TtvError("contract_except: mode out of range");
  if (static_cast<Eigen::Index>(w.size()) != d) {
    throw TtvError("contract_except: one matrix per mode required");
  }
  Eigen::Index cols = 1;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (j == k) continue;
    if (w[static_cast<size_t>(j)].rows() != shape().dim(j)) {
      throw TtvError("contract_except: factor row count mismatch");
    }
    cols *= w[static_cast<size_t>(j)].cols();
  }
  Matrix out = Matrix::Zero(shape().dim(k), cols);
  std::vector<double> row(static_cast<size_t>(cols));
  std::vector<double> next(static_cast<size_t>(cols));
  for (Eigen::Index s = 0; s < entries_.size(); ++s) {
    // Build the Kronecker row in unfolding column order (earlier modes
    // fastest), scaled by the sample value.
    row[0] = entries_.value(s);
    Eigen::Index len = 1;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j == k) continue;
      const Matrix& wj = w[static_cast<size_t>(j)];
      const Eigen::Index ij = static_cast<Eigen::Index>(entries_.index(s, j));
      for (Eigen::Index b = 0; b < wj.cols(); ++b) {
        const double c = wj(ij, b);
        for (Eigen::Index a = 0; a < len; ++a) {
          next[static_cast<size_t>(b * len + a)] = c * row[static_cast<size_t>(a)];
        }
      }
      len *= wj.cols();
      std::swap(row, next);
    }
    out.row(static_cast<Eigen::Index>(entries_.index(s, k))) +=
        Eigen::Map<const Eigen::RowVectorXd>(row.data(), cols);
  }
  return out;
}

void SparseAmbient::add_scaled_into(DenseTensor& out, double s) const {
  if (out.shape() != shape()) throw TtvError("add_scaled_into: shape mismatch");
  const Eigen::Index d = shape().order();
  std::vector<Eigen::Index> idx(static_cast<size_t>(d));
  for (Eigen::Index i = 0; i < entries_.size(); ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      idx[static_cast<size_t>(k)] = static_cast<Eigen::Index>(entries_.index(i, k));
    }
    out.at(idx) += s * entries_.value(i);
  }
}

CompletionObjective::CompletionObjective(SampleSet train) : train_(std::move(train)) {
  rhs_norm_ = train_.values_norm();
}

std::vector<double> CompletionObjective::residual(const TuckerTensor& x) const {
  std::vector<double> r = sample_tucker(x, train_);
  for (Eigen::Index i = 0; i < train_.size(); ++i) {
    r[static_cast<size_t>(i)] -= train_.value(i);
  }
  return r;
}

double CompletionObjective::eval(const TuckerTensor& x) const {
  double s = 0.0;
  for (double v : residual(x)) s += v * v;
  return 0.5 * s;
}

std::unique_ptr<AmbientTensor> CompletionObjective::euclid_grad(const TuckerTensor& x) const {
  return std::make_unique<SparseAmbient>(train_.with_values(residual(x)));
}

std::optional<double> CompletionObjective::exact_initial_step(const TuckerTensor& x,
                                                              const DirectionOracle& dir) const {
  if (!dir.sample) return std::nullopt;
  return exact_initial_stepsize(dir.sample(train_), residual(x));
}

std::optional<double> CompletionObjective::train_error(const TuckerTensor& x) const {
  if (rhs_norm_ == 0.0) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (double v : residual(x)) s += v * v;
  return std::sqrt(s) / rhs_norm_;
}

double DenseLsqObjective::eval(const TuckerTensor& x) const {
  DenseTensor diff = to_dense(x);
  add_scaled(diff, a_, -1.0);
  const double n = fro_norm(diff);
  return n * n;
}

std::unique_ptr<AmbientTensor> DenseLsqObjective::euclid_grad(const TuckerTensor& x) const {
  DenseTensor diff = to_dense(x);
  add_scaled(diff, a_, -1.0);
  Eigen::Map<Vector>(diff.data(), diff.size()) *= 2.0;
  return std::make_unique<DenseAmbient>(std::move(diff));
}

std::optional<double> DenseLsqObjective::exact_initial_step(const TuckerTensor& x,
                                                            const DirectionOracle& dir) const {
  if (!dir.dense) return std::nullopt;
  DenseTensor v = dir.dense();
  const double vv = inner(v, v);
  if (vv <= 0.0) return 0.0;
  DenseTensor diff = to_dense(x);
  add_scaled(diff, a_, -1.0);
  return std::max(0.0, -inner(v, diff) / vv);
}

double exact_initial_stepsize(const std::vector<double>& dir, const std::vector<double>& resid) {
  if (dir.size() != resid.size()) throw TtvError("exact_initial_stepsize: size mismatch");
  double vv = 0.0;
  double vr = 0.0;
  for (size_t i = 0; i < dir.size(); ++i) {
    vv += dir[i] * dir[i];
    vr += dir[i] * resid[i];
  }
  if (vv <= 0.0) return 0.0;
  return std::max(0.0, -vr / vv);
}

double sampled_rel_error(const TuckerTensor& x, const SampleSet& reference) {
  const double denom = reference.values_norm();
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  std::vector<double> v = sample_tucker(x, reference);
  double s = 0.0;
  for (Eigen::Index i = 0; i < reference.size(); ++i) {
    const double e = v[static_cast<size_t>(i)] - reference.value(i);
    s += e * e;
  }
  return std::sqrt(s) / denom;
}

double dense_rel_error(const TuckerTensor& x, const DenseTensor& a) {
  const double denom = fro_norm(a);
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  DenseTensor diff = to_dense(x);
  add_scaled(diff, a, -1.0);
  return fro_norm(diff) / denom;
}

double psnr(const TuckerTensor& x, const DenseTensor& a) {
  DenseTensor diff = to_dense(x);
  add_scaled(diff, a, -1.0);
  const double err2 = inner(diff, diff);
  if (err2 == 0.0) return std::numeric_limits<double>::infinity();
  const double amax = *std::max_element(a.storage().begin(), a.storage().end());
  return 10.0 * std::log10(static_cast<double>(a.size()) * amax / err2);
}

}  // namespace ttv
