#include "ttv/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace ttv {

Shape::Shape(std::vector<Eigen::Index> dims) : dims_(std::move(dims)) {
  if (dims_.empty() || dims_.size() > 8) {
    throw TtvError("Shape: order must be between 1 and 8");
  }
  for (Eigen::Index n : dims_) {
    if (n < 1) throw TtvError("Shape: dimensions must be positive");
  }
}

Eigen::Index Shape::num_entries() const {
  Eigen::Index n = 1;
  for (Eigen::Index d : dims_) n *= d;
  return n;
}

Eigen::Index Shape::codim(Eigen::Index k) const {
  Eigen::Index n = 1;
  for (Eigen::Index l = 0; l < order(); ++l) {
    if (l != k) n *= dim(l);
  }
  return n;
}

std::string Shape::to_string() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < dims_.size(); ++i) os << (i ? "," : "") << dims_[i];
  os << ")";
  return os.str();
}

DenseTensor::DenseTensor(Shape shape)
    : shape_(std::move(shape)), data_(static_cast<size_t>(shape_.num_entries()), 0.0) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (static_cast<Eigen::Index>(data_.size()) != shape_.num_entries()) {
    throw TtvError("DenseTensor: data size does not match shape");
  }
}

size_t DenseTensor::linear_index(const std::vector<Eigen::Index>& idx) const {
  if (static_cast<Eigen::Index>(idx.size()) != shape_.order()) {
    throw TtvError("DenseTensor: index order mismatch");
  }
  size_t lin = 0;
  size_t stride = 1;
  for (Eigen::Index k = 0; k < shape_.order(); ++k) {
    if (idx[static_cast<size_t>(k)] < 0 || idx[static_cast<size_t>(k)] >= shape_.dim(k)) {
      throw TtvError("DenseTensor: index out of range");
    }
    lin += stride * static_cast<size_t>(idx[static_cast<size_t>(k)]);
    stride *= static_cast<size_t>(shape_.dim(k));
  }
  return lin;
}

void DenseTensor::setZero() { std::fill(data_.begin(), data_.end(), 0.0); }

namespace {

void check_mode(const Shape& s, Eigen::Index k) {
  if (k < 0 || k >= s.order()) throw TtvError("mode index out of range");
}

// Strides of the unfolding's column index: stride of mode l (l != k) in the
// flattened column ordering (mode 1 fastest among the remaining modes).
std::vector<size_t> column_strides(const Shape& s, Eigen::Index k) {
  std::vector<size_t> js(static_cast<size_t>(s.order()), 0);
  size_t j = 1;
  for (Eigen::Index l = 0; l < s.order(); ++l) {
    if (l == k) continue;
    js[static_cast<size_t>(l)] = j;
    j *= static_cast<size_t>(s.dim(l));
  }
  return js;
}

}  // namespace

Matrix unfold(const DenseTensor& x, Eigen::Index k) {
  const Shape& s = x.shape();
  check_mode(s, k);
  const Eigen::Index nk = s.dim(k);
  const Eigen::Index nc = s.codim(k);
  if (k == 0) {
    // Mode-1 unfolding is a plain column-major reshape.
    return Eigen::Map<const Matrix>(x.data(), nk, nc);
  }
  Matrix m(nk, nc);
  // Walk the flat storage once, tracking the multi-index.
  std::vector<Eigen::Index> idx(static_cast<size_t>(s.order()), 0);
  const std::vector<size_t> js = column_strides(s, k);
  size_t col = 0;
  for (Eigen::Index lin = 0; lin < x.size(); ++lin) {
    m(idx[static_cast<size_t>(k)], static_cast<Eigen::Index>(col)) = x[lin];
    for (Eigen::Index l = 0; l < s.order(); ++l) {
      size_t ul = static_cast<size_t>(l);
      if (++idx[ul] < s.dim(l)) {
        if (l != k) col += js[ul];
        break;
      }
      idx[ul] = 0;
      if (l != k) col -= js[ul] * static_cast<size_t>(s.dim(l) - 1);
    }
  }
  return m;
}

DenseTensor fold(const Matrix& m, Eigen::Index k, const Shape& shape) {
  check_mode(shape, k);
  if (m.rows() != shape.dim(k) || m.cols() != shape.codim(k)) {
    throw TtvError("fold: matrix dimensions do not match shape/mode");
  }
  DenseTensor x(shape);
  if (k == 0) {
    Eigen::Map<Matrix>(x.data(), m.rows(), m.cols()) = m;
    return x;
  }
  std::vector<Eigen::Index> idx(static_cast<size_t>(shape.order()), 0);
  const std::vector<size_t> js = column_strides(shape, k);
  size_t col = 0;
  for (Eigen::Index lin = 0; lin < x.size(); ++lin) {
    x[lin] = m(idx[static_cast<size_t>(k)], static_cast<Eigen::Index>(col));
    for (Eigen::Index l = 0; l < shape.order(); ++l) {
      size_t ul = static_cast<size_t>(l);
      if (++idx[ul] < shape.dim(l)) {
        if (l != k) col += js[ul];
        break;
      }
      idx[ul] = 0;
      if (l != k) col -= js[ul] * static_cast<size_t>(shape.dim(l) - 1);
    }
  }
  return x;
}

DenseTensor mode_product(const DenseTensor& x, const Matrix& a, Eigen::Index k) {
  const Shape& s = x.shape();
  check_mode(s, k);
  if (a.cols() != s.dim(k)) throw TtvError("mode_product: inner dimension mismatch");
  std::vector<Eigen::Index> dims = s.dims();
  dims[static_cast<size_t>(k)] = a.rows();
  return fold(a * unfold(x, k), k, Shape(dims));
}

DenseTensor multi_mode_product(const DenseTensor& x, const std::vector<Matrix>& a) {
  if (static_cast<Eigen::Index>(a.size()) != x.order()) {
    throw TtvError("multi_mode_product: one matrix per mode required");
  }
  DenseTensor y = x;
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    const Matrix& ak = a[static_cast<size_t>(k)];
    if (ak.size() == 0) continue;
    y = mode_product(y, ak, k);
  }
  return y;
}

double inner(const DenseTensor& x, const DenseTensor& y) {
  if (x.shape() != y.shape()) throw TtvError("inner: shape mismatch");
  return Eigen::Map<const Vector>(x.data(), x.size())
      .dot(Eigen::Map<const Vector>(y.data(), y.size()));
}

double fro_norm(const DenseTensor& x) {
  return Eigen::Map<const Vector>(x.data(), x.size()).norm();
}

DenseTensor outer_rank1(const std::vector<Vector>& u) {
  std::vector<Eigen::Index> dims;
  dims.reserve(u.size());
  for (const Vector& v : u) dims.push_back(v.size());
  DenseTensor x((Shape(dims)));
  std::vector<Eigen::Index> idx(u.size(), 0);
  for (Eigen::Index lin = 0; lin < x.size(); ++lin) {
    double p = 1.0;
    for (size_t k = 0; k < u.size(); ++k) p *= u[k](idx[k]);
    x[lin] = p;
    for (size_t k = 0; k < u.size(); ++k) {
      if (++idx[k] < dims[k]) break;
      idx[k] = 0;
    }
  }
  return x;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return c;
}

void add_scaled(DenseTensor& y, const DenseTensor& x, double s) {
  if (x.shape() != y.shape()) throw TtvError("add_scaled: shape mismatch");
  Eigen::Map<Vector>(y.data(), y.size()) += s * Eigen::Map<const Vector>(x.data(), x.size());
}

DenseTensor AmbientTensor::materialize() const {
  DenseTensor out((shape()));
  add_scaled_into(out, 1.0);
  return out;
}

DenseTensor AmbientTensor::contract_all(const std::vector<Matrix>& w) const {
  if (static_cast<Eigen::Index>(w.size()) != shape().order()) {
    throw TtvError("contract_all: one matrix per mode required");
  }
  Matrix m = contract_except(0, w);  // n_1 x prod_{j>1} cols(w_j)
  std::vector<Eigen::Index> dims;
  dims.reserve(w.size());
  dims.push_back(w[0].cols());
  for (size_t j = 1; j < w.size(); ++j) dims.push_back(w[j].cols());
  return fold(w[0].transpose() * m, 0, Shape(dims));
}

Matrix DenseAmbient::contract_except(Eigen::Index k, const std::vector<Matrix>& w) const {
  const Shape& s = x_.shape();
  check_mode(s, k);
  std::vector<Matrix> wt(w.size());
  for (size_t j = 0; j < w.size(); ++j) {
    if (static_cast<Eigen::Index>(j) == k) continue;
    if (w[j].rows() != s.dim(static_cast<Eigen::Index>(j))) {
      throw TtvError("contract_except: factor row count mismatch");
    }
    wt[j] = w[j].transpose();
  }
  return unfold(multi_mode_product(x_, wt), k);
}

}  // namespace ttv
