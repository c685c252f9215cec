// Dense tensors, unfoldings and multilinear products.
//
// Storage convention: column-major linearization, mode 1 fastest.  The
// mode-k unfolding maps entry (i_1,...,i_d) to row i_k and column
//   j = sum_{l != k} i_l * J_l,   J_l = prod_{m < l, m != k} n_m
// (0-based here; the file formats and CLI speak 1-based indices).

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Error type for all contract violations in the library.
class TtvError : public std::runtime_error {
 public:
  explicit TtvError(const std::string& what) : std::runtime_error(what) {}
};

/// Tensor dimensions; order d = size().  Modes are 0-based internally.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<Eigen::Index> dims);

  Eigen::Index order() const { return static_cast<Eigen::Index>(dims_.size()); }
  Eigen::Index dim(Eigen::Index k) const { return dims_[static_cast<size_t>(k)]; }
  Eigen::Index num_entries() const;
  /// Product of all dimensions except mode k.
  Eigen::Index codim(Eigen::Index k) const;
  const std::vector<Eigen::Index>& dims() const { return dims_; }

  bool operator==(const Shape& o) const { return dims_ == o.dims_; }
  bool operator!=(const Shape& o) const { return !(*this == o); }
  std::string to_string() const;

 private:
  std::vector<Eigen::Index> dims_;
};

/// Dense tensor with column-major flat storage (mode 1 fastest).
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(Shape shape);
  DenseTensor(Shape shape, std::vector<double> data);

  const Shape& shape() const { return shape_; }
  Eigen::Index order() const { return shape_.order(); }
  Eigen::Index size() const { return static_cast<Eigen::Index>(data_.size()); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& storage() { return data_; }
  const std::vector<double>& storage() const { return data_; }

  double& at(const std::vector<Eigen::Index>& idx) { return data_[linear_index(idx)]; }
  double at(const std::vector<Eigen::Index>& idx) const { return data_[linear_index(idx)]; }
  double& operator[](Eigen::Index i) { return data_[static_cast<size_t>(i)]; }
  double operator[](Eigen::Index i) const { return data_[static_cast<size_t>(i)]; }

  size_t linear_index(const std::vector<Eigen::Index>& idx) const;

  void setZero();

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// Mode-k unfolding, an n_k x (prod_{l != k} n_l) matrix.
Matrix unfold(const DenseTensor& x, Eigen::Index k);

/// Inverse of unfold: refolds an n_k x codim matrix into shape.  Exact
/// (bitwise) inverse of unfold for matching k and shape.
DenseTensor fold(const Matrix& m, Eigen::Index k, const Shape& shape);

/// X x_k A, the mode-k product; A is m x n_k.
DenseTensor mode_product(const DenseTensor& x, const Matrix& a, Eigen::Index k);

/// X x_1 A_1 ... x_d A_d.  Empty matrices (size 0) mean identity for that mode.
DenseTensor multi_mode_product(const DenseTensor& x, const std::vector<Matrix>& a);

/// Frobenius inner product; shapes must agree.
double inner(const DenseTensor& x, const DenseTensor& y);

double fro_norm(const DenseTensor& x);

/// Rank-one tensor u_1 o u_2 o ... o u_d.
DenseTensor outer_rank1(const std::vector<Vector>& u);

/// Kronecker product A (x) B.
Matrix kron(const Matrix& a, const Matrix& b);

/// axpy: y += s * x.
void add_scaled(DenseTensor& y, const DenseTensor& x, double s);

/// Read-only view of an ambient tensor (dense or sparse-plus-structured)
/// exposing the contractions the geometry needs without densifying.
class AmbientTensor {
 public:
  virtual ~AmbientTensor() = default;

  virtual const Shape& shape() const = 0;

  /// Mode-k unfolding of A x_{j != k} W_j^T, an n_k x prod_{j != k} cols(W_j)
  /// matrix.  W must have one entry per mode; W[k] is ignored.
  virtual Matrix contract_except(Eigen::Index k, const std::vector<Matrix>& w) const = 0;

  virtual double norm() const = 0;

  /// out += s * A.  Only valid at desk scale; used by restart steps.
  virtual void add_scaled_into(DenseTensor& out, double s) const = 0;

  /// True if a dense unfolding is cheap to materialize (desk scale).
  virtual bool has_dense() const { return false; }
  virtual DenseTensor materialize() const;

  /// A x_1 W_1^T ... x_d W_d^T as a dense cols(W_1) x ... x cols(W_d) tensor.
  DenseTensor contract_all(const std::vector<Matrix>& w) const;
};

/// AmbientTensor view over a DenseTensor (not owned unless passed by value).
class DenseAmbient : public AmbientTensor {
 public:
  explicit DenseAmbient(DenseTensor x) : x_(std::move(x)) {}

  const Shape& shape() const override { return x_.shape(); }
  Matrix contract_except(Eigen::Index k, const std::vector<Matrix>& w) const override;
  double norm() const override { return fro_norm(x_); }
  void add_scaled_into(DenseTensor& out, double s) const override { add_scaled(out, x_, s); }
  bool has_dense() const override { return true; }
  DenseTensor materialize() const override { return x_; }

  const DenseTensor& tensor() const { return x_; }

 private:
  DenseTensor x_;
};

}  // namespace ttv
