#include <doctest.h>

#include <ttv/rng.hpp>
#include <ttv/tensor.hpp>

#include <cmath>
#include <vector>

using namespace ttv;

namespace {

DenseTensor random_tensor(const Shape& shape, std::uint64_t seed, std::uint64_t stream = 0) {
  CounterRng rng(seed, stream);
  DenseTensor x(shape);
  for (auto& v : x.storage()) v = rng.normal();
  return x;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  CounterRng rng(seed, 7);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

}  // namespace

TEST_CASE("linear index is column-major with mode 1 fastest") {
  DenseTensor x(Shape{{2, 3, 4}});
  // Enumerate in storage order and confirm the index formula i1 + 2*i2 + 6*i3.
  Eigen::Index lin = 0;
  for (Eigen::Index i3 = 0; i3 < 4; ++i3)
    for (Eigen::Index i2 = 0; i2 < 3; ++i2)
      for (Eigen::Index i1 = 0; i1 < 2; ++i1) {
        CHECK(static_cast<Eigen::Index>(x.linear_index({i1, i2, i3})) == lin);
        ++lin;
      }
}

TEST_CASE("unfolding of a 2x2x2 tensor matches hand-computed matrices") {
  DenseTensor x(Shape{{2, 2, 2}});
  for (Eigen::Index i = 0; i < 8; ++i) x[i] = double(i + 1);

  // x(i1,i2,i3) = 1 + i1 + 2*i2 + 4*i3 (zero based internally).
  Matrix m1 = unfold(x, 0);
  REQUIRE(m1.rows() == 2);
  REQUIRE(m1.cols() == 4);
  Matrix e1(2, 4);
  e1 << 1, 3, 5, 7, 2, 4, 6, 8;
  CHECK((m1 - e1).norm() == 0.0);

  Matrix m2 = unfold(x, 1);
  Matrix e2(2, 4);
  e2 << 1, 2, 5, 6, 3, 4, 7, 8;
  CHECK((m2 - e2).norm() == 0.0);

  Matrix m3 = unfold(x, 2);
  Matrix e3(2, 4);
  e3 << 1, 2, 3, 4, 5, 6, 7, 8;
  CHECK((m3 - e3).norm() == 0.0);
}

TEST_CASE("unfolding column index follows j = sum_{l != k} i_l * J_l") {
  Shape shape{{2, 3, 4, 2}};
  DenseTensor x = random_tensor(shape, 11);
  for (Eigen::Index k = 0; k < 4; ++k) {
    Matrix m = unfold(x, k);
    std::vector<Eigen::Index> idx(4, 0);
    // Walk all multi-indices and verify each entry lands where the formula says.
    bool done = false;
    while (!done) {
      Eigen::Index col = 0;
      Eigen::Index stride = 1;
      for (Eigen::Index l = 0; l < 4; ++l) {
        if (l == k) continue;
        col += idx[static_cast<std::size_t>(l)] * stride;
        stride *= shape.dim(l);
      }
      CHECK(m(idx[static_cast<std::size_t>(k)], col) == x.at(idx));
      done = true;
      for (Eigen::Index l = 0; l < 4; ++l) {
        auto& i = idx[static_cast<std::size_t>(l)];
        if (++i < shape.dim(l)) { done = false; break; }
        i = 0;
      }
    }
  }
}

TEST_CASE("fold is the exact inverse of unfold") {
  Shape shape{{3, 4, 2, 5}};
  DenseTensor x = random_tensor(shape, 3);
  for (Eigen::Index k = 0; k < shape.order(); ++k) {
    DenseTensor y = fold(unfold(x, k), k, shape);
    REQUIRE(y.shape() == shape);
    // Bitwise identity: pure data movement, no arithmetic.
    for (std::size_t i = 0; i < static_cast<std::size_t>(x.size()); ++i) CHECK(y[static_cast<Eigen::Index>(i)] == x[static_cast<Eigen::Index>(i)]);
  }
}

TEST_CASE("mode product satisfies (X x_k A)_(k) = A X_(k)") {
  Shape shape{{3, 4, 5}};
  DenseTensor x = random_tensor(shape, 5);
  for (Eigen::Index k = 0; k < 3; ++k) {
    Matrix a = random_matrix(6, shape.dim(k), 100 + static_cast<std::uint64_t>(k));
    DenseTensor y = mode_product(x, a, k);
    Matrix lhs = unfold(y, k);
    Matrix rhs = a * unfold(x, k);
    CHECK((lhs - rhs).norm() <= 1e-13 * rhs.norm());
  }
}

TEST_CASE("mode products along distinct modes commute") {
  Shape shape{{3, 4, 5}};
  DenseTensor x = random_tensor(shape, 9);
  Matrix a = random_matrix(2, 3, 21);
  Matrix b = random_matrix(6, 4, 22);
  DenseTensor y1 = mode_product(mode_product(x, a, 0), b, 1);
  DenseTensor y2 = mode_product(mode_product(x, b, 1), a, 0);
  double diff = 0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(y1.size()); ++i) diff = std::max(diff, std::abs(y1[static_cast<Eigen::Index>(i)] - y2[static_cast<Eigen::Index>(i)]));
  CHECK(diff <= 1e-13 * fro_norm(y1));
}

TEST_CASE("multi_mode_product treats an empty matrix as identity") {
  Shape shape{{3, 4, 5}};
  DenseTensor x = random_tensor(shape, 13);
  Matrix b = random_matrix(6, 4, 23);
  std::vector<Matrix> ws(3);
  ws[1] = b;
  DenseTensor y = multi_mode_product(x, ws);
  DenseTensor z = mode_product(x, b, 1);
  for (std::size_t i = 0; i < static_cast<std::size_t>(y.size()); ++i) CHECK(y[static_cast<Eigen::Index>(i)] == doctest::Approx(z[static_cast<Eigen::Index>(i)]).epsilon(1e-14));
}

TEST_CASE("kron matches the hand-computed 2x2 example") {
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 5, 6, 7;
  Matrix k = kron(a, b);
  Matrix e(4, 4);
  e << 0, 5, 0, 10,
       6, 7, 12, 14,
       0, 15, 0, 20,
       18, 21, 24, 28;
  CHECK((k - e).norm() == 0.0);
}

TEST_CASE("unfolding of a multilinear product uses the reversed Kronecker order") {
  // (X x_2 A x_3 B)_(1) = X_(1) * kron(B, A)^T for a third-order tensor.
  Shape shape{{3, 4, 5}};
  DenseTensor x = random_tensor(shape, 17);
  Matrix a = random_matrix(2, 4, 31);
  Matrix b = random_matrix(6, 5, 32);
  DenseTensor y = mode_product(mode_product(x, a, 1), b, 2);
  Matrix lhs = unfold(y, 0);
  Matrix rhs = unfold(x, 0) * kron(b, a).transpose();
  CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
}

TEST_CASE("inner and fro_norm are consistent") {
  Shape shape{{4, 3, 2}};
  DenseTensor x = random_tensor(shape, 19);
  DenseTensor y = random_tensor(shape, 20);
  CHECK(std::sqrt(inner(x, x)) == doctest::Approx(fro_norm(x)).epsilon(1e-14));
  // Cauchy-Schwarz.
  CHECK(std::abs(inner(x, y)) <= fro_norm(x) * fro_norm(y) * (1 + 1e-14));
}

TEST_CASE("inner product of rank-one tensors factorizes over modes") {
  CounterRng rng(41, 0);
  std::vector<Vector> u(3), v(3);
  Shape shape{{3, 4, 5}};
  double prod = 1.0;
  for (Eigen::Index k = 0; k < 3; ++k) {
    u[static_cast<std::size_t>(k)] = Vector(shape.dim(k));
    v[static_cast<std::size_t>(k)] = Vector(shape.dim(k));
    for (Eigen::Index i = 0; i < shape.dim(k); ++i) {
      u[static_cast<std::size_t>(k)](i) = rng.normal();
      v[static_cast<std::size_t>(k)](i) = rng.normal();
    }
    prod *= u[static_cast<std::size_t>(k)].dot(v[static_cast<std::size_t>(k)]);
  }
  DenseTensor xu = outer_rank1(u);
  DenseTensor xv = outer_rank1(v);
  CHECK(inner(xu, xv) == doctest::Approx(prod).epsilon(1e-12));
}

TEST_CASE("add_scaled matches elementwise arithmetic") {
  Shape shape{{2, 3, 2}};
  DenseTensor x = random_tensor(shape, 23);
  DenseTensor y = random_tensor(shape, 24);
  DenseTensor z = x;
  add_scaled(z, y, -2.5);
  for (std::size_t i = 0; i < static_cast<std::size_t>(z.size()); ++i)
    CHECK(z[static_cast<Eigen::Index>(i)] == doctest::Approx(x[static_cast<Eigen::Index>(i)] - 2.5 * y[static_cast<Eigen::Index>(i)]).epsilon(1e-14));
}

TEST_CASE("DenseAmbient contract_all evaluates the full multilinear form") {
  Shape shape{{3, 4, 2}};
  DenseTensor x = random_tensor(shape, 29);
  DenseAmbient amb(x);
  std::vector<Matrix> w(3);
  w[0] = random_matrix(3, 2, 51);
  w[1] = random_matrix(4, 3, 52);
  w[2] = random_matrix(2, 2, 53);
  DenseTensor got = amb.contract_all(w);
  std::vector<Matrix> wt(3);
  for (int k = 0; k < 3; ++k) wt[static_cast<std::size_t>(k)] = w[static_cast<std::size_t>(k)].transpose();
  DenseTensor expect = multi_mode_product(x, wt);
  for (std::size_t i = 0; i < static_cast<std::size_t>(got.size()); ++i)
    CHECK(got[static_cast<Eigen::Index>(i)] == doctest::Approx(expect[static_cast<Eigen::Index>(i)]).epsilon(1e-12));
  CHECK(amb.norm() == doctest::Approx(fro_norm(x)).epsilon(1e-14));
}

TEST_CASE("shape mismatches are rejected") {
  DenseTensor x(Shape{{2, 3, 4}});
  Matrix a(5, 5);
  a.setZero();
  CHECK_THROWS_AS(mode_product(x, a, 1), TtvError);
  CHECK_THROWS_AS(unfold(x, 3), TtvError);
  CHECK_THROWS_AS(x.at({0, 0}), TtvError);
  CHECK_THROWS_AS(x.at({0, 0, 4}), TtvError);
  DenseTensor y(Shape{{2, 3, 5}});
  CHECK_THROWS_AS(inner(x, y), TtvError);
}
