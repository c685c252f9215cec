#include <doctest.h>

#include <ttv/rng.hpp>
#include <ttv/tucker.hpp>

#include <cmath>

using namespace ttv;

namespace {

DenseTensor random_tensor(const Shape& shape, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  DenseTensor x(shape);
  for (auto& v : x.storage()) v = rng.normal();
  return x;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  CounterRng rng(seed, 3);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

TuckerTensor random_tucker(const Shape& shape, const TuckerRank& r, std::uint64_t seed) {
  Shape core_shape(r);
  DenseTensor core = random_tensor(core_shape, seed);
  std::vector<Matrix> factors;
  for (Eigen::Index k = 0; k < shape.order(); ++k)
    factors.push_back(orthonormalize(
        random_matrix(shape.dim(k), r[static_cast<std::size_t>(k)],
                      seed * 31 + static_cast<std::uint64_t>(k) + 1)));
  return TuckerTensor(std::move(core), std::move(factors));
}

double dense_diff(const DenseTensor& a, const DenseTensor& b) {
  DenseTensor d = a;
  add_scaled(d, b, -1.0);
  return fro_norm(d);
}

}  // namespace

TEST_CASE("TuckerTensor validates factors") {
  DenseTensor core(Shape{{2, 2}});
  core[0] = 1;
  std::vector<Matrix> good = {orthonormalize(random_matrix(5, 2, 1)),
                              orthonormalize(random_matrix(4, 2, 2))};
  CHECK_NOTHROW(TuckerTensor(core, good));
  std::vector<Matrix> skew = {random_matrix(5, 2, 3), good[1]};
  CHECK_THROWS_AS(TuckerTensor(core, skew), TtvError);
  std::vector<Matrix> wrong_width = {orthonormalize(random_matrix(5, 3, 4)), good[1]};
  CHECK_THROWS_AS(TuckerTensor(core, wrong_width), TtvError);
}

TEST_CASE("hosvd of an exactly low-rank tensor is exact") {
  TuckerRank r = {2, 3, 2};
  TuckerTensor t = random_tucker(Shape{{6, 7, 5}}, r, 11);
  DenseTensor x = to_dense(t);
  TuckerTensor h = hosvd(x, r);
  CHECK(dense_diff(to_dense(h), x) <= 1e-12 * fro_norm(x));
  for (Eigen::Index k = 0; k < 3; ++k) {
    const Matrix& u = h.factor(k);
    CHECK((u.transpose() * u - Matrix::Identity(u.cols(), u.cols())).norm() <= 1e-12);
  }
}

TEST_CASE("hosvd output has per-mode unfolding rank at most r_k") {
  DenseTensor x = random_tensor(Shape{{6, 5, 7}}, 13);
  TuckerRank r = {2, 4, 3};
  TuckerTensor h = hosvd(x, r);
  DenseTensor hd = to_dense(h);
  for (Eigen::Index k = 0; k < 3; ++k) {
    ThinSVD s = thin_svd(unfold(hd, k), 1e-10);
    CHECK(s.numerical_rank <= r[static_cast<std::size_t>(k)]);
  }
}

TEST_CASE("hosvd is quasi-optimal against Tucker competitors") {
  // ||X - hosvd(X, r)|| <= sqrt(d) ||X - Z|| for every Z of rank <= r; the
  // best Z is unknown, but any competitor gives a valid upper test.
  DenseTensor x = random_tensor(Shape{{5, 6, 4}}, 17);
  TuckerRank r = {2, 2, 2};
  double err = dense_diff(to_dense(hosvd(x, r)), x);
  double sqrt_d = std::sqrt(3.0);
  for (std::uint64_t s = 0; s < 10; ++s) {
    DenseTensor z = to_dense(random_tucker(x.shape(), r, 500 + s));
    // Optimal scaling of the competitor along itself.
    double alpha = inner(x, z) / std::max(1e-300, inner(z, z));
    DenseTensor za = z;
    for (auto& v : za.storage()) v *= alpha;
    CHECK(err <= sqrt_d * dense_diff(x, za) + 1e-12);
  }
}

TEST_CASE("structured hosvd of a Tucker tensor equals the dense path") {
  TuckerTensor t = random_tucker(Shape{{7, 6, 5}}, {4, 4, 3}, 19);
  TuckerRank r = {2, 3, 2};
  TuckerTensor a = hosvd(t, r);
  TuckerTensor b = hosvd(to_dense(t), r);
  CHECK(dense_diff(to_dense(a), to_dense(b)) <= 1e-11 * t.norm());
  CHECK(a.rank() == r);
  for (Eigen::Index k = 0; k < 3; ++k) {
    const Matrix& u = a.factor(k);
    CHECK((u.transpose() * u - Matrix::Identity(u.cols(), u.cols())).norm() <= 1e-11);
  }
}

TEST_CASE("hosvd truncation error never exceeds the identity-direction bound") {
  // Sequential truncation: squared error <= sum over modes of discarded
  // squared singular values of the original unfoldings.
  DenseTensor x = random_tensor(Shape{{6, 6, 6}}, 23);
  TuckerRank r = {3, 3, 3};
  double err2 = std::pow(dense_diff(to_dense(hosvd(x, r)), x), 2);
  double bound = 0;
  for (Eigen::Index k = 0; k < 3; ++k) {
    ThinSVD s = thin_svd(unfold(x, k));
    for (Eigen::Index i = 3; i < s.sigma.size(); ++i) bound += s.sigma(i) * s.sigma(i);
  }
  CHECK(err2 <= bound * (1 + 1e-12));
}

TEST_CASE("core_singular_values equal the dense unfolding spectra") {
  TuckerTensor t = random_tucker(Shape{{6, 5, 7}}, {3, 2, 3}, 29);
  DenseTensor x = to_dense(t);
  std::vector<Vector> sv = core_singular_values(t);
  for (Eigen::Index k = 0; k < 3; ++k) {
    ThinSVD s = thin_svd(unfold(x, k));
    const Vector& got = sv[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < got.size(); ++i)
      CHECK(got(i) == doctest::Approx(s.sigma(i)).epsilon(1e-10));
  }
}

TEST_CASE("exact_tucker_rank sees through a padded core") {
  // Build a rank-(2,2,2) core embedded in a (3,3,3) stored rank.
  TuckerTensor small = random_tucker(Shape{{6, 6, 6}}, {2, 2, 2}, 31);
  DenseTensor padded_core(Shape{{3, 3, 3}});
  padded_core.setZero();
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j)
      for (Eigen::Index k = 0; k < 2; ++k)
        padded_core.at({i, j, k}) = small.core().at({i, j, k});
  std::vector<Matrix> factors;
  for (Eigen::Index k = 0; k < 3; ++k)
    factors.push_back(orthonormalize(random_matrix(6, 3, 600 + static_cast<std::uint64_t>(k))));
  TuckerTensor padded(padded_core, factors);
  CHECK(padded.rank() == TuckerRank{3, 3, 3});
  CHECK(exact_tucker_rank(padded) == TuckerRank{2, 2, 2});

  TuckerTensor rec = recompress(padded);
  CHECK(rec.rank() == TuckerRank{2, 2, 2});
  CHECK(dense_diff(to_dense(rec), to_dense(padded)) <= 1e-11 * padded.norm());
}

TEST_CASE("recompress leaves a full-rank representation untouched") {
  TuckerTensor t = random_tucker(Shape{{5, 5, 5}}, {3, 3, 3}, 37);
  TuckerTensor r = recompress(t);
  CHECK(r.rank() == t.rank());
  CHECK(dense_diff(to_dense(r), to_dense(t)) <= 1e-12 * t.norm());
}

TEST_CASE("exact rank is floored at 1 for the zero tensor") {
  DenseTensor core(Shape{{2, 2}});
  core.setZero();
  std::vector<Matrix> f = {orthonormalize(random_matrix(4, 2, 41)),
                           orthonormalize(random_matrix(4, 2, 43))};
  TuckerTensor z(core, f);
  CHECK(exact_tucker_rank(z) == TuckerRank{1, 1});
}

TEST_CASE("min_core_sigma_ratio flags near-deficient cores") {
  TuckerTensor healthy = random_tucker(Shape{{5, 5, 5}}, {2, 2, 2}, 47);
  CHECK(min_core_sigma_ratio(healthy) > 1e-3);

  // Core with a tiny second singular value in mode 1.
  DenseTensor core(Shape{{2, 2}});
  core.setZero();
  core.at({0, 0}) = 1.0;
  core.at({1, 1}) = 1e-9;
  std::vector<Matrix> f = {orthonormalize(random_matrix(5, 2, 48)),
                           orthonormalize(random_matrix(5, 2, 49))};
  TuckerTensor sick(core, f);
  CHECK(min_core_sigma_ratio(sick) == doctest::Approx(1e-9).epsilon(1e-10));
}

TEST_CASE("hosvd caps the requested rank at the dimensions") {
  DenseTensor x = random_tensor(Shape{{3, 4, 2}}, 53);
  TuckerTensor h = hosvd(x, {5, 5, 5});
  CHECK(rank_le(h.rank(), TuckerRank{3, 4, 2}));
  CHECK(dense_diff(to_dense(h), x) <= 1e-12 * fro_norm(x));
}

TEST_CASE("rank helpers") {
  CHECK(rank_le({1, 2, 3}, {1, 2, 3}));
  CHECK(rank_le({1, 2, 2}, {1, 2, 3}));
  CHECK_FALSE(rank_le({2, 2, 3}, {1, 2, 3}));
  CHECK(rank_to_string({2, 3, 4}) == "(2,3,4)");
}
