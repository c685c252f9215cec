#include "ttv/geometry.hpp"

namespace ttv {

namespace {

Matrix hcat(const Matrix& a, const Matrix& b) {
  if (b.cols() == 0) return a;
  if (a.cols() == 0) return b;
  Matrix c(a.rows(), a.cols() + b.cols());
  c << a, b;
  return c;
}

// out += scale * small, placed at the given per-mode offsets.
void embed_add(DenseTensor& out, const DenseTensor& small, const std::vector<Eigen::Index>& off,
               double scale) {
  const Eigen::Index d = out.order();
  std::vector<Eigen::Index> idx(static_cast<size_t>(d), 0);
  std::vector<Eigen::Index> pos(static_cast<size_t>(d));
  for (Eigen::Index lin = 0; lin < small.size(); ++lin) {
    for (Eigen::Index k = 0; k < d; ++k) {
      pos[static_cast<size_t>(k)] = idx[static_cast<size_t>(k)] + off[static_cast<size_t>(k)];
    }
    out.at(pos) += scale * small[lin];
    for (Eigen::Index k = 0; k < d; ++k) {
      size_t uk = static_cast<size_t>(k);
      if (++idx[uk] < small.shape().dim(k)) break;
      idx[uk] = 0;
    }
  }
}

std::vector<Matrix> core_pinvs(const TuckerTensor& x) {
  std::vector<Matrix> p(static_cast<size_t>(x.order()));
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    p[static_cast<size_t>(k)] = pinv_rows(unfold(x.core(), k));
  }
  return p;
}

std::vector<Matrix> all_aneq(const TuckerTensor& x, const AmbientTensor& a) {
  std::vector<Matrix> m(static_cast<size_t>(x.order()));
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    m[static_cast<size_t>(k)] = a.contract_except(k, x.factors());
  }
  return m;
}

// Fresh per-mode bases orthogonal to the current factors; widths[k] columns
// for mode k.
std::vector<Matrix> select_fresh_basis(const TuckerTensor& x, const AmbientTensor& a,
                                       const std::vector<Eigen::Index>& widths,
                                       const ConeBasisChoice& choice) {
  const Eigen::Index d = x.order();
  std::vector<Matrix> u1(static_cast<size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    const size_t uk = static_cast<size_t>(k);
    const Matrix& u = x.factor(k);
    const Eigen::Index m = widths[uk];
    if (m < 0) throw TtvError("select_cone_basis: point rank exceeds the bound");
    if (m == 0) {
      u1[uk] = Matrix(u.rows(), 0);
      continue;
    }
    const uint64_t seed_k = choice.seed ^ (0x51e3ULL + static_cast<uint64_t>(k) * 0x9e37ULL);
    if (choice.strategy == ConeBasisStrategy::RandomComplement) {
      u1[uk] = complement_basis(u, m, seed_k);
      continue;
    }
    Matrix z;
    if (d == 2 && a.has_dense()) {
      // Matrix case: the optimal fresh directions are the leading singular
      // vectors of the corner P_U^perp A P_V^perp (closed form).
      z = unfold(a.materialize(), k);
      const Matrix& other = x.factor(1 - k);
      z -= u * (u.transpose() * z);
      z -= (z * other) * other.transpose();
    } else {
      z = a.contract_except(k, x.factors());
      z -= u * (u.transpose() * z);
    }
    ThinSVD svd = thin_svd(z);
    const Eigen::Index take = std::min(m, svd.numerical_rank);
    Matrix basis = svd.u.leftCols(take);
    if (take < m) {
      // Degenerate spectrum: fill the remaining directions with a seeded
      // orthonormal complement so the element sizes stay as declared.
      basis = hcat(basis, complement_basis(hcat(u, basis), m - take, seed_k));
    }
    u1[uk] = basis;
  }
  return u1;
}

double sum_block_sq(const TuckerTensor& x, const std::vector<Matrix>& coef) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    const Matrix& y = coef[static_cast<size_t>(k)];
    if (y.size() == 0 || y.isZero(0.0)) continue;
    const double nk = fro_norm(mode_product(x.core(), y, k));
    s += nk * nk;
  }
  return s;
}

}  // namespace

double tangent_norm(const TuckerTensor& x, const TangentVector& v) {
  const double g = fro_norm(v.gdot);
  return std::sqrt(g * g + sum_block_sq(x, v.vdot));
}

double cone_norm(const TuckerTensor& x, const TangentConeElement& v) {
  const double c = fro_norm(v.c);
  return std::sqrt(c * c + sum_block_sq(x, v.y));
}

DenseTensor tangent_to_dense(const TuckerTensor& x, const TangentVector& v) {
  DenseTensor out = multi_mode_product(v.gdot, x.factors());
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    std::vector<Matrix> f = x.factors();
    f[static_cast<size_t>(k)] = v.vdot[static_cast<size_t>(k)];
    add_scaled(out, multi_mode_product(x.core(), f), 1.0);
  }
  return out;
}

DenseTensor cone_to_dense(const TuckerTensor& x, const TangentConeElement& v) {
  std::vector<Matrix> s(static_cast<size_t>(x.order()));
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    s[static_cast<size_t>(k)] = hcat(x.factor(k), v.u1[static_cast<size_t>(k)]);
  }
  DenseTensor out = multi_mode_product(v.c, s);
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    std::vector<Matrix> f = x.factors();
    f[static_cast<size_t>(k)] = v.y[static_cast<size_t>(k)];
    add_scaled(out, multi_mode_product(x.core(), f), 1.0);
  }
  return out;
}

TangentVector proj_tangent_space(const TuckerTensor& x, const AmbientTensor& a) {
  if (a.shape() != x.shape()) throw TtvError("proj_tangent_space: shape mismatch");
  TangentVector v;
  v.gdot = a.contract_all(x.factors());
  v.vdot.resize(static_cast<size_t>(x.order()));
  const std::vector<Matrix> pinvs = core_pinvs(x);
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    const size_t uk = static_cast<size_t>(k);
    const Matrix& u = x.factor(k);
    Matrix z = a.contract_except(k, x.factors());
    z -= u * (u.transpose() * z);
    v.vdot[uk] = z * pinvs[uk];
  }
  return v;
}

std::vector<Matrix> select_cone_basis(const TuckerTensor& x, const AmbientTensor& a,
                                      const TuckerRank& r, const ConeBasisChoice& choice) {
  const TuckerRank rbar = x.rank();
  std::vector<Eigen::Index> widths(static_cast<size_t>(x.order()));
  for (size_t k = 0; k < widths.size(); ++k) widths[k] = r[k] - rbar[k];
  return select_fresh_basis(x, a, widths, choice);
}

TangentConeElement approx_proj_cone(const TuckerTensor& x, const AmbientTensor& a,
                                    const TuckerRank& r, const ConeBasisChoice& choice) {
  if (a.shape() != x.shape()) throw TtvError("approx_proj_cone: shape mismatch");
  TangentConeElement v;
  v.bound = r;
  v.u1 = select_cone_basis(x, a, r, choice);
  std::vector<Matrix> s(static_cast<size_t>(x.order()));
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    s[static_cast<size_t>(k)] = hcat(x.factor(k), v.u1[static_cast<size_t>(k)]);
  }
  v.c = a.contract_all(s);
  v.y.resize(static_cast<size_t>(x.order()));
  const std::vector<Matrix> pinvs = core_pinvs(x);
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    const size_t uk = static_cast<size_t>(k);
    Matrix z = a.contract_except(k, x.factors());
    z -= s[uk] * (s[uk].transpose() * z);  // complement of [U_k U1_k]
    v.y[uk] = z * pinvs[uk];
  }
  return v;
}

namespace {

TangentConeElement zero_element(const TuckerTensor& x, const TuckerRank& bound) {
  TangentConeElement v;
  v.bound = bound;
  v.c = DenseTensor(Shape(bound));
  v.u1.resize(static_cast<size_t>(x.order()));
  v.y.resize(static_cast<size_t>(x.order()));
  for (Eigen::Index k = 0; k < x.order(); ++k) {
    const size_t uk = static_cast<size_t>(k);
    v.u1[uk] = Matrix(x.factor(k).rows(), bound[uk] - x.core().shape().dim(k));
    v.y[uk] = Matrix::Zero(x.factor(k).rows(), x.core().shape().dim(k));
  }
  return v;
}

}  // namespace

TangentConeElement partial_proj(const TuckerTensor& x, const AmbientTensor& a,
                                const TuckerRank& r, Eigen::Index k,
                                const ConeBasisChoice& choice) {
  if (k < 0 || k > x.order()) throw TtvError("partial_proj: block index out of range");
  if (k == 0) {
    TangentConeElement v = zero_element(x, r);
    v.u1 = select_cone_basis(x, a, r, choice);
    std::vector<Matrix> s(static_cast<size_t>(x.order()));
    for (Eigen::Index j = 0; j < x.order(); ++j) {
      s[static_cast<size_t>(j)] = hcat(x.factor(j), v.u1[static_cast<size_t>(j)]);
    }
    v.c = a.contract_all(s);
    return v;
  }
  // Blocks k >= 1 use the full complement of U_k and keep the point's rank.
  TangentConeElement v = zero_element(x, x.rank());
  const Eigen::Index mode = k - 1;
  const size_t um = static_cast<size_t>(mode);
  const Matrix& u = x.factor(mode);
  Matrix z = a.contract_except(mode, x.factors());
  z -= u * (u.transpose() * z);
  v.y[um] = z * pinv_rows(unfold(x.core(), mode));
  return v;
}

HatProj hat_proj(const TuckerTensor& x, const AmbientTensor& a, const TuckerRank& r,
                 const ConeBasisChoice& choice) {
  HatProj out;
  out.block_norms.assign(static_cast<size_t>(x.order()) + 1, 0.0);
  std::vector<TangentConeElement> blocks;
  blocks.reserve(static_cast<size_t>(x.order()) + 1);
  for (Eigen::Index k = 0; k <= x.order(); ++k) {
    blocks.push_back(partial_proj(x, a, r, k, choice));
    out.block_norms[static_cast<size_t>(k)] = cone_norm(x, blocks.back());
  }
  out.block = 0;
  for (Eigen::Index k = 1; k <= x.order(); ++k) {
    if (out.block_norms[static_cast<size_t>(k)] >
        out.block_norms[static_cast<size_t>(out.block)]) {
      out.block = k;
    }
  }
  out.norm = out.block_norms[static_cast<size_t>(out.block)];
  out.element = std::move(blocks[static_cast<size_t>(out.block)]);
  return out;
}

TuckerTensor normal_increase_direction(const TuckerTensor& x, const AmbientTensor& a,
                                       const std::vector<Eigen::Index>& ell,
                                       const ConeBasisChoice& choice) {
  if (static_cast<Eigen::Index>(ell.size()) != x.order()) {
    throw TtvError("normal_increase_direction: one increment per mode required");
  }
  std::vector<Matrix> u1 = select_fresh_basis(x, a, ell, choice);
  DenseTensor ghat = a.contract_all(u1);
  return TuckerTensor(std::move(ghat), std::move(u1));
}

double grad_surrogate_norm(const AmbientTensor& a) { return a.norm(); }

namespace {

struct ModeBlocks {
  Matrix w;        // joint orthonormal basis for the mode
  Matrix coef;     // coefficients of the extra (non-factor) directions
  Eigen::Index extra_off = 0;
};

TuckerTensor assemble_and_truncate(const TuckerTensor& x, const DenseTensor* c_block,
                                   const std::vector<Matrix>& u1,
                                   const std::vector<Matrix>& extra, double s,
                                   const TuckerRank& r) {
  const Eigen::Index d = x.order();
  std::vector<Matrix> w(static_cast<size_t>(d));
  std::vector<Matrix> coef(static_cast<size_t>(d));
  std::vector<Eigen::Index> mdims(static_cast<size_t>(d));
  std::vector<Eigen::Index> extra_off(static_cast<size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    const size_t uk = static_cast<size_t>(k);
    Matrix base = x.factor(k);
    if (!u1.empty() && u1[uk].cols() > 0) base = hcat(base, u1[uk]);
    Matrix q(base.rows(), 0);
    if (!extra.empty() && extra[uk].size() > 0 && !extra[uk].isZero(0.0)) {
      // The gauge condition makes extra orthogonal to base only up to the
      // relative accuracy of extra, which can be poor near rank-deficient
      // points; project base out explicitly (twice, for numerical safety) so
      // the assembled factor stays orthonormal.
      Matrix resid = extra[uk] - base * (base.transpose() * extra[uk]);
      resid -= base * (base.transpose() * resid);
      if (!resid.isZero(0.0)) {
        ThinSVD svd = thin_svd(resid);
        q = svd.u.leftCols(svd.numerical_rank);
        coef[uk] = q.transpose() * extra[uk];
      }
    }
    extra_off[uk] = base.cols();
    w[uk] = hcat(base, q);
    mdims[uk] = w[uk].cols();
  }
  DenseTensor big((Shape(mdims)));
  std::vector<Eigen::Index> zero_off(static_cast<size_t>(d), 0);
  embed_add(big, x.core(), zero_off, 1.0);
  if (c_block != nullptr) embed_add(big, *c_block, zero_off, s);
  for (Eigen::Index k = 0; k < d; ++k) {
    const size_t uk = static_cast<size_t>(k);
    if (coef[uk].size() == 0) continue;
    std::vector<Eigen::Index> off = zero_off;
    off[uk] = extra_off[uk];
    embed_add(big, mode_product(x.core(), coef[uk], k), off, s);
  }
  TuckerTensor small = hosvd(big, r);
  std::vector<Matrix> factors(static_cast<size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    factors[static_cast<size_t>(k)] = w[static_cast<size_t>(k)] * small.factor(k);
  }
  return TuckerTensor(small.core(), std::move(factors));
}

}  // namespace

TuckerTensor retract_cone_step(const TuckerTensor& x, const TangentConeElement& v, double s,
                               const TuckerRank& r) {
  return assemble_and_truncate(x, &v.c, v.u1, v.y, s, r);
}

TuckerTensor retract_tangent_step(const TuckerTensor& x, const TangentVector& v, double s,
                                  const TuckerRank& r) {
  return assemble_and_truncate(x, &v.gdot, {}, v.vdot, s, r);
}

TuckerTensor block_step(const TuckerTensor& x, const TangentConeElement& v, double s,
                        Eigen::Index block) {
  const Eigen::Index d = x.order();
  if (block == 0) {
    std::vector<Matrix> factors(static_cast<size_t>(d));
    DenseTensor core(Shape(v.bound));
    std::vector<Eigen::Index> zero_off(static_cast<size_t>(d), 0);
    embed_add(core, x.core(), zero_off, 1.0);
    embed_add(core, v.c, zero_off, s);
    for (Eigen::Index k = 0; k < d; ++k) {
      factors[static_cast<size_t>(k)] = hcat(x.factor(k), v.u1[static_cast<size_t>(k)]);
    }
    return TuckerTensor(std::move(core), std::move(factors));
  }
  const Eigen::Index mode = block - 1;
  const size_t um = static_cast<size_t>(mode);
  Matrix m = x.factor(mode) + s * v.y[um];
  Matrix q = orthonormalize(m);
  std::vector<Matrix> factors = x.factors();
  factors[um] = q;
  return TuckerTensor(mode_product(x.core(), q.transpose() * m, mode), std::move(factors));
}

TuckerTensor increase_step(const TuckerTensor& x, const TuckerTensor& n, double s) {
  const Eigen::Index d = x.order();
  std::vector<Matrix> factors(static_cast<size_t>(d));
  std::vector<Eigen::Index> mdims(static_cast<size_t>(d));
  std::vector<Eigen::Index> off(static_cast<size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    const size_t uk = static_cast<size_t>(k);
    factors[uk] = hcat(x.factor(k), n.factor(k));
    off[uk] = x.factor(k).cols();
    mdims[uk] = factors[uk].cols();
  }
  DenseTensor core((Shape(mdims)));
  std::vector<Eigen::Index> zero_off(static_cast<size_t>(d), 0);
  embed_add(core, x.core(), zero_off, 1.0);
  embed_add(core, n.core(), off, s);
  return TuckerTensor(std::move(core), std::move(factors));
}

}  // namespace ttv
