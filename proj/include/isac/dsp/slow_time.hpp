#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "isac/core/constants.hpp"
#include "isac/core/error.hpp"

namespace isac {

/// Fast time (L rows) by slow time (C columns).
struct SlowTimeMatrix {
  Eigen::MatrixXcd data;

  Eigen::Index fast_len() const { return data.rows(); }
  Eigen::Index cycles() const { return data.cols(); }
};

inline SlowTimeMatrix stack_cycles(const std::vector<std::vector<cplx>>& cycles) {
  if (cycles.empty()) throw InvalidArgument("stack_cycles: no cycles");
  const std::size_t len = cycles.front().size();
  if (len == 0) throw InvalidArgument("stack_cycles: empty cycle");
  SlowTimeMatrix m;
  m.data.resize(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(cycles.size()));
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    if (cycles[c].size() != len) throw InvalidArgument("stack_cycles: ragged input");
    m.data.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Eigen::VectorXcd>(cycles[c].data(), len);
  }
  return m;
}

/// Thin SVD X = sum_j a_j b_j c_j^H with a_j descending.
struct SvdResult {
  Eigen::VectorXd values;  // a_j
  Eigen::MatrixXcd left;   // b_j as columns
  Eigen::MatrixXcd right;  // c_j as columns
};

/// SVD through the Hermitian eigenproblem of the smaller Gram matrix
/// (X^H X when C <= L, X X^H otherwise). Components with a_j = 0 are dropped.
inline SvdResult thin_svd(const Eigen::MatrixXcd& x) {
  const bool use_right = x.cols() <= x.rows();
  const Eigen::MatrixXcd gram = use_right ? Eigen::MatrixXcd(x.adjoint() * x) : Eigen::MatrixXcd(x * x.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  if (eig.info() != Eigen::Success) throw Error("thin_svd: eigendecomposition failed");

  const Eigen::Index n = gram.rows();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = n - 1; j >= 0; --j)
    if (eig.eigenvalues()(j) > 0.0) keep.push_back(j);

  SvdResult out;
  const auto k = static_cast<Eigen::Index>(keep.size());
  out.values.resize(k);
  out.left.resize(x.rows(), k);
  out.right.resize(x.cols(), k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double a = std::sqrt(eig.eigenvalues()(keep[i]));
    const Eigen::VectorXcd vec = eig.eigenvectors().col(keep[i]);
    out.values(i) = a;
    if (use_right) {
      out.right.col(i) = vec;
      out.left.col(i) = x * vec / a;
    } else {
      out.left.col(i) = vec;
      out.right.col(i) = x.adjoint() * vec / a;
    }
  }
  return out;
}

/// Numerical rank: singular values above 1e-7 of the largest (the Gram route
/// resolves a_j only to about sqrt(eps) a_1).
inline Eigen::Index numerical_rank(const SvdResult& svd) {
  if (svd.values.size() == 0) return 0;
  const double tol = 1e-7 * svd.values(0);
  Eigen::Index r = 0;
  while (r < svd.values.size() && svd.values(r) > tol) ++r;
  return r;
}

/// Y = sum_{j=r}^{R} a_j b_j c_j^H: drops the r-1 strongest components.
/// r = 1 returns X unchanged.
inline SlowTimeMatrix svd_denoise(const SlowTimeMatrix& x, int r) {
  if (r < 1) throw InvalidArgument("svd_denoise: threshold r must be >= 1");
  if (r == 1) return x;
  const SvdResult svd = thin_svd(x.data);
  const Eigen::Index rank = numerical_rank(svd);
  if (r > rank + 1) throw InvalidArgument("svd_denoise: threshold r exceeds rank(X) + 1");
  const Eigen::Index drop = r - 1;
  SlowTimeMatrix y;
  // Project out the dropped right singular vectors: X (I - V V^H).
  const Eigen::MatrixXcd v = svd.right.leftCols(drop);
  y.data = x.data - (x.data * v) * v.adjoint();
  return y;
}

/// y~(i) = sum_l conj(Y(l, i) conj(s~(l))) over the sweep samples.
inline std::vector<cplx> dechirp_and_collapse(const SlowTimeMatrix& y, std::span<const cplx> reference) {
  const auto len = static_cast<Eigen::Index>(reference.size());
  if (len == 0 || len > y.fast_len())
    throw InvalidArgument("dechirp_and_collapse: reference chirp longer than the fast-time window");
  const Eigen::Map<const Eigen::VectorXcd> ref(reference.data(), len);
  std::vector<cplx> out(static_cast<std::size_t>(y.cycles()));
  for (Eigen::Index c = 0; c < y.cycles(); ++c) {
    // sum conj(Y) * s~ == (Y^H s~) restricted to the sweep rows.
    out[static_cast<std::size_t>(c)] = y.data.col(c).head(len).conjugate().cwiseProduct(ref).sum();
  }
  return out;
}

}  // namespace isac
