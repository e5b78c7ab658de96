#pragma once

#include <algorithm>
#include <utility>

#include "infsup/space.hpp"
#include "infsup/types.hpp"

namespace infsup {

/// A bilinear form between two inner-product spaces. `mat` is
/// right.dim x left.dim with the convention form(x, y) = y_coef^T mat x_coef,
/// i.e. rows are indexed by the second (test) argument.
struct BilinearForm {
  SpacePtr left;
  SpacePtr right;
  Matrix mat;

  BilinearForm(SpacePtr l, SpacePtr r, Matrix m)
      : left(std::move(l)), right(std::move(r)), mat(std::move(m)) {
    if (!left || !right) throw DimensionMismatch("bilinear form needs both spaces");
    if (mat.rows() != right->dim() || mat.cols() != left->dim()) {
      throw DimensionMismatch("form matrix must be right.dim x left.dim");
    }
    if (!mat.allFinite()) throw Error("form matrix has non-finite entries");
  }

  double operator()(const Vector& x, const Vector& y) const { return y.dot(mat * x); }
};

/// Swap the two arguments: transposed(f)(y, x) = f(x, y).
inline BilinearForm transposed(const BilinearForm& f) {
  return BilinearForm(f.right, f.left, f.mat.transpose());
}

/// An operator expressed in whitened (orthonormalized) coordinates of both
/// spaces, so that its plain singular values are the Gram-norm extremal
/// quotients of the underlying form.
struct WhitenedOperator {
  Matrix mat;
  Index rows() const { return mat.rows(); }
  Index cols() const { return mat.cols(); }
};

namespace detail {

/// Singular values in decreasing order; empty input gives an empty vector.
inline Vector singular_values(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return Vector();
  return Eigen::BDCSVD<Matrix>(m).singularValues();
}

inline double sigma_max(const Matrix& m) {
  Vector s = singular_values(m);
  return s.size() ? s(0) : 0.0;
}

/// k-th largest singular value (1-based), zero-padded past min(rows, cols).
inline double kth_singular_value(const Vector& sigma, Index k) {
  if (k < 1) throw DimensionMismatch("singular value index must be >= 1");
  return k <= sigma.size() ? sigma(k - 1) : 0.0;
}

inline Index numerical_rank(const Vector& sigma, double rank_tol) {
  if (sigma.size() == 0) return 0;
  const double cutoff = rank_tol * sigma(0);
  Index r = 0;
  while (r < sigma.size() && sigma(r) > cutoff) ++r;
  return r;
}

/// Orthonormal basis of the Euclidean-orthogonal complement of the columns
/// of an orthonormal n x k matrix, via full QR completion.
inline Matrix euclidean_complement(const Matrix& onb, Index n) {
  if (onb.cols() == 0) return Matrix::Identity(n, n);
  Eigen::HouseholderQR<Matrix> qr(onb);
  Matrix qfull = qr.householderQ();
  return qfull.rightCols(n - onb.cols());
}

}  // namespace detail

/// Change of basis that realizes the Gram geometry: returns
/// L_right^{-1} * mat * L_left^{-T}, whose largest singular value equals
/// sup form(x, y) / (||x|| ||y||).
inline WhitenedOperator whiten(const BilinearForm& form) {
  const Matrix& lr = form.right->cholesky();
  const Matrix& ll = form.left->cholesky();
  Matrix half = lr.template triangularView<Eigen::Lower>().solve(form.mat);
  Matrix out =
      ll.template triangularView<Eigen::Lower>().solve(Matrix(half.transpose())).transpose();
  return WhitenedOperator{std::move(out)};
}

/// Smallest continuity constant of the form: sigma_max of the whitened operator.
inline double operator_norm(const BilinearForm& form) {
  return detail::sigma_max(whiten(form).mat);
}

/// inf ||J v|| / ||v|| over the (whitened) domain. For an invertible square
/// operator this is 1 / ||J^{-1}||. A wide operator (rows < cols) has a
/// nontrivial kernel and the infimum is 0; a zero-dimensional domain makes
/// it vacuous (+infinity sentinel, flagged).
inline ExtremalValue co_norm(const WhitenedOperator& op) {
  if (op.cols() == 0) return {infinity(), true};
  if (op.rows() < op.cols()) return {0.0, false};
  Vector sigma = detail::singular_values(op.mat);
  return {detail::kth_singular_value(sigma, op.cols()), false};
}

enum class KernelSide { Left, Right };

/// Gram-orthonormal basis of the vectors on the chosen side against which
/// the form vanishes identically. Numerical rank uses rank_tol relative to
/// the largest singular value.
inline Subspace kernel(const BilinearForm& form, KernelSide side,
                       double rank_tol = kDefaultRankTol) {
  WhitenedOperator w = whiten(form);
  SpacePtr ambient = (side == KernelSide::Left) ? form.left : form.right;
  const Index n = ambient->dim();
  if (w.rows() == 0 || w.cols() == 0) {
    return Subspace::full(ambient);
  }
  Eigen::BDCSVD<Matrix> svd(w.mat, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Index r = detail::numerical_rank(svd.singularValues(), rank_tol);
  Matrix null_w = (side == KernelSide::Left) ? Matrix(svd.matrixV().rightCols(w.cols() - r))
                                             : Matrix(svd.matrixU().rightCols(w.rows() - r));
  Matrix basis = ambient->cholesky().transpose().template triangularView<Eigen::Upper>().solve(null_w);
  return Subspace(ambient, std::move(basis));
}

/// Gram-orthogonal complement within the ambient space; dimensions add up
/// to ambient.dim and every returned vector is Gram-orthogonal to the input.
inline Subspace orth_complement(const Subspace& s) {
  const Index n = s.ambient()->dim();
  Matrix comp_w = detail::euclidean_complement(s.whitened_basis(), n);
  Matrix basis =
      s.ambient()->cholesky().transpose().template triangularView<Eigen::Upper>().solve(comp_w);
  return Subspace(s.ambient(), std::move(basis));
}

/// Sine of the largest principal angle from w1 to w2:
/// sup over unit w1 of the distance to w2, computed as
/// sigma_max((I - P2) Q1) in whitened coordinates. Ranges in [0, 1];
/// zero exactly when w1 is contained in w2. An empty w1 makes the sup
/// vacuous and returns 0, flagged.
inline ExtremalValue subspace_angle(const Subspace& w1, const Subspace& w2) {
  if (w1.ambient() != w2.ambient()) {
    throw DimensionMismatch("subspace angle requires a common ambient space");
  }
  if (w1.k() == 0) return {0.0, true};
  Matrix q1 = w1.whitened_basis();
  Matrix q2 = w2.whitened_basis();
  Matrix residual = q1 - q2 * (q2.transpose() * q1);
  double s = detail::sigma_max(residual);
  return {std::min(s, 1.0), false};
}

}  // namespace infsup
