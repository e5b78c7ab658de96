#pragma once

#include <memory>
#include <string>
#include <utility>

#include "infsup/types.hpp"

namespace infsup {

/// A finite-dimensional real inner-product space: a dimension and an SPD
/// Gram matrix G, with (x, y) = y^T G x and ||x|| = sqrt(x^T G x).
///
/// The lower Cholesky factor L (G = L L^T) is computed once at
/// construction; "whitened" coordinates xh = L^T x turn the Gram norm into
/// the Euclidean one, which is what every singular-value computation in
/// this library runs on. Instances are immutable and safe to share.
class IpSpace {
 public:
  explicit IpSpace(Matrix gram, std::string label = "")
      : gram_(std::move(gram)), label_(std::move(label)) {
    if (gram_.rows() != gram_.cols() || gram_.rows() < 1) {
      throw DimensionMismatch("Gram matrix must be square and nonempty (space '" + label_ + "')");
    }
    const double scale = gram_.cwiseAbs().maxCoeff();
    if (!gram_.allFinite()) {
      throw GramNotSpd("Gram matrix has non-finite entries (space '" + label_ + "')");
    }
    if ((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300)) {
      throw GramNotSpd("Gram matrix is not symmetric (space '" + label_ + "')");
    }
    Eigen::LLT<Matrix> llt(gram_);
    if (llt.info() != Eigen::Success) {
      throw GramNotSpd("Gram matrix is not positive definite (space '" + label_ + "')");
    }
    chol_ = llt.matrixL();
  }

  Index dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }
  /// Lower-triangular L with gram = L * L^T.
  const Matrix& cholesky() const { return chol_; }
  const std::string& label() const { return label_; }

  double inner(const Vector& x, const Vector& y) const { return y.dot(gram_ * x); }
  double norm(const Vector& x) const {
    return (chol_.transpose() * x).norm();
  }

  /// Coefficients -> whitened coordinates (L^T x).
  Vector whiten(const Vector& x) const { return chol_.transpose() * x; }
  /// Whitened coordinates -> coefficients (L^{-T} xh).
  Vector unwhiten(const Vector& xh) const {
    return chol_.transpose().template triangularView<Eigen::Upper>().solve(xh);
  }

 private:
  Matrix gram_;
  Matrix chol_;
  std::string label_;
};

using SpacePtr = std::shared_ptr<const IpSpace>;

inline SpacePtr make_space(Matrix gram, std::string label = "") {
  return std::make_shared<IpSpace>(std::move(gram), std::move(label));
}

inline SpacePtr euclidean_space(Index dim, std::string label = "") {
  return make_space(Matrix::Identity(dim, dim), std::move(label));
}

/// A subspace of an IpSpace, stored as a Gram-orthonormal basis
/// (basis^T G basis = I_k). k = 0 is the valid empty subspace.
class Subspace {
 public:
  Subspace(SpacePtr ambient, Matrix basis) : ambient_(std::move(ambient)), basis_(std::move(basis)) {
    if (!ambient_) throw DimensionMismatch("subspace needs an ambient space");
    if (basis_.rows() != ambient_->dim() || basis_.cols() > ambient_->dim()) {
      throw DimensionMismatch("subspace basis shape does not match the ambient space");
    }
    if (k() > 0) {
      Matrix defect = basis_.transpose() * ambient_->gram() * basis_ - Matrix::Identity(k(), k());
      if (defect.cwiseAbs().maxCoeff() > 1e-10) {
        throw DimensionMismatch("subspace basis is not Gram-orthonormal");
      }
    }
  }

  static Subspace empty(SpacePtr ambient) {
    Index n = ambient->dim();
    return Subspace(std::move(ambient), Matrix::Zero(n, 0));
  }

  /// The whole space, with the canonical Gram-orthonormal basis L^{-T}.
  static Subspace full(SpacePtr ambient) {
    const Matrix& L = ambient->cholesky();
    Matrix basis = L.transpose().template triangularView<Eigen::Upper>().solve(
        Matrix::Identity(ambient->dim(), ambient->dim()));
    return Subspace(std::move(ambient), std::move(basis));
  }

  /// Span of arbitrary (possibly dependent) vectors, Gram-orthonormalized.
  /// Columns whose whitened residual falls below rank_tol are dropped.
  static Subspace from_span(SpacePtr ambient, const Matrix& vectors,
                            double rank_tol = kDefaultRankTol) {
    if (vectors.rows() != ambient->dim()) {
      throw DimensionMismatch("spanning vectors do not live in the ambient space");
    }
    if (vectors.cols() == 0) return empty(std::move(ambient));
    Matrix w = ambient->cholesky().transpose() * vectors;
    Eigen::ColPivHouseholderQR<Matrix> qr(w);
    qr.setThreshold(rank_tol);
    Index r = qr.rank();
    Matrix qfull = qr.householderQ();
    Matrix basis = ambient->cholesky().transpose().template triangularView<Eigen::Upper>().solve(
        Matrix(qfull.leftCols(r)));
    return Subspace(std::move(ambient), std::move(basis));
  }

  const SpacePtr& ambient() const { return ambient_; }
  const Matrix& basis() const { return basis_; }
  Index k() const { return basis_.cols(); }
  /// Basis in whitened coordinates (Euclidean-orthonormal columns).
  Matrix whitened_basis() const { return ambient_->cholesky().transpose() * basis_; }

 private:
  SpacePtr ambient_;
  Matrix basis_;
};

}  // namespace infsup
