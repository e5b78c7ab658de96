#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "infsup/types.hpp"

namespace infsup {

/// Seeded generator with hand-rolled distributions, so that a given seed
/// produces the same stream on every platform and standard library
/// (std::normal_distribution makes no such promise).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Vector normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  Matrix normal_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  Vector uniform_vector(Index n, double lo, double hi) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

  /// rows x cols matrix with orthonormal columns (rows >= cols), from the
  /// QR factor of a Gaussian sample with the sign convention diag(R) > 0.
  Matrix orthonormal(Index rows, Index cols) {
    if (cols > rows) throw DimensionMismatch("orthonormal factor needs rows >= cols");
    if (cols == 0) return Matrix::Zero(rows, 0);
    Matrix g = normal_matrix(rows, cols);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = Matrix(qr.householderQ()).leftCols(cols);
    Matrix r = qr.matrixQR().topLeftCorner(cols, cols);
    for (Index j = 0; j < cols; ++j) {
      if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
  }

  /// Random SPD matrix with eigenvalues drawn uniformly in [lam_lo, lam_hi].
  Matrix spd(Index n, double lam_lo, double lam_hi) {
    Matrix q = orthonormal(n, n);
    Vector lam = uniform_vector(n, lam_lo, lam_hi);
    Matrix g = q * lam.asDiagonal() * q.transpose();
    return 0.5 * (g + g.transpose());
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace infsup
