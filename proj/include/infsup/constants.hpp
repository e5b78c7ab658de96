#pragma once

#include <cmath>
#include <optional>

#include "infsup/operators.hpp"

namespace infsup {

/// Result of an inf-sup computation over a pair of subspaces:
/// inf over unit x in left_sub of sup over unit y in right_sub of form(x, y).
/// `scale` is the largest singular value of the restricted operator and is
/// the reference magnitude for deciding whether `value` counts as positive.
struct InfSupResult {
  double value = 0.0;
  double scale = 0.0;
  bool vacuous = false;

  bool positive(double rank_tol = kDefaultRankTol) const {
    return !vacuous && value > rank_tol * scale;
  }
};

/// Restricted inf-sup constant: the k_left-th largest singular value of
/// (right basis)^T * mat * (left basis). The infimum over an empty left
/// subspace is vacuous and tagged as such.
inline InfSupResult inf_sup(const BilinearForm& form, const Subspace& left_sub,
                            const Subspace& right_sub) {
  if (left_sub.ambient() != form.left || right_sub.ambient() != form.right) {
    throw DimensionMismatch("inf_sup subspaces must live in the form's argument spaces");
  }
  if (left_sub.k() == 0) return {infinity(), 0.0, true};
  Matrix restricted = right_sub.basis().transpose() * form.mat * left_sub.basis();
  Vector sigma = detail::singular_values(restricted);
  double scale = sigma.size() ? sigma(0) : 0.0;
  return {detail::kth_singular_value(sigma, left_sub.k()), scale, false};
}

/// Largest kappa with ||K mu|| >= kappa ||mu||, together with the
/// equivalent surjectivity verdict for the adjoint: kappa is the smallest
/// of the cols-many singular values (zero-padded when rows < cols) and the
/// adjoint is onto exactly when the numerical rank equals cols.
struct Minoration {
  double kappa = 0.0;
  bool adjoint_surjective = false;
};

inline Minoration max_minoration(const WhitenedOperator& op, double rank_tol = kDefaultRankTol) {
  if (op.cols() == 0) return {infinity(), true};
  Vector sigma = detail::singular_values(op.mat);
  double kappa = detail::kth_singular_value(sigma, op.cols());
  bool onto = detail::numerical_rank(sigma, rank_tol) == op.cols();
  return {kappa, onto};
}

/// Forward minoration constant of K and the minoration constant of K*
/// restricted to the orthogonal complement of Ker(K*). In finite dimensions
/// both equal the smallest nonzero singular value.
struct AdjointMinoration {
  double forward = 0.0;
  double on_complement = 0.0;
};

inline AdjointMinoration adjoint_infsup(const WhitenedOperator& op,
                                        double rank_tol = kDefaultRankTol) {
  if (op.cols() == 0) throw ForwardMinorationFails("operator has a zero-dimensional domain");
  Eigen::BDCSVD<Matrix> svd(op.mat, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  double forward = detail::kth_singular_value(sigma, op.cols());
  double smax = sigma.size() ? sigma(0) : 0.0;
  if (forward <= rank_tol * smax || smax == 0.0) {
    throw ForwardMinorationFails("forward minoration constant is zero");
  }
  Index r = detail::numerical_rank(sigma, rank_tol);
  // Z = range(K) = orthogonal complement of Ker(K*); restrict K* to it.
  Matrix z_basis = svd.matrixU().leftCols(r);
  Matrix restricted = op.mat.transpose() * z_basis;
  ExtremalValue on_z = co_norm(WhitenedOperator{std::move(restricted)});
  return {forward, on_z.value};
}

/// Floor constant a5 = a1*a3 / sqrt(a1^2 + (a2+a3)^2), which satisfies
/// max[a1*x1 - a2*x2, a3*x2] >= a5 * sqrt(x1^2 + x2^2) for all x1, x2 >= 0.
inline double dupire_floor(double a1, double a2, double a3) {
  if (!(a1 > 0.0) || !(a3 > 0.0) || a2 < 0.0) {
    throw NonPositiveCoefficient("dupire_floor needs a1 > 0, a3 > 0, a2 >= 0");
  }
  return a1 * a3 / std::hypot(a1, a2 + a3);
}

/// The weak-coercivity constant chain of the asymmetric stability theorem.
/// A vacuous alpha (zero-dimensional kernel R) takes the alpha -> infinity
/// limit nu = delta.
struct GammaBreakdown {
  double alpha = 0.0;  // meaningful only when !alpha_vacuous
  bool alpha_vacuous = false;
  double beta = 0.0;
  double delta = 0.0;
  double norm_a = 0.0;
  double nu = 0.0;
  double gamma = 0.0;
};

inline GammaBreakdown gamma_asymmetric(std::optional<double> alpha, double beta, double delta,
                                       double norm_a) {
  if (!(beta > 0.0) || !(delta > 0.0) || (alpha && !(*alpha > 0.0)) || norm_a < 0.0) {
    throw DegenerateConstants("gamma_asymmetric needs beta, delta > 0 and alpha > 0 or vacuous");
  }
  GammaBreakdown out;
  out.alpha = alpha.value_or(0.0);
  out.alpha_vacuous = !alpha.has_value();
  out.beta = beta;
  out.delta = delta;
  out.norm_a = norm_a;
  out.nu = alpha ? dupire_floor(*alpha, norm_a, delta) : delta;
  out.gamma = dupire_floor(beta, norm_a, out.nu);
  return out;
}

/// Constants for the symmetric case (b = d, same product spaces):
/// lambda = sqrt((||a||+beta)^2 + alpha^2),
/// gamma  = alpha beta^2 / sqrt((alpha beta + lambda ||a||)^2 + lambda^2 beta^2),
/// and the simpler upper variant gamma_bar = alpha beta^2 / (||a||^2 + beta^2).
struct SymmetricGamma {
  double gamma = 0.0;
  double lambda = 0.0;
  double gamma_bar = 0.0;
};

inline SymmetricGamma gamma_symmetric(double alpha, double beta, double norm_a) {
  if (!(alpha > 0.0) || !(beta > 0.0) || norm_a < 0.0) {
    throw DegenerateConstants("gamma_symmetric needs alpha, beta > 0");
  }
  SymmetricGamma out;
  out.lambda = std::hypot(norm_a + beta, alpha);
  out.gamma = alpha * beta * beta /
              std::hypot(alpha * beta + out.lambda * norm_a, out.lambda * beta);
  out.gamma_bar = alpha * beta * beta / (norm_a * norm_a + beta * beta);
  return out;
}

}  // namespace infsup
