#pragma once

#include <cmath>
#include <utility>

#include "infsup/saddle.hpp"

namespace infsup {

/// Coarse-into-fine coefficient maps for the four spaces.
struct Embeddings {
  Matrix P, Q, U, V;
};

namespace detail {

inline void check_embedding(const char* name, const Matrix& e, const IpSpace& fine,
                            const IpSpace& coarse, double tol) {
  if (e.rows() != fine.dim() || e.cols() != coarse.dim()) {
    throw DimensionMismatch(std::string("embedding ") + name + " has the wrong shape");
  }
  Matrix defect = e.transpose() * fine.gram() * e - coarse.gram();
  double scale = std::max(1.0, coarse.gram().cwiseAbs().maxCoeff());
  if (defect.cwiseAbs().maxCoeff() > tol * scale) {
    throw ConformityViolation(std::string("conformity check failed: embedding ") + name +
                              " does not preserve the inner product");
  }
}

inline void check_form(const char* name, const BilinearForm& fine, const BilinearForm& coarse,
                       const Matrix& e_left, const Matrix& e_right, double tol) {
  Matrix restricted = e_right.transpose() * fine.mat * e_left;
  double scale = std::max(1.0, coarse.mat.cwiseAbs().maxCoeff());
  if ((restricted - coarse.mat).cwiseAbs().maxCoeff() > tol * scale) {
    throw ConformityViolation(std::string("conformity check failed: form ") + name +
                              " is not the restriction of the fine form");
  }
}

}  // namespace detail

/// A conforming coarse/fine pair: the coarse spaces embed isometrically in
/// the fine ones and every coarse form is the restriction of the fine form.
/// Both properties are verified on construction.
struct ConformingPair {
  SaddleSystem fine;
  SaddleSystem coarse;
  Embeddings emb;

  ConformingPair(SaddleSystem fine_, SaddleSystem coarse_, Embeddings emb_,
                 double check_tol = kDefaultCheckTol)
      : fine(std::move(fine_)), coarse(std::move(coarse_)), emb(std::move(emb_)) {
    detail::check_embedding("P", emb.P, *fine.P, *coarse.P, check_tol);
    detail::check_embedding("Q", emb.Q, *fine.Q, *coarse.Q, check_tol);
    detail::check_embedding("U", emb.U, *fine.U, *coarse.U, check_tol);
    detail::check_embedding("V", emb.V, *fine.V, *coarse.V, check_tol);
    detail::check_form("a", fine.a, coarse.a, emb.P, emb.Q, check_tol);
    detail::check_form("b", fine.b, coarse.b, emb.U, emb.Q, check_tol);
    detail::check_form("d", fine.d, coarse.d, emb.P, emb.V, check_tol);
  }
};

/// Distance (in the Gram norm of the fine space) from a fine vector to the
/// range of an embedding, via orthogonal projection; this is the exact
/// best-approximation error.
inline double best_approx_error(const Vector& fine_vec, const Matrix& embedding,
                                const Matrix& fine_gram) {
  if (fine_vec.size() != embedding.rows() || fine_gram.rows() != fine_vec.size() ||
      fine_gram.rows() != fine_gram.cols()) {
    throw DimensionMismatch("best_approx_error arguments have inconsistent shapes");
  }
  Eigen::LLT<Matrix> llt(fine_gram);
  if (llt.info() != Eigen::Success) throw GramNotSpd("fine Gram matrix is not SPD");
  Matrix l = llt.matrixL();
  Vector vw = l.transpose() * fine_vec;
  if (embedding.cols() == 0) return vw.norm();
  Matrix ew = l.transpose() * embedding;
  Eigen::ColPivHouseholderQR<Matrix> qr(ew);
  Index r = qr.rank();
  if (r == 0) return vw.norm();
  Matrix q = Matrix(qr.householderQ()).leftCols(r);
  return (vw - q * (q.transpose() * vw)).norm();
}

/// Angle between the embedded coarse kernel of d and the fine kernel of d,
/// measured in the fine P-norm. Zero (flagged) when the coarse kernel is
/// empty; zero within roundoff when the kernels nest.
inline ExtremalValue kernel_angle(const ConformingPair& pair, double rank_tol = kDefaultRankTol) {
  Subspace coarse_r = kernel(pair.coarse.d, KernelSide::Left, rank_tol);
  if (coarse_r.k() == 0) return {0.0, true};
  Subspace embedded =
      Subspace::from_span(pair.fine.P, pair.emb.P * coarse_r.basis(), rank_tol);
  Subspace fine_r = kernel(pair.fine.d, KernelSide::Left, rank_tol);
  return subspace_angle(embedded, fine_r);
}

/// A-priori error report: actual errors of the coarse Galerkin solution
/// against the fine one, best-approximation errors, and the three certified
/// right-hand sides (global twice, with the closed-form gamma and with the
/// optimal gamma_true of the coarse system).
struct ErrorCertificate {
  double err_global = 0.0, err_primal = 0.0, err_mult = 0.0;
  double best_global = 0.0, best_primal = 0.0, best_mult = 0.0;
  double bound_global_formula = 0.0, bound_global_true = 0.0;
  double bound_primal = 0.0, bound_mult = 0.0;
  double primal_mult_term = 0.0;  // the multiplier-dependent summand of bound_primal
  double angle_RRt = 0.0;
  bool angle_vacuous = false;
  bool pass_global_formula = false, pass_global_true = false;
  bool pass_primal = false, pass_mult = false;
  // Constants the bounds were evaluated with: norms on the fine spaces,
  // inf-sup constants from the coarse certificate.
  double norm_a = 0.0, norm_b = 0.0, norm_d = 0.0, norm_c = 0.0;
  double alpha = 0.0, beta = 0.0, delta = 0.0;
  double gamma_formula = 0.0, gamma_true = 0.0;
  Tolerances tol;

  bool all_pass() const {
    return pass_global_formula && pass_global_true && pass_primal && pass_mult;
  }
};

/// One bound verdict: err <= bound up to the check slack.
inline bool bound_holds(double err, double bound, double check_tol) {
  return err <= bound + check_tol * std::max(1.0, bound);
}

/// Recompute the four pass flags from the stored errors and bounds. This is
/// the single verdict path; certify_bounds ends with it.
inline void revalidate_flags(ErrorCertificate& c) {
  c.pass_global_formula = bound_holds(c.err_global, c.bound_global_formula, c.tol.check_tol);
  c.pass_global_true = bound_holds(c.err_global, c.bound_global_true, c.tol.check_tol);
  c.pass_primal = bound_holds(c.err_primal, c.bound_primal, c.tol.check_tol);
  c.pass_mult = bound_holds(c.err_mult, c.bound_mult, c.tol.check_tol);
}

/// Solve the fine problem, restrict the load to the coarse test spaces and
/// solve there, then certify the global and the refined per-unknown error
/// bounds. Norms of a, b, d are taken on the fine spaces; alpha, beta,
/// delta come from the coarse certificate.
inline ErrorCertificate certify_bounds(const ConformingPair& pair, const LoadFunctional& fine_load,
                                       Tolerances tol = {}) {
  StabilityCertificate coarse_cert = certify(pair.coarse, tol);
  if (!coarse_cert.certified) {
    std::string why = "coarse system is not certified:";
    for (const auto& r : coarse_cert.reasons) why += " [" + r + "]";
    throw UncertifiedCoarseSystem(why);
  }
  if (coarse_cert.alpha_vacuous) {
    throw DegenerateConstants(
        "refined error bounds need a nonempty coarse kernel R (alpha is vacuous)");
  }

  Solution fine_sol;
  try {
    fine_sol = solve(pair.fine, fine_load, tol.rank_tol);
  } catch (const SingularSystem& e) {
    throw SingularFineSystem(e.what());
  }
  LoadFunctional coarse_load{pair.emb.Q.transpose() * fine_load.g_q,
                             pair.emb.V.transpose() * fine_load.g_v};
  Solution coarse_sol = solve(pair.coarse, coarse_load, tol.rank_tol);

  ErrorCertificate cert;
  cert.tol = tol;

  const Matrix& gp = pair.fine.P->gram();
  const Matrix& gu = pair.fine.U->gram();
  Vector diff_p = fine_sol.p - pair.emb.P * coarse_sol.p;
  Vector diff_u = fine_sol.u - pair.emb.U * coarse_sol.u;
  cert.err_primal = pair.fine.P->norm(diff_p);
  cert.err_mult = pair.fine.U->norm(diff_u);
  cert.err_global = std::hypot(cert.err_primal, cert.err_mult);

  cert.best_primal = best_approx_error(fine_sol.p, pair.emb.P, gp);
  cert.best_mult = best_approx_error(fine_sol.u, pair.emb.U, gu);
  cert.best_global = std::hypot(cert.best_primal, cert.best_mult);

  cert.norm_a = operator_norm(pair.fine.a);
  cert.norm_b = operator_norm(pair.fine.b);
  cert.norm_d = operator_norm(pair.fine.d);
  cert.norm_c = std::max({cert.norm_a, cert.norm_b, cert.norm_d});

  cert.alpha = coarse_cert.alpha;
  cert.beta = coarse_cert.beta;
  cert.delta = coarse_cert.delta;
  cert.gamma_true = coarse_cert.gamma_true;
  cert.gamma_formula =
      gamma_asymmetric(cert.alpha, cert.beta, cert.delta, cert.norm_a).gamma;

  ExtremalValue angle = kernel_angle(pair, tol.rank_tol);
  cert.angle_RRt = angle.value;
  cert.angle_vacuous = angle.vacuous;

  cert.bound_global_formula = cert.norm_c / cert.gamma_formula * cert.best_global;
  cert.bound_global_true = cert.norm_c / cert.gamma_true * cert.best_global;
  cert.primal_mult_term = cert.norm_b / cert.alpha * cert.angle_RRt * cert.best_mult;
  cert.bound_primal =
      cert.norm_a * cert.norm_d / (cert.alpha * cert.delta) * cert.best_primal +
      cert.primal_mult_term;
  cert.bound_mult =
      cert.norm_a * cert.norm_a * cert.norm_d / (cert.alpha * cert.beta * cert.delta) *
          cert.best_primal +
      cert.norm_b / cert.beta * (1.0 + cert.norm_a / cert.alpha * cert.angle_RRt) *
          cert.best_mult;

  revalidate_flags(cert);
  return cert;
}

}  // namespace infsup
