#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infsup/constants.hpp"

namespace infsup {

/// The asymmetric saddle-point data: four spaces with dim P = dim Q and
/// dim U = dim V, and the three forms of
/// c((p;u),(q;v)) = a(p,q) + b(u,q) + d(p,v).
/// Trial pairs live in W = P x U, test pairs in Z = Q x V, both with the
/// product norm ||(x;y)||^2 = ||x||^2 + ||y||^2.
struct SaddleSystem {
  SpacePtr P, Q, U, V;
  BilinearForm a;  // on P x Q
  BilinearForm b;  // on U x Q
  BilinearForm d;  // on P x V

  SaddleSystem(SpacePtr p, SpacePtr q, SpacePtr u, SpacePtr v, BilinearForm a_, BilinearForm b_,
               BilinearForm d_)
      : P(std::move(p)),
        Q(std::move(q)),
        U(std::move(u)),
        V(std::move(v)),
        a(std::move(a_)),
        b(std::move(b_)),
        d(std::move(d_)) {
    if (P->dim() != Q->dim() || U->dim() != V->dim()) {
      throw DimensionMismatch("saddle system needs dim P = dim Q and dim U = dim V");
    }
    if (a.left != P || a.right != Q || b.left != U || b.right != Q || d.left != P ||
        d.right != V) {
      throw DimensionMismatch("form space references are inconsistent with the system spaces");
    }
  }

  Index dim_w() const { return P->dim() + U->dim(); }
  Index dim_z() const { return Q->dim() + V->dim(); }
};

/// Right-hand side F((q;v)) = q_coef^T g_q + v_coef^T g_v.
struct LoadFunctional {
  Vector g_q;
  Vector g_v;
};

/// Whitened block operator of the full form c, [[A, B], [D, 0]], square of
/// size dim Q + dim V. Its singular values are the extremal quotients of c
/// under the product norms.
inline WhitenedOperator assemble(const SaddleSystem& sys) {
  Matrix ah = whiten(sys.a).mat;
  Matrix bh = whiten(sys.b).mat;
  Matrix dh = whiten(sys.d).mat;
  const Index nq = sys.Q->dim(), nv = sys.V->dim(), np = sys.P->dim(), nu = sys.U->dim();
  Matrix c = Matrix::Zero(nq + nv, np + nu);
  c.topLeftCorner(nq, np) = ah;
  c.topRightCorner(nq, nu) = bh;
  c.bottomLeftCorner(nv, np) = dh;
  return WhitenedOperator{std::move(c)};
}

/// The optimal weak-coercivity constant of c: sigma_min of the assembled
/// whitened block operator.
inline double gamma_true(const SaddleSystem& sys) {
  Vector sigma = detail::singular_values(assemble(sys).mat);
  return detail::kth_singular_value(sigma, sys.dim_w());
}

struct Solution {
  Vector p;
  Vector u;
};

/// Whitened load coordinates [L_Q^{-1} g_q; L_V^{-1} g_v]; the Euclidean
/// norm of this vector is the dual norm of the functional.
inline Vector whitened_load(const SaddleSystem& sys, const LoadFunctional& f) {
  if (f.g_q.size() != sys.Q->dim() || f.g_v.size() != sys.V->dim()) {
    throw DimensionMismatch("load vector lengths do not match the test spaces");
  }
  Vector fh(sys.dim_z());
  fh.head(sys.Q->dim()) =
      sys.Q->cholesky().template triangularView<Eigen::Lower>().solve(f.g_q);
  fh.tail(sys.V->dim()) =
      sys.V->cholesky().template triangularView<Eigen::Lower>().solve(f.g_v);
  return fh;
}

/// Solve c((p;u),(q;v)) = F((q;v)) for all test pairs.
inline Solution solve(const SaddleSystem& sys, const LoadFunctional& f,
                      double rank_tol = kDefaultRankTol) {
  Matrix c = assemble(sys).mat;
  Eigen::BDCSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  double smax = sigma.size() ? sigma(0) : 0.0;
  double smin = sigma.size() ? sigma(sigma.size() - 1) : 0.0;
  if (smin <= rank_tol * smax || smax == 0.0) {
    throw SingularSystem("assembled operator is numerically singular");
  }
  Vector fh = whitened_load(sys, f);
  Vector xh = svd.solve(fh);
  Solution out;
  out.p = sys.P->unwhiten(xh.head(sys.P->dim()));
  out.u = sys.U->unwhiten(xh.tail(sys.U->dim()));
  return out;
}

/// Machine-checkable stability report for one system: continuity norms,
/// kernel dimensions, the three inf-sup constants, the closed-form
/// weak-coercivity constant and the optimal one, and a verdict with
/// human-readable reasons on failure.
struct StabilityCertificate {
  double norm_a = 0.0, norm_b = 0.0, norm_d = 0.0, norm_c = 0.0;
  Index dim_R = 0, dim_S = 0, dim_M = 0, dim_N = 0;
  double alpha = 0.0;
  bool alpha_vacuous = false;
  double beta = 0.0;
  double delta = 0.0;
  std::optional<double> nu;
  std::optional<double> gamma;
  double gamma_true = 0.0;
  bool dim_match_RS = false;
  bool certified = false;
  std::vector<std::string> reasons;
  Tolerances tol;
};

inline constexpr const char* kReasonDimMismatch = "dim R != dim S";
inline constexpr const char* kReasonFirstInfSup = "first inf-sup fails";
inline constexpr const char* kReasonSecondInfSup = "second inf-sup fails";
inline constexpr const char* kReasonThirdInfSup = "third inf-sup fails";
inline constexpr const char* kReasonGammaExceeds = "gamma exceeds gamma_true";

/// Run the full stability analysis. Mathematical failures (a failed
/// hypothesis, a zero inf-sup constant) are reported as data, never thrown;
/// only malformed input throws.
inline StabilityCertificate certify(const SaddleSystem& sys, Tolerances tol = {}) {
  StabilityCertificate cert;
  cert.tol = tol;
  cert.norm_a = operator_norm(sys.a);
  cert.norm_b = operator_norm(sys.b);
  cert.norm_d = operator_norm(sys.d);
  cert.norm_c = std::max({cert.norm_a, cert.norm_b, cert.norm_d});

  Subspace r = kernel(sys.d, KernelSide::Left, tol.rank_tol);
  Subspace s = kernel(sys.b, KernelSide::Right, tol.rank_tol);
  cert.dim_R = r.k();
  cert.dim_S = s.k();
  cert.dim_M = orth_complement(r).k();
  cert.dim_N = orth_complement(s).k();
  cert.dim_match_RS = cert.dim_R == cert.dim_S;

  InfSupResult alpha = inf_sup(sys.a, r, s);
  InfSupResult beta = inf_sup(sys.b, Subspace::full(sys.U), Subspace::full(sys.Q));
  InfSupResult delta = inf_sup(transposed(sys.d), Subspace::full(sys.V), Subspace::full(sys.P));
  cert.alpha_vacuous = alpha.vacuous;
  cert.alpha = alpha.vacuous ? 0.0 : alpha.value;
  cert.beta = beta.value;
  cert.delta = delta.value;
  cert.gamma_true = gamma_true(sys);

  if (!cert.dim_match_RS) cert.reasons.push_back(kReasonDimMismatch);
  const bool alpha_ok = alpha.vacuous || alpha.positive(tol.rank_tol);
  const bool beta_ok = beta.positive(tol.rank_tol);
  const bool delta_ok = delta.positive(tol.rank_tol);
  if (!alpha_ok) cert.reasons.push_back(kReasonFirstInfSup);
  if (!beta_ok) cert.reasons.push_back(kReasonSecondInfSup);
  if (!delta_ok) cert.reasons.push_back(kReasonThirdInfSup);

  if (alpha_ok && beta_ok && delta_ok) {
    std::optional<double> alpha_opt;
    if (!alpha.vacuous) alpha_opt = alpha.value;
    GammaBreakdown g = gamma_asymmetric(alpha_opt, beta.value, delta.value, cert.norm_a);
    cert.nu = g.nu;
    cert.gamma = g.gamma;
    if (!(g.gamma <= cert.gamma_true + 1e-12 * std::max(1.0, cert.gamma_true))) {
      cert.reasons.push_back(kReasonGammaExceeds);
    }
  }
  cert.certified = cert.reasons.empty();
  return cert;
}

}  // namespace infsup
