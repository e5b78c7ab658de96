#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "infsup/bounds.hpp"
#include "infsup/random.hpp"
#include "infsup/saddle.hpp"

namespace infsup {

enum class GeneratorKind { random, poisson1d };
enum class LoadProfile { sine, poly };

/// Serializable description of a generated test problem.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::random;
  std::uint64_t seed = 0;

  // random systems: dim P = dim Q = n_p, dim U = dim V = n_u; certifiability
  // forces dim Ker(D) = dim Ker(B*) = n_p - n_u, so k_kernel must equal it.
  Index n_p = 4;
  Index n_u = 2;
  Index k_kernel = 2;
  double form_sigma_lo = 0.4;
  double form_sigma_hi = 2.0;
  double gram_lambda_lo = 0.5;
  double gram_lambda_hi = 2.0;

  // poisson1d pairs: coarse/fine cell counts on (0,1) and the test-space
  // perturbation strength.
  Index n_coarse = 8;
  Index n_fine = 64;
  double epsilon = 0.0;
};

/// Deterministic random system satisfying the stability hypotheses by
/// construction: the whitened b and d factors carry prescribed singular
/// spectra bounded away from zero, and a is corrected on Ker(D) x Ker(B*)
/// to a prescribed positive spectrum.
inline SaddleSystem gen_random(const GeneratorSpec& spec) {
  const Index n = spec.n_p, m = spec.n_u, k = spec.k_kernel;
  if (n < 1 || m < 1 || m > n) {
    throw InfeasibleDims("random system needs 1 <= n_U <= n_P");
  }
  if (k != n - m) {
    throw InfeasibleDims(
        "k_kernel must equal n_P - n_U (full-rank b and d force dim R = dim S = n_P - n_U)");
  }
  Rng rng(spec.seed);
  const double glo = spec.gram_lambda_lo, ghi = spec.gram_lambda_hi;
  const double flo = spec.form_sigma_lo, fhi = spec.form_sigma_hi;
  if (!(glo > 0.0) || ghi < glo || !(flo > 0.0) || fhi < flo) {
    throw InfeasibleDims("spectrum ranges must be positive and ordered");
  }
  SpacePtr p = make_space(rng.spd(n, glo, ghi), "P");
  SpacePtr q = make_space(rng.spd(n, glo, ghi), "Q");
  SpacePtr u = make_space(rng.spd(m, glo, ghi), "U");
  SpacePtr v = make_space(rng.spd(m, glo, ghi), "V");

  Matrix ub = rng.orthonormal(n, m);
  Matrix vb = rng.orthonormal(m, m);
  Matrix bh = ub * rng.uniform_vector(m, flo, fhi).asDiagonal() * vb.transpose();

  Matrix ud = rng.orthonormal(m, m);
  Matrix vd = rng.orthonormal(n, m);
  Matrix dh = ud * rng.uniform_vector(m, flo, fhi).asDiagonal() * vd.transpose();

  Matrix ah = 0.3 * rng.normal_matrix(n, n);
  if (k > 0) {
    // Bases of Ker(D) and Ker(B*) in whitened coordinates.
    Matrix rker = detail::euclidean_complement(vd, n);
    Matrix sker = detail::euclidean_complement(ub, n);
    Matrix target = Matrix::Zero(k, k);
    target.diagonal() = rng.uniform_vector(k, flo, fhi);
    ah += sker * (target - sker.transpose() * ah * rker) * rker.transpose();
  }

  Matrix mat_a = q->cholesky() * ah * p->cholesky().transpose();
  Matrix mat_b = q->cholesky() * bh * u->cholesky().transpose();
  Matrix mat_d = v->cholesky() * dh * p->cholesky().transpose();
  return SaddleSystem(p, q, u, v, BilinearForm(p, q, std::move(mat_a)),
                      BilinearForm(u, q, std::move(mat_b)),
                      BilinearForm(p, v, std::move(mat_d)));
}

namespace detail {

/// Mass matrix of continuous piecewise linears on n uniform cells of (0,1).
inline Matrix pwl_mass(Index n) {
  const double h = 1.0 / static_cast<double>(n);
  Matrix m = Matrix::Zero(n + 1, n + 1);
  for (Index c = 0; c < n; ++c) {
    m(c, c) += h / 3.0;
    m(c + 1, c + 1) += h / 3.0;
    m(c, c + 1) += h / 6.0;
    m(c + 1, c) += h / 6.0;
  }
  return m;
}

/// Cell averages of the derivative: (n x (n+1)), row i = (-1, +1)/h.
inline Matrix pwl_deriv(Index n) {
  const double h = 1.0 / static_cast<double>(n);
  Matrix d = Matrix::Zero(n, n + 1);
  for (Index i = 0; i < n; ++i) {
    d(i, i) = -1.0 / h;
    d(i, i + 1) = 1.0 / h;
  }
  return d;
}

/// Nodal values of the coarse hat functions at the fine nodes.
inline Matrix hat_interpolation(Index n_coarse, Index ratio) {
  const Index n_fine = n_coarse * ratio;
  Matrix w = Matrix::Zero(n_fine + 1, n_coarse + 1);
  for (Index j = 0; j <= n_fine; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(n_fine);
    const double t = x * static_cast<double>(n_coarse);
    const Index cell = std::min<Index>(static_cast<Index>(t), n_coarse - 1);
    const double local = t - static_cast<double>(cell);
    w(j, cell) += 1.0 - local;
    w(j, cell + 1) += local;
  }
  return w;
}

/// Coarse indicator functions expressed over the fine cells.
inline Matrix indicator_embedding(Index n_coarse, Index ratio) {
  const Index n_fine = n_coarse * ratio;
  Matrix w = Matrix::Zero(n_fine, n_coarse);
  for (Index i = 0; i < n_fine; ++i) w(i, i / ratio) = 1.0;
  return w;
}

/// L2 projections of the per-cell quadratic bubbles of the coarse mesh onto
/// the fine piecewise-linear space. Per-fine-cell Simpson quadrature is
/// exact here (cubic integrands).
inline Matrix bubble_projection(Index n_coarse, Index ratio) {
  const Index n_fine = n_coarse * ratio;
  const double h = 1.0 / static_cast<double>(n_fine);
  const double bigh = 1.0 / static_cast<double>(n_coarse);
  Matrix rhs = Matrix::Zero(n_fine + 1, n_coarse);
  for (Index c = 0; c < n_coarse; ++c) {
    const double xl_cell = static_cast<double>(c) * bigh;
    auto bubble = [&](double x) {
      const double s = x - xl_cell;
      return 4.0 * s * (bigh - s) / (bigh * bigh);
    };
    for (Index s = 0; s < ratio; ++s) {
      const Index fc = c * ratio + s;
      const double xl = static_cast<double>(fc) * h;
      const double xr = xl + h;
      const double xm = 0.5 * (xl + xr);
      auto hat = [&](Index local, double x) {
        return local == 0 ? (xr - x) / h : (x - xl) / h;
      };
      for (Index local = 0; local < 2; ++local) {
        const double integral = h / 6.0 *
                                (bubble(xl) * hat(local, xl) + 4.0 * bubble(xm) * hat(local, xm) +
                                 bubble(xr) * hat(local, xr));
        rhs(fc + local, c) += integral;
      }
    }
  }
  Eigen::LLT<Matrix> llt(pwl_mass(n_fine));
  return llt.solve(rhs);
}

}  // namespace detail

/// 1D mixed-Poisson conforming pair on (0,1): flux spaces are continuous
/// piecewise linears, multiplier spaces are piecewise constants, with
/// a(p,q) = int p q, b(u,q) = int u q', d(p,v) = int p' v and L2 mass
/// matrices as Gram matrices. epsilon > 0 perturbs each test-flux basis
/// function by epsilon times the projected interior bubble of its cell,
/// which makes the a-matrix nonsymmetric while keeping Q inside the fine
/// piecewise-linear space. All integrals are exact.
inline ConformingPair gen_poisson1d(const GeneratorSpec& spec) {
  const Index nc = spec.n_coarse, nf = spec.n_fine;
  if (nc < 2) throw InfeasibleDims("poisson1d needs at least 2 coarse cells");
  if (nf < nc || nf % nc != 0) {
    throw InfeasibleDims("n_fine must be a positive integer multiple of n_coarse");
  }
  if (!(spec.epsilon >= 0.0) || spec.epsilon >= 0.5) {
    throw InfeasibleDims("epsilon must lie in [0, 0.5)");
  }
  const Index ratio = nf / nc;
  const double h = 1.0 / static_cast<double>(nf);

  Matrix mass = detail::pwl_mass(nf);
  Matrix deriv = detail::pwl_deriv(nf);
  Matrix b_real = h * deriv.transpose();  // (nf+1) x nf, entries +-1
  Matrix d_real = h * deriv;              // nf x (nf+1), entries +-1

  // Basis matrices over the fine nodal / fine cell realization.
  Matrix w_p = detail::hat_interpolation(nc, ratio);
  Matrix w_u = detail::indicator_embedding(nc, ratio);
  Matrix w_qc = w_p + spec.epsilon * detail::bubble_projection(nc, ratio);
  Matrix w_qf = Matrix::Identity(nf + 1, nf + 1) + spec.epsilon * detail::bubble_projection(nf, 1);

  auto build = [&](const Matrix& bp, const Matrix& bq, const Matrix& bu, const std::string& tag) {
    SpacePtr sp = make_space(bp.transpose() * mass * bp, "P" + tag);
    SpacePtr sq = make_space(bq.transpose() * mass * bq, "Q" + tag);
    SpacePtr su = make_space(h * bu.transpose() * bu, "U" + tag);
    SpacePtr sv = make_space(h * bu.transpose() * bu, "V" + tag);
    Matrix mat_a = bq.transpose() * mass * bp;
    Matrix mat_b = bq.transpose() * b_real * bu;
    Matrix mat_d = bu.transpose() * d_real * bp;
    return SaddleSystem(sp, sq, su, sv, BilinearForm(sp, sq, std::move(mat_a)),
                        BilinearForm(su, sq, std::move(mat_b)),
                        BilinearForm(sp, sv, std::move(mat_d)));
  };

  Matrix id_nodes = Matrix::Identity(nf + 1, nf + 1);
  Matrix id_cells = Matrix::Identity(nf, nf);
  SaddleSystem fine = build(id_nodes, w_qf, id_cells, "~");
  SaddleSystem coarse = build(w_p, w_qc, w_u, "");

  Embeddings emb;
  emb.P = w_p;
  emb.Q = Eigen::PartialPivLU<Matrix>(w_qf).solve(w_qc);
  emb.U = w_u;
  emb.V = w_u;
  return ConformingPair(std::move(fine), std::move(coarse), std::move(emb));
}

/// Load with F((q;v)) = int f v for f = sin(pi x) or f = x(1-x), integrated
/// exactly against the piecewise-constant test basis; the flux block is zero.
inline LoadFunctional manufactured_load(const ConformingPair& pair, LoadProfile profile) {
  const Index n = pair.fine.V->dim();
  const double h = 1.0 / static_cast<double>(n);
  Matrix expected = h * Matrix::Identity(n, n);
  if ((pair.fine.V->gram() - expected).cwiseAbs().maxCoeff() > 1e-9 * h) {
    throw DimensionMismatch("manufactured_load expects a poisson1d pair");
  }
  Vector g_v(n);
  for (Index i = 0; i < n; ++i) {
    const double xl = static_cast<double>(i) * h;
    const double xr = xl + h;
    switch (profile) {
      case LoadProfile::sine:
        g_v(i) = (std::cos(M_PI * xl) - std::cos(M_PI * xr)) / M_PI;
        break;
      case LoadProfile::poly:
        g_v(i) = (xr * xr / 2.0 - xr * xr * xr / 3.0) - (xl * xl / 2.0 - xl * xl * xl / 3.0);
        break;
      default:
        throw UnsupportedProfile("unknown load profile");
    }
  }
  return LoadFunctional{Vector::Zero(pair.fine.Q->dim()), std::move(g_v)};
}

}  // namespace infsup
