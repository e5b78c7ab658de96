#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include <infsup/infsup.hpp>

#include "test_helpers.hpp"

using namespace infsup;
using Catch::Approx;
using testutil::golden_system;
using testutil::with_forms;

TEST_CASE("assembled block operator", "[saddle]") {
  SECTION("golden system") {
    Matrix c = assemble(golden_system()).mat;
    Matrix expected(3, 3);
    expected << 1, 0, 0, 0, 1, 1, 0, 1, 0;
    REQUIRE((c - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
  SECTION("zero forms assemble to zero") {
    SaddleSystem sys = with_forms(golden_system(), Matrix::Zero(2, 2), Matrix::Zero(2, 1),
                                  Matrix::Zero(1, 2));
    REQUIRE(assemble(sys).mat.cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("zero b and d leave a singular block row") {
    SaddleSystem sys = with_forms(golden_system(), Matrix::Identity(2, 2), Matrix::Zero(2, 1),
                                  Matrix::Zero(1, 2));
    REQUIRE(gamma_true(sys) == Approx(0.0).margin(1e-14));
  }
  SECTION("dimension guards") {
    SpacePtr p = euclidean_space(2), q = euclidean_space(2);
    SpacePtr u = euclidean_space(1), v = euclidean_space(2);
    REQUIRE_THROWS_AS(SaddleSystem(p, q, u, v, BilinearForm(p, q, Matrix::Identity(2, 2)),
                                   BilinearForm(u, q, Matrix::Zero(2, 1)),
                                   BilinearForm(p, v, Matrix::Zero(2, 2))),
                      DimensionMismatch);
  }
}

TEST_CASE("optimal weak-coercivity constant", "[saddle]") {
  SECTION("golden system hits the golden ratio") {
    REQUIRE(gamma_true(golden_system()) ==
            Approx(0.61803398874989485).epsilon(1e-12));
  }
  SECTION("permutation assembly is an isometry") {
    Matrix ma(2, 2);
    ma << 1, 0, 0, 0;
    Matrix mb(2, 1);
    mb << 0, 1;
    Matrix md(1, 2);
    md << 0, 1;
    SaddleSystem sys = with_forms(golden_system(), ma, mb, md);
    REQUIRE(gamma_true(sys) == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("solving the discrete problem", "[saddle]") {
  SaddleSystem sys = golden_system();
  SECTION("zero load gives the zero solution") {
    Solution s = solve(sys, LoadFunctional{Vector::Zero(2), Vector::Zero(1)});
    REQUIRE(s.p.norm() == 0.0);
    REQUIRE(s.u.norm() == 0.0);
  }
  SECTION("golden right-hand side") {
    Vector gq(2), gv(1);
    gq << 1, 1;
    gv << 1;
    Solution s = solve(sys, LoadFunctional{gq, gv});
    REQUIRE(s.p(0) == Approx(1.0));
    REQUIRE(s.p(1) == Approx(1.0));
    REQUIRE(s.u(0) == Approx(0.0).margin(1e-14));
  }
  SECTION("random systems satisfy the residual and stability estimates") {
    for (int c = 0; c < 25; ++c) {
      GeneratorSpec spec;
      spec.seed = 9900 + c;
      spec.n_u = 1 + c % 4;
      spec.n_p = spec.n_u + c % 3;
      spec.k_kernel = spec.n_p - spec.n_u;
      SaddleSystem rs = gen_random(spec);
      Rng rng(111 + c);
      LoadFunctional f{rng.normal_vector(rs.Q->dim()), rng.normal_vector(rs.V->dim())};
      Solution s = solve(rs, f);
      // Residual assembled from raw form arithmetic, then whitened.
      Vector rq = rs.a.mat * s.p + rs.b.mat * s.u - f.g_q;
      Vector rv = rs.d.mat * s.p - f.g_v;
      Vector rw(rs.dim_z());
      rw.head(rs.Q->dim()) =
          rs.Q->cholesky().triangularView<Eigen::Lower>().solve(rq);
      rw.tail(rs.V->dim()) =
          rs.V->cholesky().triangularView<Eigen::Lower>().solve(rv);
      const double fnorm = whitened_load(rs, f).norm();
      REQUIRE(rw.norm() <= 1e-10 * fnorm);
      // Stability: ||sol||_W <= gamma_true^{-1} ||f||_{Z'}.
      const double sol_norm = std::hypot(rs.P->norm(s.p), rs.U->norm(s.u));
      REQUIRE(sol_norm <= fnorm / gamma_true(rs) + 1e-10);
    }
  }
  SECTION("singular systems are refused") {
    SaddleSystem sing = with_forms(golden_system(), Matrix::Identity(2, 2), Matrix::Zero(2, 1),
                                   Matrix::Zero(1, 2));
    REQUIRE_THROWS_AS(solve(sing, LoadFunctional{Vector::Zero(2), Vector::Zero(1)}),
                      SingularSystem);
  }
}

TEST_CASE("stability certification", "[saddle]") {
  SECTION("golden system certificate") {
    StabilityCertificate cert = certify(golden_system());
    REQUIRE(cert.certified);
    REQUIRE(cert.reasons.empty());
    REQUIRE(cert.alpha == Approx(1.0));
    REQUIRE(cert.beta == Approx(1.0));
    REQUIRE(cert.delta == Approx(1.0));
    REQUIRE(cert.norm_a == Approx(1.0));
    REQUIRE(cert.norm_c == Approx(1.0));
    REQUIRE(cert.dim_R == 1);
    REQUIRE(cert.dim_S == 1);
    REQUIRE(cert.dim_M == 1);
    REQUIRE(cert.dim_N == 1);
    REQUIRE(cert.nu.has_value());
    REQUIRE(*cert.nu == Approx(0.44721359549995794).epsilon(1e-12));
    REQUIRE(*cert.gamma == Approx(0.25422886790691549).epsilon(1e-12));
    REQUIRE(cert.gamma_true == Approx(0.61803398874989485).epsilon(1e-9));
    REQUIRE(*cert.gamma <= cert.gamma_true);
  }
  SECTION("zero b fails the second inf-sup condition") {
    SaddleSystem sys = with_forms(golden_system(), Matrix::Identity(2, 2), Matrix::Zero(2, 1),
                                  (Matrix(1, 2) << 0, 1).finished());
    StabilityCertificate cert = certify(sys);
    REQUIRE_FALSE(cert.certified);
    REQUIRE(std::find(cert.reasons.begin(), cert.reasons.end(), kReasonSecondInfSup) !=
            cert.reasons.end());
  }
  SECTION("mismatched kernel dimensions are reported") {
    SpacePtr p = euclidean_space(3, "P"), q = euclidean_space(3, "Q");
    SpacePtr u = euclidean_space(2, "U"), v = euclidean_space(2, "V");
    Matrix md = Matrix::Zero(2, 3);
    md(0, 0) = 1.0;  // rank 1, so dim R = 2
    Matrix mb = Matrix::Zero(3, 2);
    mb(0, 0) = 1.0;
    mb(1, 1) = 1.0;  // rank 2, so dim S = 1
    SaddleSystem sys(p, q, u, v, BilinearForm(p, q, Matrix::Identity(3, 3)),
                     BilinearForm(u, q, mb), BilinearForm(p, v, md));
    StabilityCertificate cert = certify(sys);
    REQUIRE(cert.dim_R == 2);
    REQUIRE(cert.dim_S == 1);
    REQUIRE_FALSE(cert.certified);
    REQUIRE(std::find(cert.reasons.begin(), cert.reasons.end(), kReasonDimMismatch) !=
            cert.reasons.end());
  }
  SECTION("norm consistency on random argument pairs") {
    SaddleSystem sys = gen_random([] {
      GeneratorSpec s;
      s.seed = 2024;
      s.n_p = 5;
      s.n_u = 3;
      s.k_kernel = 2;
      return s;
    }());
    StabilityCertificate cert = certify(sys);
    REQUIRE(cert.norm_c == Approx(std::max({cert.norm_a, cert.norm_b, cert.norm_d})));
    Rng rng(555);
    for (int i = 0; i < 1000; ++i) {
      Vector p = rng.normal_vector(5), u = rng.normal_vector(3);
      Vector q = rng.normal_vector(5), v = rng.normal_vector(3);
      const double value = sys.a(p, q) + sys.b(u, q) + sys.d(p, v);
      const double wnorm = std::hypot(sys.P->norm(p), sys.U->norm(u));
      const double znorm = std::hypot(sys.Q->norm(q), sys.V->norm(v));
      REQUIRE(value <= cert.norm_c * wnorm * znorm + 1e-12);
    }
  }
  SECTION("all constants scale linearly with the forms") {
    GeneratorSpec spec;
    spec.seed = 31337;
    spec.n_p = 6;
    spec.n_u = 2;
    spec.k_kernel = 4;
    SaddleSystem sys = gen_random(spec);
    StabilityCertificate base = certify(sys);
    for (double t : {2.0, 0.5}) {
      SaddleSystem scaled =
          with_forms(sys, t * sys.a.mat, t * sys.b.mat, t * sys.d.mat);
      StabilityCertificate got = certify(scaled);
      REQUIRE(got.alpha == Approx(t * base.alpha).epsilon(1e-12));
      REQUIRE(got.beta == Approx(t * base.beta).epsilon(1e-12));
      REQUIRE(got.delta == Approx(t * base.delta).epsilon(1e-12));
      REQUIRE(got.norm_a == Approx(t * base.norm_a).epsilon(1e-12));
      REQUIRE(*got.gamma == Approx(t * *base.gamma).epsilon(1e-12));
      REQUIRE(got.gamma_true == Approx(t * base.gamma_true).epsilon(1e-12));
      REQUIRE(got.certified);
    }
  }
}
