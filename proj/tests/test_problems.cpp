#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <infsup/infsup.hpp>

#include "test_helpers.hpp"

using namespace infsup;
using Catch::Approx;

TEST_CASE("random certified systems", "[problems]") {
  SECTION("prescribed kernel dimensions, certified by construction") {
    GeneratorSpec spec;
    spec.seed = 42;
    spec.n_p = 4;
    spec.n_u = 2;
    spec.k_kernel = 2;
    SaddleSystem sys = gen_random(spec);
    StabilityCertificate cert = certify(sys);
    REQUIRE(cert.dim_R == 2);
    REQUIRE(cert.dim_S == 2);
    REQUIRE(cert.certified);
    REQUIRE_FALSE(cert.alpha_vacuous);
  }
  SECTION("square case exercises the vacuous alpha path") {
    GeneratorSpec spec;
    spec.seed = 7;
    spec.n_p = 3;
    spec.n_u = 3;
    spec.k_kernel = 0;
    SaddleSystem sys = gen_random(spec);
    StabilityCertificate cert = certify(sys);
    REQUIRE(cert.dim_R == 0);
    REQUIRE(cert.dim_S == 0);
    REQUIRE(cert.alpha_vacuous);
    REQUIRE(cert.certified);
    REQUIRE(cert.nu.has_value());
    REQUIRE(*cert.nu == Approx(cert.delta).epsilon(1e-12));
  }
  SECTION("same seed reproduces identical matrices") {
    GeneratorSpec spec;
    spec.seed = 12345;
    spec.n_p = 5;
    spec.n_u = 2;
    spec.k_kernel = 3;
    SaddleSystem s1 = gen_random(spec);
    SaddleSystem s2 = gen_random(spec);
    REQUIRE(testutil::exact_equal(s1.a.mat, s2.a.mat));
    REQUIRE(testutil::exact_equal(s1.b.mat, s2.b.mat));
    REQUIRE(testutil::exact_equal(s1.d.mat, s2.d.mat));
    REQUIRE(testutil::exact_equal(s1.P->gram(), s2.P->gram()));
  }
  SECTION("infeasible dimensions are rejected") {
    GeneratorSpec spec;
    spec.n_p = 4;
    spec.n_u = 2;
    spec.k_kernel = 1;  // must be n_p - n_u
    REQUIRE_THROWS_AS(gen_random(spec), InfeasibleDims);
    spec.n_u = 5;
    spec.k_kernel = 0;
    REQUIRE_THROWS_AS(gen_random(spec), InfeasibleDims);
  }
}

TEST_CASE("one-dimensional mixed discretization", "[problems]") {
  SECTION("coarse difference structure at n = 2") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::poisson1d;
    spec.n_coarse = 2;
    spec.n_fine = 4;
    ConformingPair pair = gen_poisson1d(spec);
    Matrix expected(2, 3);
    expected << -1, 1, 0, 0, -1, 1;
    REQUIRE((pair.coarse.d.mat - expected).cwiseAbs().maxCoeff() < 1e-12);
    Subspace ker = kernel(pair.coarse.d, KernelSide::Left);
    REQUIRE(ker.k() == 1);
    // The kernel is the constant flux.
    Vector b = ker.basis().col(0);
    REQUIRE((b.array() - b(0)).abs().maxCoeff() < 1e-12);
  }
  SECTION("symmetric case: a symmetric, b the transpose of d") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::poisson1d;
    spec.n_coarse = 8;
    spec.n_fine = 16;
    ConformingPair pair = gen_poisson1d(spec);
    REQUIRE((pair.coarse.a.mat - pair.coarse.a.mat.transpose()).cwiseAbs().maxCoeff() <
            1e-12);
    REQUIRE((pair.coarse.b.mat - pair.coarse.d.mat.transpose()).cwiseAbs().maxCoeff() <
            1e-12);
    StabilityCertificate cert = certify(pair.coarse);
    REQUIRE(cert.certified);
    REQUIRE(cert.beta == Approx(cert.delta).epsilon(1e-10));
    SymmetricGamma sym = gamma_symmetric(cert.alpha, cert.beta, cert.norm_a);
    REQUIRE(*cert.gamma == Approx(sym.gamma).epsilon(1e-10));
    REQUIRE(sym.gamma < sym.gamma_bar);
  }
  SECTION("kernel of d is one-dimensional at every level") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::poisson1d;
    spec.n_coarse = 4;
    spec.n_fine = 32;
    spec.epsilon = 0.2;
    ConformingPair pair = gen_poisson1d(spec);
    REQUIRE(kernel(pair.coarse.d, KernelSide::Left).k() == 1);
    REQUIRE(kernel(pair.fine.d, KernelSide::Left).k() == 1);
  }
  SECTION("perturbed test space stays certified with a nearby gamma_true") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::poisson1d;
    spec.n_coarse = 8;
    spec.n_fine = 16;
    ConformingPair sym_pair = gen_poisson1d(spec);
    spec.epsilon = 0.1;
    ConformingPair asym_pair = gen_poisson1d(spec);
    Matrix a = asym_pair.coarse.a.mat;
    REQUIRE((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-6);
    StabilityCertificate cert = certify(asym_pair.coarse);
    REQUIRE(cert.certified);
    const double g0 = gamma_true(sym_pair.coarse);
    const double g1 = gamma_true(asym_pair.coarse);
    REQUIRE(std::abs(g1 - g0) <= 0.25 * g0);
  }
  SECTION("guards") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::poisson1d;
    spec.n_coarse = 1;
    spec.n_fine = 1;
    REQUIRE_THROWS_AS(gen_poisson1d(spec), InfeasibleDims);
    spec.n_coarse = 4;
    spec.n_fine = 6;  // not a multiple
    REQUIRE_THROWS_AS(gen_poisson1d(spec), InfeasibleDims);
    spec.n_fine = 8;
    spec.epsilon = 0.6;
    REQUIRE_THROWS_AS(gen_poisson1d(spec), InfeasibleDims);
  }
}

TEST_CASE("manufactured loads", "[problems]") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::poisson1d;
  spec.n_coarse = 4;
  spec.n_fine = 16;
  ConformingPair pair = gen_poisson1d(spec);
  SECTION("polynomial profile integrates to one sixth") {
    LoadFunctional load = manufactured_load(pair, LoadProfile::poly);
    REQUIRE(load.g_q.cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(load.g_v.sum() == Approx(1.0 / 6.0).epsilon(1e-14));
  }
  SECTION("sine profile integrates to two over pi") {
    LoadFunctional load = manufactured_load(pair, LoadProfile::sine);
    REQUIRE(load.g_v.sum() == Approx(2.0 / M_PI).epsilon(1e-14));
  }
  SECTION("unknown profile is rejected") {
    REQUIRE_THROWS_AS(manufactured_load(pair, static_cast<LoadProfile>(99)),
                      UnsupportedProfile);
  }
}
