#include <catch2/catch_amalgamated.hpp>

#include <infsup/infsup.hpp>

using namespace infsup;

TEST_CASE("property suites pass on a fresh build", "[selftest]") {
  SelftestOptions opt;
  opt.dupire_count = 2000;
  opt.soundness_count = 20;
  std::vector<SuiteResult> results = run_selftest(opt);
  REQUIRE(results.size() == 5);
  for (const auto& r : results) {
    INFO(r.name);
    REQUIRE(r.ok());
    REQUIRE(r.total > 0);
  }
}

TEST_CASE("suites are deterministic in the seed", "[selftest]") {
  SelftestOptions opt;
  opt.dupire_count = 500;
  opt.soundness_count = 5;
  opt.conorm_count = 20;
  opt.adjoint_count = 20;
  opt.symmetric_count = 20;
  std::vector<SuiteResult> a = run_selftest(opt);
  std::vector<SuiteResult> b = run_selftest(opt);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].name == b[i].name);
    REQUIRE(a[i].passed == b[i].passed);
    REQUIRE(a[i].total == b[i].total);
  }
}

TEST_CASE("an injected wrong gamma is caught by the soundness suite", "[selftest]") {
  SelftestOptions opt;
  opt.dupire_count = 100;
  opt.soundness_count = 10;
  opt.conorm_count = 5;
  opt.adjoint_count = 5;
  opt.symmetric_count = 5;
  opt.gamma_skew = 1e6;
  std::vector<SuiteResult> results = run_selftest(opt);
  bool found = false;
  for (const auto& r : results) {
    if (r.name == "gamma soundness") {
      found = true;
      REQUIRE_FALSE(r.ok());
      REQUIRE(r.failing_seed != 0);
    } else {
      REQUIRE(r.ok());
    }
  }
  REQUIRE(found);
}
