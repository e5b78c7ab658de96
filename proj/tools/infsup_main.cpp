// Command-line front end: certify saddle systems from manifests, certify
// error bounds for conforming pairs, generate test problems, and run the
// built-in property suites.
//
// Exit codes: 0 success / certified, 1 mathematical failure, 2 input or
// usage error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <infsup/infsup.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMathFail = 1;
constexpr int kExitInputError = 2;

struct CommonFlags {
  std::string format = "text";
  std::optional<double> rank_tol;
  std::optional<double> check_tol;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--format", flags->format, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_option("--rank-tol", flags->rank_tol,
                  "Relative singular-value cutoff for numerical ranks");
  cmd->add_option("--check-tol", flags->check_tol,
                  "Slack for certificate and bound verdicts");
}

infsup::Tolerances make_tolerances(const CommonFlags& flags,
                                   const std::optional<infsup::Tolerances>& from_manifest) {
  infsup::Tolerances tol = from_manifest.value_or(infsup::Tolerances{});
  if (flags.rank_tol) tol.rank_tol = *flags.rank_tol;
  if (flags.check_tol) tol.check_tol = *flags.check_tol;
  return tol;
}

int run_certify(const std::string& manifest_path, const CommonFlags& flags) {
  infsup::Manifest manifest = infsup::load_manifest(manifest_path);
  infsup::SaddleSystem sys = infsup::build_system(manifest);
  infsup::Tolerances tol = make_tolerances(flags, manifest.tolerances);
  infsup::StabilityCertificate cert = infsup::certify(sys, tol);
  if (flags.format == "json") {
    std::cout << infsup::to_json(cert).dump(2) << "\n";
  } else {
    infsup::render_text(std::cout, cert);
  }
  return cert.certified ? kExitOk : kExitMathFail;
}

int run_bound(const std::string& coarse_path, const std::string& fine_path,
              const CommonFlags& flags) {
  infsup::Manifest coarse = infsup::load_manifest(coarse_path);
  infsup::Tolerances tol = make_tolerances(flags, coarse.tolerances);
  std::optional<std::filesystem::path> fine_override;
  if (!fine_path.empty()) fine_override = fine_path;
  infsup::ConformingPair pair = infsup::build_pair(coarse, fine_override, tol.check_tol);
  if (!coarse.pair) throw infsup::IoError("coarse manifest has no pair section");
  infsup::Manifest fine_manifest =
      infsup::load_manifest(fine_override ? *fine_override
                                          : coarse.resolve(coarse.pair->fine_manifest_path));
  infsup::LoadFunctional fine_load = infsup::build_load(fine_manifest, pair.fine);

  infsup::ErrorCertificate cert;
  try {
    cert = infsup::certify_bounds(pair, fine_load, tol);
  } catch (const infsup::UncertifiedCoarseSystem& e) {
    std::cerr << "bound check failed: " << e.what() << "\n";
    return kExitMathFail;
  } catch (const infsup::SingularFineSystem& e) {
    std::cerr << "bound check failed: " << e.what() << "\n";
    return kExitMathFail;
  }
  if (flags.format == "json") {
    std::cout << infsup::to_json(cert).dump(2) << "\n";
  } else {
    infsup::render_text(std::cout, cert);
  }
  return cert.all_pass() ? kExitOk : kExitMathFail;
}

int run_generate(const infsup::GeneratorSpec& spec, const std::string& out_dir,
                 infsup::LoadProfile profile) {
  namespace fs = std::filesystem;
  if (spec.kind == infsup::GeneratorKind::poisson1d) {
    infsup::ConformingPair pair = infsup::gen_poisson1d(spec);
    infsup::LoadFunctional load = infsup::manufactured_load(pair, profile);
    fs::path coarse_manifest = infsup::write_pair_dir(out_dir, pair, &load, &spec);
    std::cout << "wrote " << coarse_manifest.string() << "\n";
    std::cout << "wrote " << (fs::path(out_dir) / "fine" / "manifest.json").string() << "\n";
    return kExitOk;
  }
  infsup::SaddleSystem sys = infsup::gen_random(spec);
  // Deterministic companion load so solve-style workflows have a right-hand side.
  infsup::Rng rng(spec.seed ^ 0x10ad5eedULL);
  infsup::LoadFunctional load{rng.normal_vector(sys.Q->dim()), rng.normal_vector(sys.V->dim())};
  fs::path manifest = infsup::write_system_dir(out_dir, sys, &load, &spec);
  std::cout << "wrote " << manifest.string() << "\n";
  return kExitOk;
}

int run_selftest(std::uint64_t seed) {
  infsup::SelftestOptions opt;
  opt.seed = seed;
  std::vector<infsup::SuiteResult> results = infsup::run_selftest(opt);
  bool all_ok = true;
  for (const auto& r : results) {
    std::cout << (r.ok() ? "[pass] " : "[FAIL] ") << r.name << ": " << r.passed << "/" << r.total
              << "\n";
    if (!r.ok()) {
      std::cout << "       reproducer seed: " << r.failing_seed << "\n";
      all_ok = false;
    }
  }
  return all_ok ? kExitOk : kExitMathFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inf-sup stability and error-bound certification for asymmetric saddle-point systems"};
  app.require_subcommand(1);

  CommonFlags certify_flags;
  std::string certify_manifest;
  CLI::App* certify_cmd =
      app.add_subcommand("certify", "Certify the stability of one system from a manifest");
  certify_cmd->add_option("manifest", certify_manifest, "Path to the system manifest")
      ->required();
  add_common_flags(certify_cmd, &certify_flags);

  CommonFlags bound_flags;
  std::string bound_coarse, bound_fine;
  CLI::App* bound_cmd = app.add_subcommand(
      "bound", "Certify the a-priori error bounds of a coarse/fine conforming pair");
  bound_cmd->add_option("coarse", bound_coarse, "Coarse manifest (with a pair section)")
      ->required();
  bound_cmd->add_option("fine", bound_fine,
                        "Fine manifest (defaults to the pair section's fine_manifest_path)");
  add_common_flags(bound_cmd, &bound_flags);

  std::string gen_kind, gen_out, gen_profile = "sine";
  std::uint64_t gen_seed = 0;
  long long gen_n = 8, gen_refine = 8, gen_np = 4, gen_nu = 2;
  double gen_eps = 0.0;
  CLI::App* gen_cmd = app.add_subcommand("generate", "Generate a test problem and write it out");
  gen_cmd->add_option("kind", gen_kind, "Problem family")
      ->check(CLI::IsMember({"random", "poisson1d"}))
      ->required();
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();
  gen_cmd->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--n", gen_n, "poisson1d: coarse cell count")->capture_default_str();
  gen_cmd->add_option("--refine", gen_refine, "poisson1d: fine/coarse refinement ratio")
      ->capture_default_str();
  gen_cmd->add_option("--eps", gen_eps, "poisson1d: test-space perturbation in [0, 0.5)")
      ->capture_default_str();
  gen_cmd->add_option("--profile", gen_profile, "poisson1d: load profile")
      ->check(CLI::IsMember({"sine", "poly"}))
      ->capture_default_str();
  gen_cmd->add_option("--np", gen_np, "random: dim P = dim Q")->capture_default_str();
  gen_cmd->add_option("--nu", gen_nu, "random: dim U = dim V")->capture_default_str();

  std::uint64_t selftest_seed = infsup::SelftestOptions{}.seed;
  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "Run the built-in property suites at reduced counts");
  selftest_cmd->add_option("--seed", selftest_seed, "Base seed for the suites")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (certify_cmd->parsed()) return run_certify(certify_manifest, certify_flags);
    if (bound_cmd->parsed()) return run_bound(bound_coarse, bound_fine, bound_flags);
    if (gen_cmd->parsed()) {
      infsup::GeneratorSpec spec;
      spec.seed = gen_seed;
      if (gen_kind == "poisson1d") {
        spec.kind = infsup::GeneratorKind::poisson1d;
        if (gen_n < 1 || gen_refine < 1) {
          throw infsup::InfeasibleDims("--n and --refine must be positive");
        }
        spec.n_coarse = gen_n;
        spec.n_fine = gen_n * gen_refine;
        spec.epsilon = gen_eps;
      } else {
        spec.kind = infsup::GeneratorKind::random;
        if (gen_np < 1 || gen_nu < 1) throw infsup::InfeasibleDims("--np and --nu must be positive");
        spec.n_p = gen_np;
        spec.n_u = gen_nu;
        spec.k_kernel = gen_np - gen_nu;
      }
      infsup::LoadProfile profile =
          gen_profile == "poly" ? infsup::LoadProfile::poly : infsup::LoadProfile::sine;
      return run_generate(spec, gen_out, profile);
    }
    if (selftest_cmd->parsed()) return run_selftest(selftest_seed);
    std::cerr << "error: no subcommand given\n";
    return kExitInputError;
  } catch (const infsup::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
