// Supplementary command-line checks beyond the acceptance criteria: guard
// paths, determinism of generated files, text output, and the selftest
// subcommand. Takes the CLI binary path as its only argument.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <infsup/infsup.hpp>

#include "cli_helpers.hpp"
#include "test_helpers.hpp"

using namespace infsup;
namespace fs = std::filesystem;
using testutil::quoted;
using testutil::run_command;

namespace {

int g_failures = 0;

void check(bool cond, const std::string& label, const std::string& detail = "") {
  std::cout << (cond ? "[pass] " : "[FAIL] ") << label;
  if (!cond && !detail.empty()) std::cout << " -- " << detail;
  std::cout << "\n";
  if (!cond) ++g_failures;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_contract <path-to-cli-binary>\n";
    return 99;
  }
  const std::string cli = argv[1];
  const fs::path dir = testutil::fresh_temp_dir("cli_contract");

  // Missing manifest: exit 2, message names the path.
  {
    auto r = run_command(quoted(cli) + " certify " + quoted((dir / "nope.json").string()));
    check(r.exit_code == 2, "missing manifest exits 2", r.output);
    check(r.output.find("nope.json") != std::string::npos, "diagnostic names the path",
          r.output);
  }

  // Manifest referencing a missing gram file: exit 2 and the path appears.
  {
    fs::create_directories(dir / "broken");
    std::ofstream(dir / "broken" / "manifest.json") << R"({
      "version": 1,
      "spaces": {
        "P": {"dim": 2, "gram_path": "gram_P.mtx"},
        "Q": {"dim": 2, "gram_path": "gram_P.mtx"},
        "U": {"dim": 1, "gram_path": "gram_U.mtx"},
        "V": {"dim": 1, "gram_path": "gram_U.mtx"}
      },
      "forms": {"a_path": "a.mtx", "b_path": "b.mtx", "d_path": "d.mtx"}
    })";
    auto r = run_command(quoted(cli) + " certify " +
                         quoted((dir / "broken" / "manifest.json").string()));
    check(r.exit_code == 2, "missing gram file exits 2", r.output);
    check(r.output.find("gram_P.mtx") != std::string::npos, "diagnostic names the gram path",
          r.output);
  }

  // Epsilon out of range: exit 2.
  {
    auto r = run_command(quoted(cli) + " generate poisson1d --n 8 --refine 2 --eps 0.6 --out " +
                         quoted((dir / "eps").string()));
    check(r.exit_code == 2, "epsilon out of range exits 2", r.output);
  }

  // Infeasible random dims: exit 2.
  {
    auto r = run_command(quoted(cli) + " generate random --np 2 --nu 5 --out " +
                         quoted((dir / "infeasible").string()));
    check(r.exit_code == 2, "infeasible random dims exit 2", r.output);
  }

  // Determinism: the same seed writes byte-identical files.
  {
    auto r1 = run_command(quoted(cli) + " generate random --seed 7 --np 4 --nu 2 --out " +
                          quoted((dir / "det1").string()));
    auto r2 = run_command(quoted(cli) + " generate random --seed 7 --np 4 --nu 2 --out " +
                          quoted((dir / "det2").string()));
    check(r1.exit_code == 0 && r2.exit_code == 0, "generate random exits 0",
          r1.output + r2.output);
    bool identical = true;
    std::string first_diff;
    for (const auto& entry : fs::directory_iterator(dir / "det1")) {
      const auto name = entry.path().filename();
      if (slurp(entry.path()) != slurp(dir / "det2" / name)) {
        identical = false;
        first_diff = name.string();
        break;
      }
    }
    check(identical, "same seed gives byte-identical files", first_diff);
    auto rc = run_command(quoted(cli) + " certify " +
                          quoted((dir / "det1" / "manifest.json").string()));
    check(rc.exit_code == 0, "generated random system certifies", rc.output);
  }

  // Poisson generate + bound, including the fine-manifest override form.
  {
    auto g = run_command(quoted(cli) + " generate poisson1d --n 4 --refine 4 --eps 0.1 --out " +
                         quoted((dir / "p1").string()));
    check(g.exit_code == 0, "generate poisson1d exits 0", g.output);
    const std::string coarse = (dir / "p1" / "coarse" / "manifest.json").string();
    const std::string fine = (dir / "p1" / "fine" / "manifest.json").string();
    auto b1 = run_command(quoted(cli) + " bound " + quoted(coarse));
    check(b1.exit_code == 0, "bound via the pair section exits 0", b1.output);
    auto b2 = run_command(quoted(cli) + " bound " + quoted(coarse) + " " + quoted(fine) +
                          " --format json");
    check(b2.exit_code == 0, "bound with an explicit fine manifest exits 0", b2.output);
    try {
      ErrorCertificate cert = error_from_json(nlohmann::json::parse(b2.output));
      check(cert.all_pass(), "bound json reports all passes");
    } catch (const std::exception& e) {
      check(false, "bound json parses", e.what());
    }

    // Flip one embedding column sign on disk: conformity must fail with exit 2.
    Matrix emb = mm::read_matrix_file(dir / "p1" / "emb_P.mtx");
    emb.col(0) = -emb.col(0);
    mm::write_matrix_file(dir / "p1" / "emb_P.mtx", emb);
    auto b3 = run_command(quoted(cli) + " bound " + quoted(coarse));
    check(b3.exit_code == 2, "broken embedding exits 2", b3.output);
    check(b3.output.find("conformity check failed") != std::string::npos,
          "diagnostic mentions the conformity check", b3.output);
  }

  // Text format renders and an overridden tolerance shows up.
  {
    SaddleSystem sys = testutil::golden_system();
    fs::path man = write_system_dir(dir / "golden", sys);
    auto r = run_command(quoted(cli) + " certify " + quoted(man.string()) +
                         " --format text --rank-tol 1e-8");
    check(r.exit_code == 0, "text certify exits 0", r.output);
    check(r.output.find("certified") != std::string::npos, "text mentions the verdict",
          r.output);
    check(r.output.find("1e-08") != std::string::npos, "text echoes the tolerance", r.output);
  }

  // Selftest subcommand: five suites, exit 0, deterministic output.
  {
    auto r1 = run_command(quoted(cli) + " selftest");
    auto r2 = run_command(quoted(cli) + " selftest");
    check(r1.exit_code == 0, "selftest exits 0", r1.output);
    check(r1.output == r2.output, "selftest output is reproducible");
    int suites = 0;
    std::istringstream lines(r1.output);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find("[pass]") != std::string::npos) ++suites;
    }
    check(suites == 5, "selftest reports five suites", r1.output);
  }

  // Usage errors exit 2.
  {
    auto r = run_command(quoted(cli) + " frobnicate");
    check(r.exit_code == 2, "unknown subcommand exits 2", r.output);
    auto r2 = run_command(quoted(cli) + " certify");
    check(r2.exit_code == 2, "missing required argument exits 2", r2.output);
  }

  fs::remove_all(dir);
  if (g_failures == 0) {
    std::cout << "cli contract: all checks passed\n";
  } else {
    std::cout << "cli contract: " << g_failures << " checks failed\n";
  }
  return g_failures;
}
