#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "infsup/matrix_market.hpp"
#include "infsup/problems.hpp"
#include "infsup/saddle.hpp"

namespace infsup {

using Json = nlohmann::json;

struct SpaceEntry {
  Index dim = 0;
  std::string gram_path;
};

struct LoadPaths {
  std::string gq_path;
  std::string gv_path;
};

struct PairSection {
  std::string fine_manifest_path;
  std::string emb_p, emb_q, emb_u, emb_v;
};

/// On-disk description of one saddle system: space dimensions and Gram
/// files, the three form files, and optional load, pair and tolerance
/// sections. Relative paths are resolved against the manifest's directory.
struct Manifest {
  int version = 1;
  SpaceEntry P, Q, U, V;
  std::string a_path, b_path, d_path;
  std::optional<LoadPaths> load;
  std::optional<PairSection> pair;
  std::optional<Tolerances> tolerances;
  std::optional<GeneratorSpec> generator;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& p) const {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base_dir / fp;
  }
};

namespace detail {

inline const Json& require(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw IoError(where + ": missing key '" + key + "'");
  return *it;
}

inline SpaceEntry parse_space_entry(const Json& j, const std::string& where) {
  SpaceEntry e;
  e.dim = require(j, "dim", where).get<Index>();
  e.gram_path = require(j, "gram_path", where).get<std::string>();
  if (e.dim < 1) throw IoError(where + ": space dimension must be positive");
  return e;
}

inline GeneratorSpec parse_generator(const Json& j, const std::string& where) {
  GeneratorSpec g;
  const std::string kind = require(j, "kind", where).get<std::string>();
  if (kind == "random") {
    g.kind = GeneratorKind::random;
  } else if (kind == "poisson1d") {
    g.kind = GeneratorKind::poisson1d;
  } else {
    throw IoError(where + ": unknown generator kind '" + kind + "'");
  }
  g.seed = j.value("seed", std::uint64_t{0});
  g.n_p = j.value("n_p", g.n_p);
  g.n_u = j.value("n_u", g.n_u);
  g.k_kernel = j.value("k_kernel", g.k_kernel);
  g.form_sigma_lo = j.value("form_sigma_lo", g.form_sigma_lo);
  g.form_sigma_hi = j.value("form_sigma_hi", g.form_sigma_hi);
  g.gram_lambda_lo = j.value("gram_lambda_lo", g.gram_lambda_lo);
  g.gram_lambda_hi = j.value("gram_lambda_hi", g.gram_lambda_hi);
  g.n_coarse = j.value("n_coarse", g.n_coarse);
  g.n_fine = j.value("n_fine", g.n_fine);
  g.epsilon = j.value("epsilon", g.epsilon);
  return g;
}

inline Json generator_to_json(const GeneratorSpec& g) {
  Json j;
  j["kind"] = g.kind == GeneratorKind::random ? "random" : "poisson1d";
  j["seed"] = g.seed;
  if (g.kind == GeneratorKind::random) {
    j["n_p"] = g.n_p;
    j["n_u"] = g.n_u;
    j["k_kernel"] = g.k_kernel;
    j["form_sigma_lo"] = g.form_sigma_lo;
    j["form_sigma_hi"] = g.form_sigma_hi;
    j["gram_lambda_lo"] = g.gram_lambda_lo;
    j["gram_lambda_hi"] = g.gram_lambda_hi;
  } else {
    j["n_coarse"] = g.n_coarse;
    j["n_fine"] = g.n_fine;
    j["epsilon"] = g.epsilon;
  }
  return j;
}

}  // namespace detail

inline Manifest parse_manifest(const Json& j, std::filesystem::path base_dir,
                               const std::string& where) {
  Manifest m;
  m.base_dir = std::move(base_dir);
  m.version = detail::require(j, "version", where).get<int>();
  if (m.version != 1) throw IoError(where + ": unsupported manifest version");
  const Json& spaces = detail::require(j, "spaces", where);
  m.P = detail::parse_space_entry(detail::require(spaces, "P", where), where);
  m.Q = detail::parse_space_entry(detail::require(spaces, "Q", where), where);
  m.U = detail::parse_space_entry(detail::require(spaces, "U", where), where);
  m.V = detail::parse_space_entry(detail::require(spaces, "V", where), where);
  const Json& forms = detail::require(j, "forms", where);
  m.a_path = detail::require(forms, "a_path", where).get<std::string>();
  m.b_path = detail::require(forms, "b_path", where).get<std::string>();
  m.d_path = detail::require(forms, "d_path", where).get<std::string>();
  if (j.contains("load")) {
    LoadPaths lp;
    lp.gq_path = detail::require(j["load"], "gq_path", where).get<std::string>();
    lp.gv_path = detail::require(j["load"], "gv_path", where).get<std::string>();
    m.load = std::move(lp);
  }
  if (j.contains("pair")) {
    const Json& p = j["pair"];
    PairSection ps;
    ps.fine_manifest_path = detail::require(p, "fine_manifest_path", where).get<std::string>();
    const Json& emb = detail::require(p, "embedding_paths", where);
    ps.emb_p = detail::require(emb, "P", where).get<std::string>();
    ps.emb_q = detail::require(emb, "Q", where).get<std::string>();
    ps.emb_u = detail::require(emb, "U", where).get<std::string>();
    ps.emb_v = detail::require(emb, "V", where).get<std::string>();
    m.pair = std::move(ps);
  }
  if (j.contains("tolerances")) {
    Tolerances t;
    t.rank_tol = j["tolerances"].value("rank_tol", t.rank_tol);
    t.check_tol = j["tolerances"].value("check_tol", t.check_tol);
    m.tolerances = t;
  }
  if (j.contains("generator")) {
    m.generator = detail::parse_generator(j["generator"], where);
  }
  return m;
}

inline Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw IoError("manifest '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_manifest(j, path.has_parent_path() ? path.parent_path() : ".", path.string());
}

/// Read the Gram and form matrices named by a manifest and assemble the
/// system, checking every declared dimension against the file contents.
inline SaddleSystem build_system(const Manifest& m) {
  auto load_gram = [&](const SpaceEntry& e, const char* name) {
    Matrix g = mm::read_matrix_file(m.resolve(e.gram_path));
    if (g.rows() != e.dim || g.cols() != e.dim) {
      throw IoError("gram matrix '" + e.gram_path + "' is " + std::to_string(g.rows()) + "x" +
                    std::to_string(g.cols()) + " but space " + name + " declares dim " +
                    std::to_string(e.dim));
    }
    return make_space(std::move(g), name);
  };
  SpacePtr p = load_gram(m.P, "P");
  SpacePtr q = load_gram(m.Q, "Q");
  SpacePtr u = load_gram(m.U, "U");
  SpacePtr v = load_gram(m.V, "V");
  Matrix ma = mm::read_matrix_file(m.resolve(m.a_path));
  Matrix mb = mm::read_matrix_file(m.resolve(m.b_path));
  Matrix md = mm::read_matrix_file(m.resolve(m.d_path));
  try {
    return SaddleSystem(p, q, u, v, BilinearForm(p, q, std::move(ma)),
                        BilinearForm(u, q, std::move(mb)), BilinearForm(p, v, std::move(md)));
  } catch (const DimensionMismatch& e) {
    throw IoError(std::string("manifest matrices are inconsistent: ") + e.what());
  }
}

inline LoadFunctional build_load(const Manifest& m, const SaddleSystem& sys) {
  if (!m.load) throw IoError("manifest has no load section");
  Vector gq = mm::read_vector_file(m.resolve(m.load->gq_path));
  Vector gv = mm::read_vector_file(m.resolve(m.load->gv_path));
  if (gq.size() != sys.Q->dim() || gv.size() != sys.V->dim()) {
    throw IoError("load vector lengths do not match the test space dimensions");
  }
  return LoadFunctional{std::move(gq), std::move(gv)};
}

/// Write one system into `dir` under fixed file names and compose its
/// manifest. Returns the manifest path. `pair_section` and `generator`
/// are copied into the manifest when given.
inline std::filesystem::path write_system_dir(const std::filesystem::path& dir,
                                              const SaddleSystem& sys,
                                              const LoadFunctional* load = nullptr,
                                              const GeneratorSpec* generator = nullptr,
                                              const Json* pair_section = nullptr,
                                              const Tolerances* tol = nullptr) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
  mm::write_matrix_file(dir / "gram_P.mtx", sys.P->gram());
  mm::write_matrix_file(dir / "gram_Q.mtx", sys.Q->gram());
  mm::write_matrix_file(dir / "gram_U.mtx", sys.U->gram());
  mm::write_matrix_file(dir / "gram_V.mtx", sys.V->gram());
  mm::write_matrix_file(dir / "form_a.mtx", sys.a.mat);
  mm::write_matrix_file(dir / "form_b.mtx", sys.b.mat);
  mm::write_matrix_file(dir / "form_d.mtx", sys.d.mat);
  Json j;
  j["version"] = 1;
  auto space_entry = [](const SpacePtr& s, const char* gram_file) {
    Json e;
    e["dim"] = s->dim();
    e["gram_path"] = gram_file;
    return e;
  };
  j["spaces"]["P"] = space_entry(sys.P, "gram_P.mtx");
  j["spaces"]["Q"] = space_entry(sys.Q, "gram_Q.mtx");
  j["spaces"]["U"] = space_entry(sys.U, "gram_U.mtx");
  j["spaces"]["V"] = space_entry(sys.V, "gram_V.mtx");
  j["forms"]["a_path"] = "form_a.mtx";
  j["forms"]["b_path"] = "form_b.mtx";
  j["forms"]["d_path"] = "form_d.mtx";
  if (load) {
    mm::write_vector_file(dir / "load_gq.mtx", load->g_q);
    mm::write_vector_file(dir / "load_gv.mtx", load->g_v);
    j["load"]["gq_path"] = "load_gq.mtx";
    j["load"]["gv_path"] = "load_gv.mtx";
  }
  if (pair_section) j["pair"] = *pair_section;
  if (generator) j["generator"] = detail::generator_to_json(*generator);
  if (tol) {
    j["tolerances"]["rank_tol"] = tol->rank_tol;
    j["tolerances"]["check_tol"] = tol->check_tol;
  }
  const std::filesystem::path manifest_path = dir / "manifest.json";
  std::ofstream out(manifest_path);
  if (!out) throw IoError("cannot write manifest '" + manifest_path.string() + "'");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed while writing '" + manifest_path.string() + "'");
  return manifest_path;
}

/// Write a conforming pair: fine system under fine/, coarse system with the
/// pair section under coarse/, embeddings at the top level. Returns the
/// coarse manifest path.
inline std::filesystem::path write_pair_dir(const std::filesystem::path& dir,
                                            const ConformingPair& pair,
                                            const LoadFunctional* fine_load = nullptr,
                                            const GeneratorSpec* generator = nullptr) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
  mm::write_matrix_file(dir / "emb_P.mtx", pair.emb.P);
  mm::write_matrix_file(dir / "emb_Q.mtx", pair.emb.Q);
  mm::write_matrix_file(dir / "emb_U.mtx", pair.emb.U);
  mm::write_matrix_file(dir / "emb_V.mtx", pair.emb.V);
  write_system_dir(dir / "fine", pair.fine, fine_load);
  Json pair_section;
  pair_section["fine_manifest_path"] = "../fine/manifest.json";
  pair_section["embedding_paths"]["P"] = "../emb_P.mtx";
  pair_section["embedding_paths"]["Q"] = "../emb_Q.mtx";
  pair_section["embedding_paths"]["U"] = "../emb_U.mtx";
  pair_section["embedding_paths"]["V"] = "../emb_V.mtx";
  return write_system_dir(dir / "coarse", pair.coarse, nullptr, generator, &pair_section);
}

/// Assemble a conforming pair from a coarse manifest carrying a pair
/// section. `fine_override`, when given, replaces the fine manifest path.
inline ConformingPair build_pair(const Manifest& coarse,
                                 std::optional<std::filesystem::path> fine_override = {},
                                 double check_tol = kDefaultCheckTol) {
  if (!coarse.pair) throw IoError("coarse manifest has no pair section");
  std::filesystem::path fine_path =
      fine_override ? *fine_override : coarse.resolve(coarse.pair->fine_manifest_path);
  Manifest fine_manifest = load_manifest(fine_path);
  SaddleSystem fine = build_system(fine_manifest);
  SaddleSystem coarse_sys = build_system(coarse);
  Embeddings emb;
  emb.P = mm::read_matrix_file(coarse.resolve(coarse.pair->emb_p));
  emb.Q = mm::read_matrix_file(coarse.resolve(coarse.pair->emb_q));
  emb.U = mm::read_matrix_file(coarse.resolve(coarse.pair->emb_u));
  emb.V = mm::read_matrix_file(coarse.resolve(coarse.pair->emb_v));
  return ConformingPair(std::move(fine), std::move(coarse_sys), std::move(emb), check_tol);
}

}  // namespace infsup
