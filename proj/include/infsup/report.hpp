#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "infsup/bounds.hpp"
#include "infsup/saddle.hpp"

namespace infsup {

namespace detail {

inline void put_optional(nlohmann::json& j, const char* key, const std::optional<double>& v) {
  if (v) {
    j[key] = *v;
  } else {
    j[key] = nullptr;
  }
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace detail

inline nlohmann::json to_json(const StabilityCertificate& c) {
  nlohmann::json j;
  j["alpha"] = c.alpha_vacuous ? nlohmann::json(nullptr) : nlohmann::json(c.alpha);
  j["alpha_vacuous"] = c.alpha_vacuous;
  j["beta"] = c.beta;
  j["delta"] = c.delta;
  detail::put_optional(j, "nu", c.nu);
  detail::put_optional(j, "gamma", c.gamma);
  j["gamma_true"] = c.gamma_true;
  j["norm_a"] = c.norm_a;
  j["norm_b"] = c.norm_b;
  j["norm_d"] = c.norm_d;
  j["norm_c"] = c.norm_c;
  j["dim_R"] = c.dim_R;
  j["dim_S"] = c.dim_S;
  j["dim_M"] = c.dim_M;
  j["dim_N"] = c.dim_N;
  j["dim_match_RS"] = c.dim_match_RS;
  j["certified"] = c.certified;
  j["reasons"] = c.reasons;
  j["rank_tol"] = c.tol.rank_tol;
  j["check_tol"] = c.tol.check_tol;
  return j;
}

inline StabilityCertificate stability_from_json(const nlohmann::json& j) {
  StabilityCertificate c;
  c.alpha_vacuous = j.at("alpha_vacuous").get<bool>();
  c.alpha = j.at("alpha").is_null() ? 0.0 : j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.delta = j.at("delta").get<double>();
  if (!j.at("nu").is_null()) c.nu = j.at("nu").get<double>();
  if (!j.at("gamma").is_null()) c.gamma = j.at("gamma").get<double>();
  c.gamma_true = j.at("gamma_true").get<double>();
  c.norm_a = j.at("norm_a").get<double>();
  c.norm_b = j.at("norm_b").get<double>();
  c.norm_d = j.at("norm_d").get<double>();
  c.norm_c = j.at("norm_c").get<double>();
  c.dim_R = j.at("dim_R").get<Index>();
  c.dim_S = j.at("dim_S").get<Index>();
  c.dim_M = j.at("dim_M").get<Index>();
  c.dim_N = j.at("dim_N").get<Index>();
  c.dim_match_RS = j.at("dim_match_RS").get<bool>();
  c.certified = j.at("certified").get<bool>();
  c.reasons = j.at("reasons").get<std::vector<std::string>>();
  c.tol.rank_tol = j.at("rank_tol").get<double>();
  c.tol.check_tol = j.at("check_tol").get<double>();
  return c;
}

inline nlohmann::json to_json(const ErrorCertificate& c) {
  nlohmann::json j;
  j["err_global"] = c.err_global;
  j["err_primal"] = c.err_primal;
  j["err_mult"] = c.err_mult;
  j["best_global"] = c.best_global;
  j["best_primal"] = c.best_primal;
  j["best_mult"] = c.best_mult;
  j["bound_global_formula"] = c.bound_global_formula;
  j["bound_global_true"] = c.bound_global_true;
  j["bound_primal"] = c.bound_primal;
  j["bound_mult"] = c.bound_mult;
  j["primal_mult_term"] = c.primal_mult_term;
  j["angle_RRt"] = c.angle_RRt;
  j["angle_vacuous"] = c.angle_vacuous;
  j["pass_global_formula"] = c.pass_global_formula;
  j["pass_global_true"] = c.pass_global_true;
  j["pass_primal"] = c.pass_primal;
  j["pass_mult"] = c.pass_mult;
  j["norm_a"] = c.norm_a;
  j["norm_b"] = c.norm_b;
  j["norm_d"] = c.norm_d;
  j["norm_c"] = c.norm_c;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["delta"] = c.delta;
  j["gamma_formula"] = c.gamma_formula;
  j["gamma_true"] = c.gamma_true;
  j["rank_tol"] = c.tol.rank_tol;
  j["check_tol"] = c.tol.check_tol;
  return j;
}

inline ErrorCertificate error_from_json(const nlohmann::json& j) {
  ErrorCertificate c;
  c.err_global = j.at("err_global").get<double>();
  c.err_primal = j.at("err_primal").get<double>();
  c.err_mult = j.at("err_mult").get<double>();
  c.best_global = j.at("best_global").get<double>();
  c.best_primal = j.at("best_primal").get<double>();
  c.best_mult = j.at("best_mult").get<double>();
  c.bound_global_formula = j.at("bound_global_formula").get<double>();
  c.bound_global_true = j.at("bound_global_true").get<double>();
  c.bound_primal = j.at("bound_primal").get<double>();
  c.bound_mult = j.at("bound_mult").get<double>();
  c.primal_mult_term = j.at("primal_mult_term").get<double>();
  c.angle_RRt = j.at("angle_RRt").get<double>();
  c.angle_vacuous = j.at("angle_vacuous").get<bool>();
  c.pass_global_formula = j.at("pass_global_formula").get<bool>();
  c.pass_global_true = j.at("pass_global_true").get<bool>();
  c.pass_primal = j.at("pass_primal").get<bool>();
  c.pass_mult = j.at("pass_mult").get<bool>();
  c.norm_a = j.at("norm_a").get<double>();
  c.norm_b = j.at("norm_b").get<double>();
  c.norm_d = j.at("norm_d").get<double>();
  c.norm_c = j.at("norm_c").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.delta = j.at("delta").get<double>();
  c.gamma_formula = j.at("gamma_formula").get<double>();
  c.gamma_true = j.at("gamma_true").get<double>();
  c.tol.rank_tol = j.at("rank_tol").get<double>();
  c.tol.check_tol = j.at("check_tol").get<double>();
  return c;
}

inline void render_text(std::ostream& out, const StabilityCertificate& c) {
  auto row = [&](const char* key, const std::string& val) {
    out << "  " << std::left << std::setw(14) << key << val << "\n";
  };
  out << "stability certificate\n";
  row("norm_a", detail::fmt(c.norm_a));
  row("norm_b", detail::fmt(c.norm_b));
  row("norm_d", detail::fmt(c.norm_d));
  row("norm_c", detail::fmt(c.norm_c));
  row("dim_R", std::to_string(c.dim_R));
  row("dim_S", std::to_string(c.dim_S));
  row("dim_M", std::to_string(c.dim_M));
  row("dim_N", std::to_string(c.dim_N));
  row("alpha", c.alpha_vacuous ? "vacuous (dim R = 0)" : detail::fmt(c.alpha));
  row("beta", detail::fmt(c.beta));
  row("delta", detail::fmt(c.delta));
  row("nu", c.nu ? detail::fmt(*c.nu) : "-");
  row("gamma", c.gamma ? detail::fmt(*c.gamma) : "-");
  row("gamma_true", detail::fmt(c.gamma_true));
  row("rank_tol", detail::fmt(c.tol.rank_tol));
  row("check_tol", detail::fmt(c.tol.check_tol));
  row("certified", c.certified ? "yes" : "no");
  for (const auto& r : c.reasons) row("reason", r);
}

inline void render_text(std::ostream& out, const ErrorCertificate& c) {
  auto row = [&](const char* key, const std::string& val) {
    out << "  " << std::left << std::setw(22) << key << val << "\n";
  };
  auto verdict = [](bool ok) { return ok ? std::string("pass") : std::string("FAIL"); };
  out << "error certificate\n";
  row("err_global", detail::fmt(c.err_global));
  row("err_primal", detail::fmt(c.err_primal));
  row("err_mult", detail::fmt(c.err_mult));
  row("best_global", detail::fmt(c.best_global));
  row("best_primal", detail::fmt(c.best_primal));
  row("best_mult", detail::fmt(c.best_mult));
  row("angle_RRt", c.angle_vacuous ? "vacuous (dim R = 0)" : detail::fmt(c.angle_RRt));
  row("bound_global_formula", detail::fmt(c.bound_global_formula) + "  " +
                                  verdict(c.pass_global_formula));
  row("bound_global_true", detail::fmt(c.bound_global_true) + "  " + verdict(c.pass_global_true));
  row("bound_primal", detail::fmt(c.bound_primal) + "  " + verdict(c.pass_primal));
  row("bound_mult", detail::fmt(c.bound_mult) + "  " + verdict(c.pass_mult));
  row("norm_a", detail::fmt(c.norm_a));
  row("norm_b", detail::fmt(c.norm_b));
  row("norm_d", detail::fmt(c.norm_d));
  row("norm_c", detail::fmt(c.norm_c));
  row("alpha", detail::fmt(c.alpha));
  row("beta", detail::fmt(c.beta));
  row("delta", detail::fmt(c.delta));
  row("gamma_formula", detail::fmt(c.gamma_formula));
  row("gamma_true", detail::fmt(c.gamma_true));
  row("rank_tol", detail::fmt(c.tol.rank_tol));
  row("check_tol", detail::fmt(c.tol.check_tol));
  row("all_pass", c.all_pass() ? "yes" : "no");
}

}  // namespace infsup
