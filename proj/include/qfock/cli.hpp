#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qfock/suites.hpp"

namespace qfock::cli {

enum exit_code : int { ok = 0, check_failed = 1, usage_error = 2 };

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_scalar(num_scalar v) {
  if (v.imag() == 0.0) return format_double(v.real());
  return format_double(v.real()) + (v.imag() < 0 ? "-" : "+") + format_double(std::abs(v.imag())) + "i";
}

inline nlohmann::json scalar_json(num_scalar v) { return nlohmann::json::array({v.real(), v.imag()}); }

inline nlohmann::json error_json(std::string_view kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

/// Tail tolerance: QFOCK_TAIL_TOL if set and parseable, else 1e-14.
inline double tail_tol_from_env() {
  const char* s = std::getenv("QFOCK_TAIL_TOL");
  if (!s || !*s) return 1e-14;
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0' || !(v > 0.0))
    throw error(error_kind::usage, std::string("QFOCK_TAIL_TOL is not a positive number: ") + s);
  return v;
}

struct state {
  // stirling
  int n = 4;
  std::string format = "text";
  bool check_oracle = false;
  // eval
  double q = 0.5;
  double z = 0.0, zi = 0.0, w = 0.0, wi = 0.0;
  std::string method = "series";
  std::string which = "k1";
  int N = 48;
  int pow = 0;
  double a = 1.0;
  // verify
  std::string suite = "all";
  std::optional<double> vq;
  bool exact = false;
  std::optional<int> vN;
  std::uint64_t seed = 0;
  std::string output;
};

namespace detail {

inline void emit(const state& st, std::ostream& out, const std::string& text) {
  if (st.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(st.output);
  if (!f) throw error(error_kind::usage, "cannot open output file " + st.output);
  f << text;
}

inline int cmd_stirling(const state& st, std::ostream& out) {
  if (st.n < 1) throw error(error_kind::domain, "--n must be at least 1");
  const auto fmt = st.format == "json" ? render_format::json : render_format::text;
  const auto t = stirling_recursive(st.n);
  bool agrees = true;
  if (st.check_oracle) {
    const exact_context ctx(2 * st.n);
    for (int n = 1; n <= st.n && agrees; ++n) {
      const auto row = stirling_oracle(n, ctx);
      for (int k = 1; k <= n; ++k) agrees = agrees && row[static_cast<std::size_t>(k - 1)] == qrat(t.at(n, k));
    }
  }
  if (fmt == render_format::json) {
    auto j = stirling_table_json(t);
    if (st.check_oracle) j["oracle_agrees"] = agrees;
    emit(st, out, j.dump() + "\n");
  } else {
    std::string text = stirling_table_text(t);
    if (st.check_oracle) text += std::string("oracle: ") + (agrees ? "agrees" : "DISAGREES") + "\n";
    emit(st, out, text);
  }
  return agrees ? ok : check_failed;
}

inline kernel_id parse_kernel(const std::string& s) {
  if (s == "k1") return kernel_id::k1q;
  if (s == "k2") return kernel_id::k2q;
  if (s == "k1-k2") return kernel_id::k1_minus_k2;
  throw error(error_kind::usage, "--which must be k1, k2 or k1-k2");
}

inline int cmd_eval(const std::string& kind, const state& st, std::ostream& out) {
  const numeric_context ctx(st.q, kind == "Sq" ? st.N : 64, tail_tol_from_env());
  const num_scalar z(st.z, st.zi);
  nlohmann::json j{{"kind", kind}, {"q", st.q}};
  num_scalar value;
  if (kind == "eq_exp") {
    if (st.method != "series" && st.method != "product") throw error(error_kind::usage, "--method must be series or product");
    const auto r = eq_exp_detailed(z, ctx, st.method == "series" ? eq_method::series : eq_method::product);
    value = r.value;
    j["z"] = scalar_json(z);
    j["method"] = st.method;
    j["terms"] = r.terms;
    j["tail_tol"] = ctx.tail_tol;
  } else if (kind == "kernel") {
    const num_scalar w(st.w, st.wi);
    value = kernel_eval(parse_kernel(st.which), z, w, ctx);
    j["which"] = st.which;
    j["z"] = scalar_json(z);
    j["w"] = scalar_json(w);
    j["tail_tol"] = ctx.tail_tol;
  } else if (kind == "Sq") {
    if (st.N < 1) throw error(error_kind::domain, "--N must be at least 1");
    const auto sys = build_realization(ctx);
    value = eval_Sq(sys, z);
    j["z"] = scalar_json(z);
    j["N"] = st.N;
    j["defect_rank"] = sys.d;
    j["note"] = "transfer function of the truncated model";
  } else {
    if (st.pow < 0) throw error(error_kind::domain, "--pow must be nonnegative");
    const int l = st.pow;
    const auto r = jackson_integral([l](double x) { return num_scalar(std::pow(x, l)); }, st.a, ctx);
    value = r.value;
    j["pow"] = l;
    j["a"] = st.a;
    j["terms"] = r.terms;
    j["tail_estimate"] = r.tail_estimate;
  }
  j["value"] = scalar_json(value);
  emit(st, out, st.format == "json" ? j.dump() + "\n" : format_scalar(value) + "\n");
  return ok;
}

inline std::string render_text(const suite_result& res) {
  std::string s;
  for (const auto& r : res.reports) {
    s += (r.holds ? "PASS " : "FAIL ") + r.identity + " mode=" + r.mode;
    if (r.q) s += " q=" + format_double(*r.q);
    s += " N=" + std::to_string(r.N) + " max_defect=";
    if (const auto* d = std::get_if<double>(&r.max_defect)) s += format_double(*d);
    else s += std::get<std::string>(r.max_defect);
    s += "\n";
  }
  for (const auto& [name, why] : res.skipped) s += "SKIP " + name + ": " + why + "\n";
  return s;
}

inline int cmd_verify(const state& st, std::ostream& out, std::ostream& err) {
  const suite_id suite = parse_suite(st.suite);
  if (st.exact && st.vq) throw error(error_kind::usage, "--q and --exact are mutually exclusive");
  const int default_n = suite == suite_id::realization ? 48 : 32;
  const int n = st.vN.value_or(default_n);
  if (n < 4) throw error(error_kind::usage, "--N must be at least 4");
  const suite_options opt{st.seed};
  suite_result res;
  if (st.vq) {
    res = run_suite(suite, numeric_context(*st.vq, n, tail_tol_from_env()), opt);
  } else {
    if (suite == suite_id::transform || suite == suite_id::realization)
      throw error(error_kind::usage, std::string(to_string(suite)) + " suite is numeric; pass --q");
    res = run_suite(suite, exact_context(n), opt);
  }
  bool all_hold = true;
  for (const auto& r : res.reports) all_hold = all_hold && r.holds;
  for (const auto& [name, why] : res.skipped) err << "skipped " << name << ": " << why << "\n";
  if (st.format == "json") emit(st, out, nlohmann::json(res.reports).dump() + "\n");
  else emit(st, out, render_text(res));
  return all_hold ? ok : check_failed;
}

} // namespace detail

/**
 * Entry point shared by the executable and the tests. Exit codes: 0 when every
 * check holds, 1 when a check fails, 2 on usage or domain errors (a JSON error
 * object is written to err).
 */
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  state st;
  CLI::App app{"q-Fock space operators, kernels and identity checks", "qfock"};
  app.require_subcommand(1);

  auto* stirling = app.add_subcommand("stirling", "Print the q-Stirling table");
  stirling->add_option("--n", st.n, "Largest row")->capture_default_str();
  stirling->add_option("--format", st.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  stirling->add_flag("--check-oracle", st.check_oracle, "Compare against the operator expansion");

  auto* eval = app.add_subcommand("eval", "Evaluate a single quantity");
  eval->require_subcommand(1);
  std::string eval_kind;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--q", st.q, "q in [0,1]")->required();
    sub->add_option("--format", st.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    sub->callback([&eval_kind, sub] { eval_kind = sub->get_name(); });
  };
  auto* e_eq = eval->add_subcommand("eq_exp", "q-exponential E_q(z)");
  add_common(e_eq);
  e_eq->add_option("--z", st.z, "Real part of z")->required();
  e_eq->add_option("--zi", st.zi, "Imaginary part of z");
  e_eq->add_option("--method", st.method)->check(CLI::IsMember({"series", "product"}))->capture_default_str();
  auto* e_k = eval->add_subcommand("kernel", "Reproducing kernel K(z, w)");
  add_common(e_k);
  e_k->add_option("--which", st.which)->check(CLI::IsMember({"k1", "k2", "k1-k2"}))->capture_default_str();
  e_k->add_option("--z", st.z)->required();
  e_k->add_option("--zi", st.zi);
  e_k->add_option("--w", st.w)->required();
  e_k->add_option("--wi", st.wi);
  auto* e_s = eval->add_subcommand("Sq", "Transfer function of the truncated realization");
  add_common(e_s);
  e_s->add_option("--z", st.z)->required();
  e_s->add_option("--zi", st.zi);
  e_s->add_option("--N", st.N)->capture_default_str();
  auto* e_j = eval->add_subcommand("jackson", "Jackson integral of x^pow over [0, a]");
  add_common(e_j);
  e_j->add_option("--pow", st.pow)->required();
  e_j->add_option("--a", st.a)->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run identity suites");
  verify->add_option("--suite", st.suite)
      ->check(CLI::IsMember({"series", "stirling", "spaces", "transform", "realization", "all"}))
      ->capture_default_str();
  verify->add_option("--q", st.vq, "Numeric mode at this q");
  verify->add_flag("--exact", st.exact, "Exact mode (default when --q is absent)");
  verify->add_option("--N", st.vN, "Truncation order (default 32, 48 for realization)");
  verify->add_option("--seed", st.seed)->capture_default_str();
  verify->add_option("--format", st.format)->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--output", st.output, "Write the report here instead of stdout");
  // verify defaults to json
  bool verify_format_given = false;
  verify->callback([&] { verify_format_given = verify->count("--format") > 0; });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << error_json("usage", e.what()).dump() << "\n";
    return usage_error;
  }

  try {
    if (stirling->parsed()) return detail::cmd_stirling(st, out);
    if (eval->parsed()) return detail::cmd_eval(eval_kind, st, out);
    if (!verify_format_given) st.format = "json";
    return detail::cmd_verify(st, out, err);
  } catch (const error& e) {
    err << error_json(to_string(e.kind()), e.what()).dump() << "\n";
    return usage_error;
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(std::move(args), out, err);
}

} // namespace qfock::cli
