#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "qfock/report.hpp"
#include "qfock/series.hpp"

namespace qfock {

enum class series_identity {
  q_commutator,          // R_q M_z - q M_z R_q = I
  iterated_powers,       // R_q^n = prod_{k<=n} (I - q^k Lambda) R_0^n / (1-q)^n
  r0_lambda_intertwine,  // R_0 Lambda = q Lambda R_0
  rq_factored,           // R_q = (I - q Lambda) R_0 / (1-q)
};

inline constexpr std::array all_series_identities{series_identity::iterated_powers, series_identity::q_commutator,
                                                  series_identity::r0_lambda_intertwine, series_identity::rq_factored};

constexpr std::string_view to_string(series_identity id) noexcept {
  switch (id) {
  case series_identity::q_commutator: return "Q_COMMUTATOR";
  case series_identity::iterated_powers: return "ITERATED_POWERS";
  case series_identity::r0_lambda_intertwine: return "R0_LAMBDA_INTERTWINE";
  case series_identity::rq_factored: return "RQ_FACTORED";
  }
  return "";
}

inline series_identity parse_series_identity(std::string_view s) {
  for (auto id : all_series_identities)
    if (to_string(id) == s) return id;
  throw error(error_kind::unknown_identity, "unknown series identity '" + std::string(s) + "'");
}

inline constexpr int default_max_power = 8;

namespace detail {

template <q_context C>
void require_nonclassical(const C& ctx, series_identity id) {
  if (ctx.classical())
    throw error(error_kind::unsupported, std::string(to_string(id)) + " divides by 1-q and is undefined at q=1");
}

} // namespace detail

/**
 * Checks one identity of the operator catalog on columns 0..N-margin.
 * Without an explicit margin, ITERATED_POWERS uses margin n for the n-th power
 * and the others use 1.
 */
template <q_context C>
report verify_series_identity(series_identity id, const C& ctx, std::optional<int> margin = std::nullopt,
                              int max_power = default_max_power) {
  using S = typename C::value_type;
  const S one = ctx.from_int(1);
  const S q = ctx.q();
  const int used_margin = margin.value_or(id == series_identity::iterated_powers ? max_power : 1);
  report rep = make_report(std::string(to_string(id)), ctx, used_margin);
  const int last = detail::checked_last_column(ctx.order, used_margin);
  rep.details["checked_degrees"] = {0, last};

  switch (id) {
  case series_identity::q_commutator: {
    const auto rq = op_Rq(ctx);
    const auto mz = op_Mz(ctx);
    const auto lhs = rq * mz - q * (mz * rq);
    record_defect(rep, compare_columns(lhs, op_identity(ctx), last));
    break;
  }
  case series_identity::iterated_powers: {
    detail::require_nonclassical(ctx, id);
    if (max_power < 1) throw error(error_kind::domain, "ITERATED_POWERS needs max_power >= 1");
    const auto rq = op_Rq(ctx);
    const auto r0 = op_R0(ctx);
    const auto lam = op_Lambda(ctx);
    const auto id_op = op_identity(ctx);
    auto lhs = id_op;
    auto r0n = id_op;
    auto factors = id_op;
    S qk = one;
    S scale = one;
    nlohmann::json per_power = nlohmann::json::array();
    for (int n = 1; n <= max_power; ++n) {
      lhs = rq * lhs;
      r0n = r0 * r0n;
      qk = qk * q;
      factors = factors * (id_op - qk * lam);
      scale = scale * (one - q);
      const auto rhs = (one / scale) * (factors * r0n);
      const int last_n = detail::checked_last_column(ctx.order, margin.value_or(n));
      const auto d = compare_columns(lhs, rhs, last_n);
      record_defect(rep, d);
      per_power.push_back({{"n", n}, {"holds", d.zero}, {"checked_degrees", {0, last_n}}});
    }
    rep.details["powers"] = per_power;
    rep.details["checked_degrees"] = {0, detail::checked_last_column(ctx.order, margin.value_or(1))};
    break;
  }
  case series_identity::r0_lambda_intertwine: {
    const auto r0 = op_R0(ctx);
    const auto lam = op_Lambda(ctx);
    record_defect(rep, compare_columns(r0 * lam, q * (lam * r0), last));
    break;
  }
  case series_identity::rq_factored: {
    detail::require_nonclassical(ctx, id);
    const auto rhs = (one / (one - q)) * ((op_identity(ctx) - q * op_Lambda(ctx)) * op_R0(ctx));
    record_defect(rep, compare_columns(op_Rq(ctx), rhs, last));
    break;
  }
  }
  return rep;
}

} // namespace qfock
