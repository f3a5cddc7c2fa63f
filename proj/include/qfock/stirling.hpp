#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfock/context.hpp"
#include "qfock/error.hpp"
#include "qfock/qnum.hpp"
#include "qfock/series.hpp"

namespace qfock {

/// q-Stirling numbers S(n,k), 1 <= k <= n <= n_max, from the normal-ordered
/// expansion (M_z R_q)^n = sum_k S(n,k) M_z^k R_q^k.
class stirling_table {
public:
  stirling_table() = default;
  explicit stirling_table(int n_max) : n_max_(n_max) {
    if (n_max < 1) throw error(error_kind::domain, "stirling table needs n_max >= 1");
  }

  int n_max() const noexcept { return n_max_; }

  const qpoly& at(int n, int k) const {
    auto it = entries_.find({n, k});
    if (it == entries_.end())
      throw error(error_kind::domain, "S(" + std::to_string(n) + "," + std::to_string(k) + ") outside the table");
    return it->second;
  }
  void set(int n, int k, qpoly p) {
    if (n < 1 || n > n_max_ || k < 1 || k > n) throw error(error_kind::domain, "stirling index out of range");
    entries_[{n, k}] = std::move(p);
  }

  std::vector<qpoly> row(int n) const {
    std::vector<qpoly> r;
    for (int k = 1; k <= n; ++k) r.push_back(at(n, k));
    return r;
  }

  friend bool operator==(const stirling_table& a, const stirling_table& b) {
    return a.n_max_ == b.n_max_ && a.entries_ == b.entries_;
  }

private:
  int n_max_ = 0;
  std::map<std::pair<int, int>, qpoly> entries_;
};

/// Fills the table from S(1,1) = 1, S(n,1) = 1, S(n,n) = q^{n-1} S(n-1,n-1)
/// and S(n,k) = [k]_q S(n-1,k) + q^{k-1} S(n-1,k-1).
inline stirling_table stirling_recursive(int n_max, const exact_context& ctx = {}) {
  stirling_table t(n_max);
  t.set(1, 1, qpoly(1));
  for (int n = 2; n <= n_max; ++n) {
    t.set(n, 1, qpoly(1));
    for (int k = 2; k < n; ++k)
      t.set(n, k, q_int(k, ctx).num() * t.at(n - 1, k) + qpoly::monomial(static_cast<std::size_t>(k - 1)) * t.at(n - 1, k - 1));
    t.set(n, n, qpoly::monomial(static_cast<std::size_t>(n - 1)) * t.at(n - 1, n - 1));
  }
  return t;
}

/**
 * Row n of the table recovered from the operators themselves: on z^m the
 * left side (M_z R_q)^n and each M_z^k R_q^k act diagonally, so matching the
 * eigenvalues for m = 1..n gives a lower-triangular system for S(n,.).
 * The eigenvalues are read off the series matrices, not from a formula.
 */
inline std::vector<qrat> stirling_oracle(int n, const exact_context& ctx) {
  if (n < 1) throw error(error_kind::domain, "stirling oracle needs n >= 1");
  if (2 * n > ctx.order)
    throw error(error_kind::domain, "stirling oracle needs n <= N/2 of the series context");
  const auto rq = op_Rq(ctx);
  const auto mz = op_Mz(ctx);
  const auto mzrq = mz * rq;
  const auto lhs = op_power(mzrq, n, qrat(1));

  // falling[k-1][m] = eigenvalue of M_z^k R_q^k on z^m
  std::vector<std::vector<qrat>> falling;
  auto rk = op_identity(ctx);
  auto mk = op_identity(ctx);
  for (int k = 1; k <= n; ++k) {
    rk = rq * rk;
    mk = mz * mk;
    const auto prod = mk * rk;
    std::vector<qrat> diag(static_cast<std::size_t>(n) + 1);
    for (int m = 1; m <= n; ++m) diag[static_cast<std::size_t>(m)] = prod(m, m);
    falling.push_back(std::move(diag));
  }

  // Forward substitution: lhs(m,m) = sum_{k<=m} S(n,k) falling[k-1][m].
  std::vector<qrat> s(static_cast<std::size_t>(n));
  for (int m = 1; m <= n; ++m) {
    qrat acc = lhs(m, m);
    for (int k = 1; k < m; ++k) acc -= s[static_cast<std::size_t>(k - 1)] * falling[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(m)];
    const qrat& pivot = falling[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(m)];
    if (pivot.is_zero()) throw error(error_kind::singular, "singular triangular system in the stirling oracle");
    s[static_cast<std::size_t>(m - 1)] = acc / pivot;
  }
  return s;
}

enum class render_format { text, json };

/// "1 | 2q+q^2 | q^3" per row, one row per line.
inline std::string stirling_table_text(const stirling_table& t) {
  std::string out;
  for (int n = 1; n <= t.n_max(); ++n) {
    for (int k = 1; k <= n; ++k) {
      if (k > 1) out += " | ";
      out += t.at(n, k).to_string();
    }
    out += "\n";
  }
  return out;
}

/// {"n_max": n, "rows": [[{"coeffs": [...], "min_power": p}, ...], ...]} with
/// coefficients ascending in q starting at q^min_power.
inline nlohmann::json stirling_table_json(const stirling_table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (int n = 1; n <= t.n_max(); ++n) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 1; k <= n; ++k) {
      const qpoly& p = t.at(n, k);
      const std::size_t lo = p.min_power();
      nlohmann::json coeffs = nlohmann::json::array();
      for (std::size_t j = lo; j < p.coeffs().size(); ++j) {
        const mpq_class& c = p.coeffs()[j];
        if (c.get_den() != 1 || !c.get_num().fits_slong_p())
          throw error(error_kind::domain, "stirling coefficient is not a machine integer");
        coeffs.push_back(c.get_num().get_si());
      }
      row.push_back({{"coeffs", coeffs}, {"min_power", lo}});
    }
    rows.push_back(std::move(row));
  }
  return {{"n_max", t.n_max()}, {"rows", rows}};
}

inline std::string stirling_table_render(const stirling_table& t, render_format f) {
  return f == render_format::text ? stirling_table_text(t) : stirling_table_json(t).dump();
}

inline stirling_table stirling_table_from_json(const nlohmann::json& j) {
  stirling_table t(j.at("n_max").get<int>());
  const auto& rows = j.at("rows");
  if (!rows.is_array() || static_cast<int>(rows.size()) != t.n_max())
    throw error(error_kind::domain, "stirling json: row count does not match n_max");
  for (int n = 1; n <= t.n_max(); ++n) {
    const auto& row = rows[static_cast<std::size_t>(n - 1)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) throw error(error_kind::domain, "stirling json: ragged row");
    for (int k = 1; k <= n; ++k) {
      const auto& cell = row[static_cast<std::size_t>(k - 1)];
      const auto lo = cell.at("min_power").get<std::size_t>();
      std::vector<mpq_class> c(lo, mpq_class(0));
      for (const auto& v : cell.at("coeffs")) c.emplace_back(v.get<long>());
      t.set(n, k, qpoly(std::move(c)));
    }
  }
  return t;
}

/// Classical value S(n,k) at q = 1 (Stirling numbers of the second kind).
inline std::vector<long> stirling_row_at_one(const stirling_table& t, int n) {
  std::vector<long> r;
  for (const auto& p : t.row(n)) r.push_back(static_cast<long>(p.eval_exact(1).get_num().get_si()));
  return r;
}

} // namespace qfock
