#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "qfock/context.hpp"
#include "qfock/qrat.hpp"
#include "qfock/series.hpp"

namespace qfock {

/// Outcome of one identity check. max_defect is a rendered rational function
/// in exact mode and an absolute magnitude in numeric mode.
struct report {
  std::string identity;
  std::string mode;
  std::optional<double> q;
  int N = 0;
  int margin = 0;
  bool holds = false;
  std::variant<std::string, double> max_defect = 0.0;
  nlohmann::json details = nlohmann::json::object();
};

inline void to_json(nlohmann::json& j, const report& r) {
  j = nlohmann::json{{"identity", r.identity},
                     {"mode", r.mode},
                     {"q", r.q ? nlohmann::json(*r.q) : nlohmann::json(nullptr)},
                     {"N", r.N},
                     {"margin", r.margin},
                     {"holds", r.holds}};
  std::visit([&](const auto& v) { j["max_defect"] = v; }, r.max_defect);
  j["details"] = r.details;
}

template <q_context C>
report make_report(std::string identity, const C& ctx, int margin) {
  report r;
  r.identity = std::move(identity);
  r.mode = ctx.mode_name();
  if constexpr (!C::is_exact) r.q = ctx.q0;
  r.N = ctx.order;
  r.margin = margin;
  r.holds = true;
  return r;
}

namespace detail {

inline int checked_last_column(int order, int margin) {
  if (margin < 0) throw error(error_kind::domain, "degree margin must be nonnegative");
  if (margin > order) throw error(error_kind::domain, "degree margin exceeds the series order");
  return order - margin;
}

} // namespace detail

/// Relative tolerance used when a matrix identity is checked in numeric mode.
inline constexpr double numeric_identity_tol = 1e-12;

struct matrix_defect {
  bool zero = true;
  /// Exact mode: first nonzero defect entry rendered; numeric: largest |entry|.
  std::variant<std::string, double> max_entry = 0.0;
  double scale = 0.0;
  int worst_row = -1;
  int worst_col = -1;
};

/// Compares lhs and rhs on columns 0..last_col. Exact mode demands literal
/// equality; numeric mode allows numeric_identity_tol relative to the largest
/// entry of either side.
template <class S>
matrix_defect compare_columns(const series_operator<S>& lhs, const series_operator<S>& rhs, int last_col) {
  matrix_defect d;
  if constexpr (std::is_same_v<S, qrat>) {
    d.max_entry = std::string("0");
    for (int c = 0; c <= last_col; ++c)
      for (int r = 0; r < lhs.dim(); ++r) {
        if (lhs(r, c) == rhs(r, c)) continue;
        if (d.zero) {
          d.max_entry = (lhs(r, c) - rhs(r, c)).to_string();
          d.worst_row = r;
          d.worst_col = c;
        }
        d.zero = false;
      }
  } else {
    double worst = 0.0, scale = 1.0;
    for (int c = 0; c <= last_col; ++c)
      for (int r = 0; r < lhs.dim(); ++r) {
        scale = std::max({scale, std::abs(lhs(r, c)), std::abs(rhs(r, c))});
        const double e = std::abs(lhs(r, c) - rhs(r, c));
        if (e > worst) {
          worst = e;
          d.worst_row = r;
          d.worst_col = c;
        }
      }
    d.max_entry = worst;
    d.scale = scale;
    d.zero = worst <= numeric_identity_tol * scale;
  }
  return d;
}

/// Folds one comparison into a report: holds is and-ed, max_defect keeps the
/// first nonzero exact entry or the largest numeric magnitude.
inline void record_defect(report& r, const matrix_defect& d) {
  const bool first_failure = r.holds && !d.zero;
  r.holds = r.holds && d.zero;
  if (auto* num = std::get_if<double>(&d.max_entry)) {
    const double* prev = std::get_if<double>(&r.max_defect);
    if (!prev || *num >= *prev) {
      r.max_defect = *num;
      if (d.worst_row >= 0) r.details["worst_entry"] = {d.worst_row, d.worst_col};
    }
  } else if (first_failure || std::holds_alternative<double>(r.max_defect)) {
    r.max_defect = d.max_entry;
    if (d.worst_row >= 0) r.details["worst_entry"] = {d.worst_row, d.worst_col};
  }
}

} // namespace qfock
