#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qfock {

enum class error_kind {
  division_by_zero,
  pole,
  unsupported,
  domain,
  divergence,
  truncation,
  singular,
  grid_mismatch,
  unknown_identity,
  usage,
};

constexpr std::string_view to_string(error_kind k) noexcept {
  switch (k) {
  case error_kind::division_by_zero: return "division_by_zero";
  case error_kind::pole: return "pole";
  case error_kind::unsupported: return "unsupported";
  case error_kind::domain: return "domain";
  case error_kind::divergence: return "divergence";
  case error_kind::truncation: return "truncation";
  case error_kind::singular: return "singular";
  case error_kind::grid_mismatch: return "grid_mismatch";
  case error_kind::unknown_identity: return "unknown_identity";
  case error_kind::usage: return "usage";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto a structured error object.
class error : public std::runtime_error {
public:
  error(error_kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  error_kind kind() const noexcept { return kind_; }

private:
  error_kind kind_;
};

} // namespace qfock
