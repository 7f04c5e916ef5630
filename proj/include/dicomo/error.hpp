#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dicomo {

enum class Errc {
  sum_mismatch,
  repair_budget_exceeded,
  empty_sequence,
  index_out_of_range,
  overflow,
  domain_error,
  invalid_distribution,
  zero_mean_degree,
  not_normalized,
  critical_regime,
  zero_nu,
  no_extinct_runs,
  no_survivors,
  start_already_paired,
  attempts_exhausted,
  instance_too_large,
  parse_error,
  unsupported,
};

std::string_view to_string(Errc code) noexcept;

/// Library-wide exception; `code()` identifies the failure kind.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

} // namespace dicomo
