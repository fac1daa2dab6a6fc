#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bhlab {

enum class Errc {
  not_a_prime_power,
  size_cap_exceeded,
  cap_exceeded,
  invalid_params,
  degenerate_modulus,
  characteristic_too_small,
  non_prime_field_unsupported,
  zero_target,
  not_a_generator,
  invalid_distribution,
  empty_family,
  infeasible,
  budget_exceeded,
  parse_error,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace bhlab
