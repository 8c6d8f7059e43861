#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trop {

/// Stable error codes; the names are part of the CLI contract.
enum class Errc {
  cycle_detected,
  duplicate_arrow,
  missing_lca,
  size_limit,
  invalid_space,
  mass_mismatch,
  not_surjective,
  invalid_reduction,
  non_commutative,
  shape_mismatch,
  zero_mass_atom,
  inclusion_violation,
  group_too_large,
  not_a_chain,
  not_monotone,
  parse_error,
  invalid_argument,
  internal,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace trop
