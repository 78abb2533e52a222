#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace romanoff {

// Precondition violated by the caller (bad limit, composite modulus, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A sieve or lookup table is too small for the request. required_limit()
// is the smallest table limit that would have satisfied it.
class SieveExhausted : public std::runtime_error {
 public:
  SieveExhausted(const std::string& what, std::uint64_t required_limit)
      : std::runtime_error(what + " (required limit " + std::to_string(required_limit) + ")"),
        required_limit_(required_limit) {}

  std::uint64_t required_limit() const noexcept { return required_limit_; }

 private:
  std::uint64_t required_limit_;
};

// A proven identity or bound failed on computed data. Always a bug or a
// corrupted table, never a user error.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace romanoff
