#pragma once

#include <stdexcept>
#include <string>

namespace kolmo {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A (p_sf, p_cdf) pair whose members are not complementary.
class InvalidPairError : public std::invalid_argument {
 public:
  explicit InvalidPairError(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace kolmo
