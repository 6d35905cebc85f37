#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace genaudit {

// Precondition violated by the caller (alphabet mismatch, unknown axis,
// wrong arity, non-stochastic kernel, loss on a foreign hypothesis kind).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Conditioning on a zero-mass slice.
class ConditioningError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exact enumeration would exceed the configured kernel-evaluation budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required,
                 std::uint64_t budget)
      : std::runtime_error(what), required_(required), budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

// Malformed scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two computational routes that must agree did not.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace genaudit
