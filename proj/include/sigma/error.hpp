#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sigma {

/// Violated precondition or malformed input.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration would exceed the configured resource budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t requested, std::uint64_t budget)
      : std::runtime_error("enumeration of " + std::to_string(requested) +
                           " items exceeds budget " + std::to_string(budget)),
        requested_(requested),
        budget_(budget) {}

  std::uint64_t requested() const { return requested_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t requested_;
  std::uint64_t budget_;
};

inline constexpr std::uint64_t kDefaultBudget = 2'000'000;

/// Budget from SIGMA_BUDGET when set and positive, otherwise kDefaultBudget.
std::uint64_t budget_from_env();

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

}  // namespace sigma
