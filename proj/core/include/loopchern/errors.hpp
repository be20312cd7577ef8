#pragma once

#include <stdexcept>
#include <string>

namespace loopchern {

/// Dimension or shape mismatch (odd n, wrong spinor size, n out of range).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation was violated by the caller.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation would exceed its configured size budget.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, double estimated, double budget)
      : std::runtime_error(what + " (estimated " + std::to_string(estimated) + ", budget " +
                           std::to_string(budget) + ")"),
        estimated_(estimated),
        budget_(budget) {}
  double estimated() const { return estimated_; }
  double budget() const { return budget_; }

 private:
  double estimated_;
  double budget_;
};

}  // namespace loopchern
