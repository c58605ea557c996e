#pragma once

#include <stdexcept>
#include <string>

namespace apx {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input: bad JSON, family mismatches,
/// out-of-range parameters, invalid multiplication tables.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A set computation would exceed the configured element budget.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& msg, std::size_t budget)
      : Error(msg), budget_(budget) {}
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t budget_;
};

/// A certificate or an asserted inclusion failed an exact check.
/// `detail` names the first failing condition or missing element.
class VerifyError : public Error {
 public:
  VerifyError(const std::string& msg, std::string detail)
      : Error(msg), detail_(std::move(detail)) {}
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
};

/// Integer coordinate arithmetic left the supported int64 range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace apx
