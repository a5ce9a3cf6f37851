#pragma once

#include <stdexcept>
#include <string>

namespace nncc {

/// Raised when a configuration value violates a parameter invariant.
/// field() names the offending parameter.
class ValidationError : public std::invalid_argument {
public:
  enum class Kind { NonFinite, NonPositive, OutOfRange, UnknownKey };

  ValidationError(std::string field, Kind kind, const std::string& detail)
      : std::invalid_argument(field + ": " + detail), field_(std::move(field)), kind_(kind) {}

  const std::string& field() const noexcept { return field_; }
  Kind kind() const noexcept { return kind_; }

private:
  std::string field_;
  Kind kind_;
};

/// A quadrature or root search failed to reach its requested tolerance.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace nncc
