#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace hplab {

/// Invalid user input: malformed points, bad indices, schema violations.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not meet its post-condition.
///
/// `residual()` carries the offending quantity (a reconstruction error, an
/// eigenvalue, a condition number) when one is available, NaN otherwise.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what,
                          double residual = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The kernel restricted to the given points fails the complete Pick test.
class NotCompletePickError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace hplab
