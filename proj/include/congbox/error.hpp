#pragma once

#include <stdexcept>
#include <string>

namespace congbox {

// How the CLI maps an error onto its exit status.
enum class ErrorKind {
  Validation,  // bad input or configuration
  Guard,       // a size, cost or memory guard tripped
  Numerical,   // a computed quantity failed its own consistency check
};

/// Base of every error raised by the library. `name()` is the machine-readable
/// identifier printed on the CLI's diagnostics stream (e.g. "NotPrime").
class Error : public std::runtime_error {
 public:
  Error(std::string name, ErrorKind kind, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)), kind_(kind) {}

  const std::string& name() const noexcept { return name_; }
  ErrorKind kind() const noexcept { return kind_; }

 private:
  std::string name_;
  ErrorKind kind_;
};

inline Error NotPrime(const std::string& what) { return {"NotPrime", ErrorKind::Validation, what}; }
inline Error TooLarge(const std::string& what) { return {"TooLarge", ErrorKind::Guard, what}; }
inline Error IndexOutOfRange(const std::string& what) {
  return {"IndexOutOfRange", ErrorKind::Validation, what};
}
inline Error IntervalOutOfRange(const std::string& what) {
  return {"IntervalOutOfRange", ErrorKind::Validation, what};
}
inline Error InvalidInput(const std::string& what) {
  return {"InvalidInput", ErrorKind::Validation, what};
}
inline Error DomainError(const std::string& what) {
  return {"DomainError", ErrorKind::Validation, what};
}
inline Error SizeGuard(const std::string& what) { return {"SizeGuard", ErrorKind::Guard, what}; }
inline Error CostGuard(const std::string& what) { return {"CostGuard", ErrorKind::Guard, what}; }
inline Error PrecisionLoss(const std::string& what) {
  return {"PrecisionLoss", ErrorKind::Numerical, what};
}

}  // namespace congbox
