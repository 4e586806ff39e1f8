#pragma once

#include <stdexcept>
#include <string>

namespace floqep {

// Invalid physical input (negative intensity, R <= 0, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Configuration / model file problems. Carries the offending key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string &what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string &key() const { return key_; }

private:
  std::string key_;
};

// Eigensolver failure, broken continuation, norm bookkeeping violation.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace floqep
