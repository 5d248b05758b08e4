#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dpsqkd {

/// Base of every exception thrown by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Query outside a tabulated hull (attenuation, Raman shift, filter table).
class RangeError : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Malformed call (too few symbols, non-positive duration, ...).
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// Unknown element, axis or scenario name.
class LookupError : public Error {
public:
  using Error::Error;
};

/// Input data inconsistent with its ground truth or schema.
class DataError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// Scenario validation failure; carries one message per failing field.
class ConfigError : public Error {
public:
  explicit ConfigError(std::vector<std::string> issues);
  ConfigError(const std::string& single);

  const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
  std::vector<std::string> issues_;
};

class CalibrationError : public Error {
public:
  using Error::Error;
};

}  // namespace dpsqkd
