#pragma once

#include <stdexcept>
#include <string>

namespace espm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed config, missing field, or a violated parameter invariant.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class DatasetError : public Error {
 public:
  using Error::Error;
};

/// Solid surface concentration reached 0 or c_s_max.
class SaturationError : public Error {
 public:
  using Error::Error;
};

class PorosityError : public Error {
 public:
  using Error::Error;
};

/// Non-finite voltage, nonpositive electrolyte concentration, singular solve.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class OptimizationError : public Error {
 public:
  using Error::Error;
};

}  // namespace espm
