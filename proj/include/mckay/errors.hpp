#pragma once

#include <stdexcept>
#include <string>

namespace mckay {

// Base class for every failure raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical invariant or consistency check failed. These are never
// downgraded to warnings: a failing closure, lift or multiplicity check means
// a wrong constant, modulus or input and the computation must stop.
class CheckFailure : public Error {
 public:
  CheckFailure(const std::string& stage, const std::string& what)
      : Error(stage + ": " + what), stage_(stage) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// An enumeration would exceed its configured cap. Enumerations refuse rather
// than silently truncate.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Unusable configuration or command line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mckay
