// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace groupcast {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failures caused by the numbers themselves (rank loss, indefinite
/// matrices, out-of-domain arguments). The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Failures caused by malformed input or configuration. The CLI maps these
/// to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public NumericalError {
 public:
  explicit RankDeficient(const std::string& what)
      : NumericalError("RankDeficient: " + what) {}
};

class NotPositiveDefinite : public NumericalError {
 public:
  explicit NotPositiveDefinite(const std::string& what)
      : NumericalError("NotPositiveDefinite: " + what) {}
};

class PowerMismatch : public NumericalError {
 public:
  explicit PowerMismatch(const std::string& what)
      : NumericalError("PowerMismatch: " + what) {}
};

class EmptyGains : public NumericalError {
 public:
  explicit EmptyGains(const std::string& what)
      : NumericalError("EmptyGains: " + what) {}
};

class DomainError : public NumericalError {
 public:
  explicit DomainError(const std::string& what)
      : NumericalError("DomainError: " + what) {}
};

class StaleCache : public NumericalError {
 public:
  explicit StaleCache(const std::string& what)
      : NumericalError("StaleCache: " + what) {}
};

class BadDimensions : public ConfigError {
 public:
  explicit BadDimensions(const std::string& what)
      : ConfigError("BadDimensions: " + what) {}
};

class ParseError : public ConfigError {
 public:
  explicit ParseError(const std::string& what)
      : ConfigError("ParseError: " + what) {}
};

class InvalidGrouping : public ConfigError {
 public:
  explicit InvalidGrouping(const std::string& what)
      : ConfigError("InvalidGrouping: " + what) {}
};

class BudgetExceeded : public ConfigError {
 public:
  explicit BudgetExceeded(const std::string& what)
      : ConfigError("BudgetExceeded: " + what) {}
};

class TooFewSamples : public ConfigError {
 public:
  explicit TooFewSamples(const std::string& what)
      : ConfigError("TooFewSamples: " + what) {}
};

}  // namespace groupcast
