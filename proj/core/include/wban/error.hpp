// Exception types shared by all wban modules.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wban {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed a value outside the operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a hard resource guard (e.g. Walsh order).
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// Not enough cyclic-orthogonal codes at the requested matrix order.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::size_t max_achievable)
      : Error(what), max_achievable_(max_achievable) {}
  std::size_t max_achievable() const noexcept { return max_achievable_; }

 private:
  std::size_t max_achievable_;
};

/// A peer's interference list was not delivered before set formation.
class IncompleteBroadcastError : public Error {
 public:
  using Error::Error;
};

class MalformedTimestampError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// Configuration file failed to parse or validate.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wban
