#pragma once

#include <stdexcept>
#include <string>

namespace isac {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad or missing configuration value. `key()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& msg)
      : Error(key + ": " + msg), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Precondition violation on an operation's arguments.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

/// The requested problem has no feasible solution (sensing budget, unreachable accuracy...).
class Infeasible : public Error {
 public:
  explicit Infeasible(const std::string& msg) : Error(msg) {}
};

}  // namespace isac
