#pragma once

#include <stdexcept>
#include <string>

namespace regulus {

/// Base class for all library errors. `kind()` is a short machine-readable tag
/// used by the CLI error records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Malformed input: bad system description, inconsistent bases, bad density.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

/// Configuration that makes a computation meaningless (e.g. log F(M) <= 1).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config_error", what) {}
};

/// A brute-force computation would exceed its enumeration cap.
class Infeasible : public Error {
 public:
  explicit Infeasible(const std::string& what) : Error("infeasible", what) {}
};

/// A caller-supplied precondition does not hold.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

/// An algorithm broke one of its own guarantees (iteration caps, audits).
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error("internal", what) {}
};

}  // namespace regulus
