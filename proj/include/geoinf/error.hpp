#pragma once

#include <stdexcept>
#include <string>

namespace geoinf {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A set kind does not support the requested operation (e.g. enlarging a generic oracle).
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// A fiber scan found more components than the oracle declared.
class FiberResolutionError : public std::runtime_error {
 public:
  explicit FiberResolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed set/measure specification string.
class SpecError : public std::invalid_argument {
 public:
  explicit SpecError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace geoinf
