#pragma once

#include <stdexcept>
#include <string>

namespace zoomax {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI when it serializes errors.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define ZOOMAX_DEFINE_ERROR(Name, tag)                                   \
  class Name : public Error {                                            \
  public:                                                                \
    explicit Name(const std::string& what) : Error(tag, what) {}         \
  };

ZOOMAX_DEFINE_ERROR(DomainError, "domain")
ZOOMAX_DEFINE_ERROR(InvalidInput, "invalid_input")
ZOOMAX_DEFINE_ERROR(ResourceError, "resource")
ZOOMAX_DEFINE_ERROR(CapabilityError, "capability")
ZOOMAX_DEFINE_ERROR(ConvergenceError, "convergence")
ZOOMAX_DEFINE_ERROR(HypothesisError, "hypothesis")
ZOOMAX_DEFINE_ERROR(PrecisionError, "precision")
ZOOMAX_DEFINE_ERROR(AmbiguityError, "ambiguity")
ZOOMAX_DEFINE_ERROR(PreconditionError, "precondition")

#undef ZOOMAX_DEFINE_ERROR

/// Raised when an orbit meets the critical set. `index` is the orbit step.
class SingularityError : public Error {
public:
  SingularityError(const std::string& what, long index)
      : Error("singularity", what), index_(index) {}
  long index() const noexcept { return index_; }

private:
  long index_;
};

}  // namespace zoomax
