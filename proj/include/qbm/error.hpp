#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qbm {

enum class ErrorKind {
  Overflow,
  NonPositiveInput,
  NegativeInput,
  OutOfDomain,
  DomainContainsSingularity,
  InvalidFormat,
  InvalidArgument,
  NonPositiveU,
  DimensionMismatch,
  NotPositiveDefinite,
  BadAmplitude,
  EpsilonTooLarge,
  EpsilonOutOfRange,
  PayoffOutOfRange,
  EmptySample,
  TooFewSamples,
  OutOfRange,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qbm
