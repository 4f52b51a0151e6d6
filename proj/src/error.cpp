#include "qbm/error.hpp"

namespace qbm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NonPositiveInput: return "NonPositiveInput";
    case ErrorKind::NegativeInput: return "NegativeInput";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::DomainContainsSingularity: return "DomainContainsSingularity";
    case ErrorKind::InvalidFormat: return "InvalidFormat";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonPositiveU: return "NonPositiveU";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::BadAmplitude: return "BadAmplitude";
    case ErrorKind::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorKind::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorKind::PayoffOutOfRange: return "PayoffOutOfRange";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::OutOfRange: return "OutOfRange";
  }
  return "Unknown";
}

}  // namespace qbm
