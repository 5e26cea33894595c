#include "resonance/error.hpp"

namespace resonance {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyDomain: return "empty-domain";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::NearZero: return "near-zero";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::EmptyInterval: return "empty-interval";
    case ErrorKind::Validation: return "validation";
  }
  return "unknown";
}

}  // namespace resonance
