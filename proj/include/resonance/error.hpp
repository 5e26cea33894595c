#pragma once

#include <stdexcept>
#include <string>

namespace resonance {

enum class ErrorKind {
  EmptyDomain,
  Domain,
  Precision,
  Pole,
  NearZero,
  Precondition,
  EmptyInterval,
  Validation,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace resonance
