#pragma once

#include <stdexcept>
#include <string>

namespace qdci {

/// Thrown when an enumeration or search exceeds its configured cap.
/// Callers that can degrade (e.g. the Babai test) catch this and report
/// an inconclusive verdict instead of failing.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a stated hypothesis of an operation fails validation.
/// The message names the violated condition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qdci
