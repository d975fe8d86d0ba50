#pragma once

#include <stdexcept>

namespace dmlimits {

// A mathematical precondition of an operation does not hold (CLI exit code 2).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed external input such as a chain file or a flag value (CLI exit code 1).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dmlimits
