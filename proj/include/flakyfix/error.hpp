#pragma once

#include <stdexcept>
#include <string>

namespace flakyfix {

// Domain failure: bad input data, rule violations, exhausted retries.
// The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed command line or configuration. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flakyfix
