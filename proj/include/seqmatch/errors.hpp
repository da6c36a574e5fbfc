#pragma once

#include <stdexcept>
#include <string>

namespace seqmatch {

// Bad user input: malformed config, invalid distribution, out-of-range symbol.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical procedure could not produce a trustworthy value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A combinatorial object exceeds the configured enumeration cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seqmatch
