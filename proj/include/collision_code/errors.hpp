#pragma once

#include <stdexcept>
#include <string>

namespace collision_code {

/// A requested size exceeds a configured budget (station cap, table limit,
/// enumeration budget).
class size_limit_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed text input: codebook header/rows, bit strings, station lists.
class parse_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input that is well-formed but violates a structural invariant of the code.
class invariant_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation's precondition was not met by otherwise valid arguments.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematically guaranteed property failed to hold. Always a bug.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace collision_code
