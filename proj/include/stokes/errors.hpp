#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stokes {

/// Malformed textual input. `position()` is a 0-based byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Input outside an operation's domain (zero polynomial where nonzero is required, ramified where
/// unramified is required, non-unit division, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A theorem hypothesis (pole-order bound, sector amplitude, Katz bound) is violated.
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace stokes
