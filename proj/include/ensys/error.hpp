#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ensys {

/// Malformed textual input. `position` is a 0-based character offset into the
/// parsed text (for multi-line input, into the whole buffer).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A search hit its node or size budget before finishing.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ensys
