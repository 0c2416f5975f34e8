#pragma once

#include <stdexcept>
#include <string>

namespace gifsdim {

// A mathematical hypothesis of a computation does not hold (graph not
// strongly connected, map not contracting, no simple Hensel root, ...).
class HypothesisError : public std::domain_error {
 public:
  explicit HypothesisError(const std::string& what) : std::domain_error(what) {}
};

// Malformed textual input (spec files, literals, digit strings).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gifsdim
