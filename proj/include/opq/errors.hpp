#pragma once

#include <stdexcept>
#include <string>

namespace opq {

/// Input data violates a structural precondition (shape, color, arity, schema).
class StructuralError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A product or rewrite would produce a word longer than the truncation bound.
class TruncationOverflow : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Text or JSON input could not be parsed.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed; indicates a bug, not bad input.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace opq
