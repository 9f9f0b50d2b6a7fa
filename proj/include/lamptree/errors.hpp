#pragma once

#include <stdexcept>
#include <string>

namespace lamptree {

/// An end (or a pair of ends) is not known to enough depth to answer the query.
class UnresolvedAtDepth : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two values built over different (signature, r) parameters were combined.
class ParameterMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class YNotOnGeodesic : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed textual or JSON input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lamptree
