#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dialtree {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed linear text; `position` is the zero-based token index.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (token " + std::to_string(position) + ")"), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// An index or time value outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Vector lengths that do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A name that does not resolve against the ontology or database.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid input file (bad magic, version, schema).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Input file whose payload disagrees with its header.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// Sampling requested from a vocabulary with no negative candidates.
class NoCandidateError : public Error {
 public:
  using Error::Error;
};

/// Input that violates a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace dialtree
