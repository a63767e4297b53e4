#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ucx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data (CSV/XES/JSON). Carries a 1-based line number when known.
class ParseError : public Error {
  public:
    explicit ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Input that is well-formed but rejected by a precondition (bad selection, bad config).
class DataError : public Error {
  public:
    using Error::Error;
};

/// A structure violated one of its own invariants (a bug or a corrupted graph).
class InvariantError : public Error {
  public:
    using Error::Error;
};

/// An exact oracle refused to run because its enumeration bound was exceeded.
class BoundExceeded : public Error {
  public:
    using Error::Error;
};

}  // namespace ucx
