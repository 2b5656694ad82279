#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace botcorr {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input record. Carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A timestamp or index outside the range its container admits.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input whose content cannot be used (e.g. a send without a byte count).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a precondition (mismatched lengths, invalid configuration).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Stream read or write failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace botcorr
