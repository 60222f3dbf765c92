#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace more {

// Base of every error the library throws. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class EmptyVocabularyError : public Error {
 public:
  using Error::Error;
};

class CycleError : public Error {
 public:
  explicit CycleError(const std::string& member)
      : Error("cycle detected in is-a hierarchy (involves concept '" + member + "')"),
        member_(member) {}

  const std::string& member() const noexcept { return member_; }

 private:
  std::string member_;
};

class UnknownConceptError : public Error {
 public:
  explicit UnknownConceptError(const std::string& id)
      : Error("unknown concept '" + id + "'"), id_(id) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class ChecksumMismatchError : public Error {
 public:
  ChecksumMismatchError(const std::string& what, const std::string& expected,
                        const std::string& found)
      : Error(what + ": vocabulary checksum mismatch (expected " + expected + ", found " +
              found + ")"),
        expected_(expected),
        found_(found) {}

  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::string expected_;
  std::string found_;
};

// Violated operation precondition (bad dimension, empty batch, n too small, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// NaN or Inf appeared in the embedding tables during training.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace more
