#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace xrank {

enum class ErrorKind {
  Parse,
  DuplicateId,
  BadMagic,
  TruncatedFile,
  CountMismatch,
  Io,
  InvalidArgument,
  DimMismatch,
  ZeroNorm,
  EmptyInput,
  UnknownSynset,
  EmptyGroundTruthConcepts,
  NoDistantColor,
  MissingQuery,
  EmptyText,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by line-oriented readers; `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + reason), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace xrank
